use halfline::direct::sample_direct;
use halfline::marchenko::{invert, MarchenkoOptions};
use halfline::potential::{make_operator_spec, BoundaryParameter};
use std::time::Instant;

fn main() {
    let a = 0.857246588266;
    let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet).unwrap();
    let (_, s, _) = sample_direct(&spec, 100.0, 0.01).unwrap();
    for nodes in [256usize, 384, 512] {
        let t = Instant::now();
        let opts = MarchenkoOptions { nodes_per_b: nodes, ..Default::default() };
        let res = invert(&s, &opts).unwrap();
        println!(
            "nodes={nodes}: s_repro = {:?}, jost_id = {:?}, integrals = {:?}  ({:.1?})",
            res.diagnostics.s_reproduction,
            res.diagnostics.jost_identity_residual,
            res.diagnostics.potential_integrals,
            t.elapsed()
        );
    }
}
