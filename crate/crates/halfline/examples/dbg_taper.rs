use halfline::direct::sample_direct;
use halfline::marchenko::{invert, MarchenkoOptions};
use halfline::potential::{make_operator_spec, BoundaryParameter};

fn main() {
    let a = 0.857246588266;
    let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet).unwrap();
    let (_, s, _) = sample_direct(&spec, 100.0, 0.01).unwrap();
    for frac in [0.05f64, 0.15, 0.3, 0.5] {
        let opts = MarchenkoOptions { taper_frac: frac, ..Default::default() };
        let res = invert(&s, &opts).unwrap();
        println!(
            "frac={frac}: s_repro = {:?}, integrals = {:?}",
            res.diagnostics.s_reproduction,
            res.diagnostics.potential_integrals,
        );
    }
}
