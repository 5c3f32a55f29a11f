use halfline::direct::sample_direct;
use halfline::marchenko::{invert, MarchenkoOptions};
use halfline::potential::{make_operator_spec, BoundaryParameter};

fn main() {
    let a = 0.857246588266;
    let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet).unwrap();
    for kmax in [100.0f64, 200.0, 400.0] {
        let (_, s, _) = sample_direct(&spec, kmax, 0.01).unwrap();
        let opts = MarchenkoOptions::default();
        let res = invert(&s, &opts).unwrap();
        println!(
            "kmax={kmax}: s_repro = {:?}, integrals = {:?}",
            res.diagnostics.s_reproduction,
            res.diagnostics.potential_integrals,
        );
        // где sup: profile solution-1 error
        use halfline::direct::scattering_matrix;
        let v1 = &res.solutions[0].spec;
        let mut worst = (0.0f64, 0.0f64);
        for (i, (&k, &sv)) in s.grid.iter().zip(&s.values).enumerate() {
            if i % 25 != 0 { continue; }
            let d = (scattering_matrix(v1, k).unwrap() - sv).norm() / (1.0 + sv.norm());
            if d > worst.1 { worst = (k, d); }
        }
        println!("   worst S1 deviation at k = {:.2}: {:.3e}", worst.0, worst.1);
    }
}
