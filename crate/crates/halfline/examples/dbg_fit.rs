use halfline::direct::sample_direct;
use halfline::potential::{make_operator_spec, BoundaryParameter};
use halfline::rational::EvenChebModel;

fn main() {
    let spec = make_operator_spec(1.0, &[-0.2], BoundaryParameter::NonDirichlet { cot_theta: 6.0 }).unwrap();
    let absf = sample_direct(&spec, 100.0, 0.01).unwrap().2;
    let ks: Vec<f64> = absf.grid.iter().copied().filter(|&k| k >= 0.0).collect();
    let q: Vec<f64> = absf.grid.iter().zip(&absf.values).filter(|(k,_)| **k >= 0.0).map(|(_,v)| v.re*v.re).collect();
    for n in [120usize, 140, 160, 180, 200, 220, 240] {
        if let Ok(model) = EvenChebModel::fit(&ks, &q, n, 4001) {
            let r = model.relative_residual(&ks, &q);
            // newton for the deep zero near s = -36.2
            let mut s = -36.2_f64;
            for _ in 0..60 {
                let f = model.eval_at_s(s);
                let d = model.deriv_at_s(s);
                let st = f / d;
                s -= st;
                if st.abs() < 1e-13 * (1.0 + s.abs()) { break; }
            }
            let gam = (-s).sqrt();
            let g2 = 2.0 * gam / model.deriv_at_s(s);
            println!("n={n}: resid={r:.3e} gamma={gam:.7} g2={g2:.6}");
        }
    }
}
