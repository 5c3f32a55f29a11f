use halfline::direct::{full_line_coefficients, sample_direct, scattering_matrix};
use halfline::marchenko::{full_line_marchenko, invert, MarchenkoOptions};
use halfline::potential::{integral_of_potential, make_operator_spec, BoundaryParameter, OperatorSpec};
use halfline::SampledFunction;
use num_complex::Complex64;

fn main() {
    let a = 0.857246588266;
    let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet).unwrap();
    let (_, s, _) = sample_direct(&spec, 100.0, 0.01).unwrap();
    let opts = MarchenkoOptions::default();
    let res = invert(&s, &opts).unwrap();
    let v2 = &res.solutions[1].spec;
    let n = v2.potential.cells.len();
    println!("V2 cells at x=0.1..0.9:");
    for frac in [0.05, 0.25, 0.45, 0.55, 0.75, 0.95] {
        let i = ((frac * n as f64) as usize).min(n - 1);
        println!("  x={:.3}: {:.5}", (i as f64 + 0.5) / n as f64, v2.potential.cells[i]);
    }
    // compare with the full-line route: V2 from -R1 (computed directly)
    let grid: Vec<f64> = (0..=10000).map(|i| i as f64 * 0.01).collect();
    let mut vals = Vec::new();
    for &k in &grid {
        let c = full_line_coefficients(&spec, Complex64::new(k, 0.0)).unwrap();
        vals.push(-c.r);
    }
    let mr = SampledFunction::new(grid, vals).unwrap();
    let v2_fl = full_line_marchenko(&mr, &opts).unwrap();
    let m = v2_fl.cells.len();
    println!("V2 via full-line -R1:");
    for frac in [0.05, 0.25, 0.45, 0.55, 0.75, 0.95] {
        let i = ((frac * m as f64) as usize).min(m - 1);
        println!("  x={:.3}: {:.5}", (i as f64 + 0.5) / m as f64, v2_fl.cells[i]);
    }
    println!("int V2 (invert) = {:.6}", integral_of_potential(v2));
    println!("int V2 (full-line) = {:.6}", integral_of_potential(&OperatorSpec{potential: v2_fl.clone(), boundary: BoundaryParameter::Dirichlet}));
    // S2 reproduction profile for the invert() V2
    for &k in &[0.01f64, 0.05, 0.2, 1.0, 5.0, 20.0] {
        let idx = (k / 0.01).round() as usize;
        let s_true = s.values[idx];
        let s2 = scattering_matrix(v2, k).unwrap();
        println!("k={k}: S_true={s_true:.5} S2={s2:.5} diff={:.3e}", (s2 - s_true).norm());
    }
}
