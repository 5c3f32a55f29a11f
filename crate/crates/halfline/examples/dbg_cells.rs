use halfline::direct::sample_direct;
use halfline::marchenko::{invert, MarchenkoOptions};
use halfline::potential::{make_operator_spec, BoundaryParameter};

fn main() {
    let a = 0.857246588266;
    let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet).unwrap();
    let (_, s, _) = sample_direct(&spec, 100.0, 0.01).unwrap();
    let res = invert(&s, &MarchenkoOptions { defect_correction: false, ..Default::default() }).unwrap();
    let v1 = &res.solutions[0].spec.potential;
    let n = v1.cells.len();
    println!("V1 profile (true: +1 on (0,.5), -0.857 on (.5,1)):");
    for i in [0, 1, 2, 5, n/4, n/2 - 2, n/2 + 2, 3*n/4, n-6, n-3, n-2, n-1] {
        println!("  cell {i} (x={:.4}): {:+.5}", (i as f64 + 0.5)/n as f64, v1.cells[i]);
    }
}
