use halfline::darboux::*;
use halfline::direct::bound_states;
use halfline::potential::{make_operator_spec, BoundaryParameter};

fn main() {
    let spec = make_operator_spec(1.0, &[-0.2], BoundaryParameter::NonDirichlet { cot_theta: 6.0 }).unwrap();
    let bs = bound_states(&spec, 10.0).unwrap();
    let st = bs.entries[0];
    let removed = remove_bound_state(&spec, st.gamma, st.g).unwrap();
    let n = removed.spec.potential.cells.len();
    for frac in [0.0, 0.1, 0.3, 0.5, 0.7, 0.85, 0.95] {
        let i = ((frac * n as f64) as usize).min(n-1);
        println!("x={:.6}: V0 = {:.10}", (i as f64 + 0.5)/n as f64, removed.spec.potential.cells[i]);
    }
    println!("cot0 = {:.10}", removed.spec.boundary.cot_theta().unwrap());
}
