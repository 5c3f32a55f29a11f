use halfline::direct::sample_direct;
use halfline::marchenko::{invert, MarchenkoOptions};
use halfline::potential::{make_operator_spec, BoundaryParameter};

fn main() {
    let spec = make_operator_spec(1.0, &[0.0], BoundaryParameter::NonDirichlet { cot_theta: 1.0 }).unwrap();
    let s = sample_direct(&spec, 100.0, 0.01).unwrap().1;
    let res = invert(&s, &MarchenkoOptions::default()).unwrap();
    let sol = &res.solutions[0];
    println!("cot = {:.10}", sol.spec.boundary.cot_theta().unwrap());
    println!("max|V| = {:.3e}", sol.spec.potential.max_abs());
    println!("S reproduction: {:.3e}", res.diagnostics.s_reproduction[0]);
    println!("gamma = {:.9}, m^2 = {:.9}, g^2 = {:.9}",
        sol.bound_states.entries[0].gamma,
        sol.bound_states.entries[0].m.powi(2),
        sol.bound_states.entries[0].g.powi(2));
}
