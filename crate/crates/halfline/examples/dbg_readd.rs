use halfline::darboux::*;
use halfline::direct::bound_states;
use halfline::potential::{make_operator_spec, BoundaryParameter};
use halfline::resonance::imaginary_resonances;

fn main() {
    let spec = make_operator_spec(1.0, &[-0.2], BoundaryParameter::NonDirichlet { cot_theta: 6.0 }).unwrap();
    let bs = bound_states(&spec, 10.0).unwrap();
    let st = bs.entries[0];
    println!("bound state gamma={} g2={}", st.gamma, st.g*st.g);
    for min_cells in [4096usize, 16384, 32768, 65536] {
        let opts = DarbouxOptions { min_cells };
        let removed = remove_bound_state_opts(&spec, st.gamma, st.g, opts).unwrap();
        let rs = imaginary_resonances(&removed.spec, 8.0).unwrap();
        let gam = rs.iter().min_by(|a,b| (a.0-st.gamma).abs().partial_cmp(&(b.0-st.gamma).abs()).unwrap()).unwrap().0;
        let g2b = h_based_g_squared(&removed.spec, gam).unwrap();
        println!("min_cells={min_cells}: gamma_shift={:+.3e} g2_back={:.6} err={:+.3e}", gam-st.gamma, g2b, g2b-st.g*st.g);
    }
}
