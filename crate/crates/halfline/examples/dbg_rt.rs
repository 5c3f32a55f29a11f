use halfline::darboux::*;
use halfline::potential::{make_operator_spec, BoundaryParameter};

fn main() {
    let spec = make_operator_spec(1.0, &[-0.2], BoundaryParameter::NonDirichlet { cot_theta: 6.0 }).unwrap();
    let gamma = 3.3618189;
    let added = add_bound_state(&spec, gamma).unwrap();
    let bs = added.bound_state.unwrap();
    let removed = remove_bound_state(&added.spec, bs.gamma, bs.g).unwrap();
    let m = removed.spec.potential.cells.len();
    // block-average comparisons at several granularities
    for blocks in [1usize, 64, 512, 4096] {
        let per = m / blocks;
        let mut worst = 0.0f64;
        for b in 0..blocks {
            let avg: f64 = removed.spec.potential.cells[b*per..(b+1)*per].iter().sum::<f64>() / per as f64;
            worst = worst.max((avg + 0.2).abs());
        }
        println!("block-average deviation at {blocks} blocks: {worst:.3e}");
    }
    // re-add test: relocate resonance on removed spec near 6.0166
    use halfline::resonance::imaginary_resonances;
    let rs = imaginary_resonances(&removed.spec, 8.0).unwrap();
    println!("resonances of removed spec: {:?}", rs);
    // Ex 6.1-style re-add check
    let free = make_operator_spec(1.0, &[0.0], BoundaryParameter::NonDirichlet { cot_theta: 1.0 }).unwrap();
    let rem = remove_bound_state(&free, 1.0, 2.0_f64.sqrt()).unwrap();
    let g2b = support_preserving_norming_constant(&rem.spec, 1.0).unwrap();
    println!("free re-add g2 = {g2b:.12} (expect 2)");
}
