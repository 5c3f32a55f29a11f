use halfline::rational::EvenChebModel;
fn main() {
    let ks: Vec<f64> = (1..=10000).map(|i| i as f64 * 0.01).collect();
    let vals: Vec<f64> = ks.iter().map(|&k| (2.0 * k).cos()).collect();
    for n in [150, 200, 260, 300] {
        let model = EvenChebModel::fit(&ks, &vals, n, 3000).unwrap();
        let r = model.relative_residual(&ks, &vals);
        let e = (model.eval_at_s(-2.25) - (3.0_f64).cosh()).abs() / (3.0_f64).cosh();
        println!("n={n}: resid={r:.3e} extrap_rel_err(g=1.5)={e:.3e}");
    }
}
