use halfline::direct::sample_direct;
use halfline::potential::{make_operator_spec, BoundaryParameter};
use nalgebra::{DMatrix, DVector};

fn fit_weighted(ks: &[f64], q: &[f64], n_terms: usize, max_rows: usize, weight_pow: f64) -> (Vec<f64>, f64) {
    let kmax = *ks.last().unwrap();
    let stride = ks.len().div_ceil(max_rows);
    let rows: Vec<usize> = (0..ks.len()).step_by(stride).collect();
    let mut a = DMatrix::<f64>::zeros(rows.len(), n_terms);
    let mut b = DVector::<f64>::zeros(rows.len());
    for (r, &i) in rows.iter().enumerate() {
        let t = ks[i] / kmax;
        let u = 2.0 * t * t - 1.0;
        let w = 1.0 / (1.0 + ks[i] * ks[i]).powf(weight_pow);
        let mut tm1 = 1.0; let mut tm = u;
        a[(r, 0)] = w;
        if n_terms > 1 { a[(r, 1)] = u * w; }
        for c in 2..n_terms {
            let tn = 2.0 * u * tm - tm1;
            a[(r, c)] = tn * w;
            tm1 = tm; tm = tn;
        }
        b[r] = q[i] * w;
    }
    let svd = a.clone().svd(true, true);
    let mut c = svd.solve(&b, 1e-14).unwrap();
    // one step of iterative refinement
    let resid = &b - &a * &c;
    if let Ok(dc) = svd.solve(&resid, 1e-14) { c += dc; }
    // measure unweighted relative residual on all rows
    let mut worst = 0.0f64;
    let scale = q.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (r, &i) in rows.iter().enumerate() {
        let w = 1.0 / (1.0 + ks[i] * ks[i]).powf(weight_pow);
        let fit: f64 = (0..n_terms).map(|j| a[(r, j)] * c[j]).sum::<f64>() / w;
        worst = worst.max((fit - q[i]).abs());
    }
    (c.as_slice().to_vec(), worst / scale)
}

fn eval_model(c: &[f64], kmax: f64, s: f64) -> f64 {
    let u = 2.0 * s / (kmax * kmax) - 1.0;
    let sign: f64 = if u < 0.0 { -1.0 } else { 1.0 };
    let a = u.abs().acosh();
    c.iter().enumerate().map(|(j, &cj)| cj * (j as f64 * a).cosh() * sign.powi(j as i32)).sum()
}
fn deriv_model(c: &[f64], kmax: f64, s: f64) -> f64 {
    let u = 2.0 * s / (kmax * kmax) - 1.0;
    let du = 2.0 / (kmax * kmax);
    let sign: f64 = if u < 0.0 { -1.0 } else { 1.0 };
    let a = u.abs().acosh().max(1e-15);
    let sh = a.sinh();
    c.iter().enumerate().skip(1).map(|(j, &cj)| cj * j as f64 * (j as f64 * a).sinh() / sh * sign.powi(j as i32 - 1)).sum::<f64>() * du
}

fn main() {
    let spec = make_operator_spec(1.0, &[-0.2], BoundaryParameter::NonDirichlet { cot_theta: 6.0 }).unwrap();
    let absf = sample_direct(&spec, 100.0, 0.01).unwrap().2;
    let ks: Vec<f64> = absf.grid.iter().copied().filter(|&k| k >= 0.0).collect();
    let q: Vec<f64> = absf.grid.iter().zip(&absf.values).filter(|(k,_)| **k >= 0.0).map(|(_,v)| v.re*v.re).collect();
    let kmax = *ks.last().unwrap();
    for (rows, wp) in [(4001usize, 0.0f64)] {
        for n in [140usize, 160, 200, 240, 280] {
            let (c, r) = fit_weighted(&ks, &q, n, rows, wp);
            let mut s = -36.2_f64;
            for _ in 0..60 {
                let f = eval_model(&c, kmax, s);
                let d = deriv_model(&c, kmax, s);
                let st = f / d; s -= st;
                if st.abs() < 1e-13 * (1.0 + s.abs()) { break; }
            }
            let gam = (-s).sqrt();
            let g2 = 2.0 * gam / deriv_model(&c, kmax, s);
            println!("rows={rows} wpow={wp} n={n}: resid={r:.2e} gamma={gam:.7} g2={g2:.6}");
        }
    }
}
