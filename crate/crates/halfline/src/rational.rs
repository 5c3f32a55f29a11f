//! Adaptive rational interpolation (barycentric, greedy support selection)
//! and even-Chebyshev least-squares continuation.
//!
//! The rational fit approximates scattering-matrix samples and is evaluated
//! off the real axis to locate bound-state poles. The Chebyshev model fits
//! an even entire function of `k` (such as `|F(k)|²`) as a polynomial in
//! `s = k²` and continues it to `s < 0`; being pole-free, the polynomial
//! continuation is limited only by the data's noise floor, not by spurious
//! poles parked next to the evaluation region.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Barycentric rational approximant built by greedy residual-driven
/// support-point selection with SVD-optimal weights.
#[derive(Debug, Clone)]
pub struct RationalApproximant {
    pub support: Vec<Complex64>,
    pub values: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

impl RationalApproximant {
    /// Fits `data` on `points` to relative tolerance `rel_tol` (measured in
    /// the sup norm against `max |data|`), using at most `mmax` support
    /// points. Returns the approximant and the achieved relative residual.
    pub fn fit(
        points: &[Complex64],
        data: &[Complex64],
        rel_tol: f64,
        mmax: usize,
    ) -> Result<(RationalApproximant, f64)> {
        let n = points.len();
        if n != data.len() || n < 4 {
            return Err(Error::InvalidInput("rational fit needs matching, non-trivial data".into()));
        }
        let scale = data.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1e-300);
        let mean = data.iter().sum::<Complex64>() / n as f64;

        let mut in_support = vec![false; n];
        let mut support: Vec<usize> = Vec::new();
        let mut r: Vec<Complex64> = vec![mean; n];
        let mut weights: Vec<Complex64> = Vec::new();
        let mut best_err = f64::INFINITY;

        for _ in 0..mmax.min(n / 2) {
            // next support point: worst residual among free points
            let (mut jmax, mut emax) = (usize::MAX, -1.0);
            for j in 0..n {
                if in_support[j] {
                    continue;
                }
                let e = (data[j] - r[j]).norm();
                if e > emax {
                    emax = e;
                    jmax = j;
                }
            }
            if jmax == usize::MAX {
                break;
            }
            in_support[jmax] = true;
            support.push(jmax);
            let m = support.len();

            // Loewner matrix over free rows
            let free: Vec<usize> = (0..n).filter(|&i| !in_support[i]).collect();
            let mut a = DMatrix::<Complex64>::zeros(free.len(), m);
            for (row, &i) in free.iter().enumerate() {
                for (col, &j) in support.iter().enumerate() {
                    let c = Complex64::new(1.0, 0.0) / (points[i] - points[j]);
                    a[(row, col)] = c * (data[i] - data[j]);
                }
            }
            let svd = a.svd(false, true);
            let vt = svd.v_t.ok_or_else(|| Error::Numerical("SVD failed in rational fit".into()))?;
            let last = vt.nrows() - 1;
            weights = (0..m).map(|c| vt[(last, c)].conj()).collect();

            // evaluate the updated approximant on all points
            for i in 0..n {
                if in_support[i] {
                    r[i] = data[i];
                    continue;
                }
                let mut num = Complex64::new(0.0, 0.0);
                let mut den = Complex64::new(0.0, 0.0);
                for (c, &j) in support.iter().enumerate() {
                    let inv = Complex64::new(1.0, 0.0) / (points[i] - points[j]);
                    num += weights[c] * data[j] * inv;
                    den += weights[c] * inv;
                }
                r[i] = num / den;
            }
            best_err = (0..n).map(|i| (data[i] - r[i]).norm()).fold(0.0, f64::max) / scale;
            if best_err < rel_tol {
                break;
            }
        }
        let approx = RationalApproximant {
            support: support.iter().map(|&j| points[j]).collect(),
            values: support.iter().map(|&j| data[j]).collect(),
            weights,
        };
        Ok((approx, best_err))
    }

    /// Barycentric evaluation anywhere in ℂ.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for ((&zj, &fj), &wj) in self.support.iter().zip(&self.values).zip(&self.weights) {
            let d = z - zj;
            if d.norm() < 1e-13 * (1.0 + z.norm()) {
                return fj;
            }
            let inv = Complex64::new(1.0, 0.0) / d;
            num += wj * fj * inv;
            den += wj * inv;
        }
        num / den
    }

    /// Simple poles of the approximant on the positive imaginary axis in
    /// `(0, beta_max]`, found as zeros of `u(β) = 1/r(iβ)` (real there for
    /// conjugate-symmetric data), with residues from `Res = i / (du/dβ)`.
    /// Poles with residues below `min_residue` are discarded as artifacts.
    pub fn poles_on_positive_imaginary_axis(
        &self,
        beta_max: f64,
        min_residue: f64,
    ) -> Vec<(f64, Complex64)> {
        let u = |beta: f64| -> Complex64 {
            let v = self.eval(Complex64::new(0.0, beta));
            if v.norm() < 1e-300 {
                Complex64::new(f64::INFINITY, 0.0)
            } else {
                1.0 / v
            }
        };
        let n = 4000;
        let mut poles = Vec::new();
        let mut prev_b = beta_max / n as f64;
        let mut prev = u(prev_b);
        for i in 2..=n {
            let b = beta_max * i as f64 / n as f64;
            let cur = u(b);
            if prev.re * cur.re < 0.0 {
                let (mut lo, mut hi) = (prev_b, b);
                let mut ulo = prev;
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let um = u(mid);
                    if ulo.re * um.re <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                        ulo = um;
                    }
                }
                let beta = 0.5 * (lo + hi);
                let ub = u(beta);
                // a true pole makes u vanish entirely, not just its real part
                let local = u(beta + 0.05 * (1.0 + beta)).norm().max(u(beta - 0.05 * (1.0 + beta)).norm());
                if ub.norm() < 1e-2 * local.max(1e-12) {
                    let h = 1e-6 * (1.0 + beta);
                    let du = (u(beta + h) - u(beta - h)) / (2.0 * h);
                    if du.norm() > 1e-300 {
                        let residue = Complex64::i() / du;
                        if residue.norm() > min_residue {
                            poles.push((beta, residue));
                        }
                    }
                }
            }
            prev_b = b;
            prev = cur;
        }
        poles
    }
}

/// Even polynomial model of an entire function of `k`: a Chebyshev series in
/// `u = 2(k/kmax)² - 1`, fitted by least squares and evaluated for `k² < 0`
/// through the hyperbolic closed forms of `T_n` outside `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct EvenChebModel {
    pub kmax: f64,
    pub coeffs: Vec<f64>,
}

impl EvenChebModel {
    /// Least-squares fit of `(ks, vals)` with `n_terms` Chebyshev
    /// coefficients (rows subsampled to at most `max_rows`).
    pub fn fit(ks: &[f64], vals: &[f64], n_terms: usize, max_rows: usize) -> Result<EvenChebModel> {
        let n = ks.len();
        if n < 2 * n_terms {
            return Err(Error::InvalidInput(format!(
                "even-Chebyshev fit needs at least {} samples, got {n}",
                2 * n_terms
            )));
        }
        let kmax = *ks.last().unwrap();
        let stride = n.div_ceil(max_rows);
        let rows: Vec<usize> = (0..n).step_by(stride).collect();
        let mut a = DMatrix::<f64>::zeros(rows.len(), n_terms);
        for (r, &i) in rows.iter().enumerate() {
            let t = ks[i] / kmax;
            let u = 2.0 * t * t - 1.0;
            let mut tm1 = 1.0;
            let mut tm = u;
            a[(r, 0)] = 1.0;
            if n_terms > 1 {
                a[(r, 1)] = u;
            }
            for c in 2..n_terms {
                let tn = 2.0 * u * tm - tm1;
                a[(r, c)] = tn;
                tm1 = tm;
                tm = tn;
            }
        }
        let b = DVector::from_iterator(rows.len(), rows.iter().map(|&i| vals[i]));
        let svd = a.clone().svd(true, true);
        let mut c = svd
            .solve(&b, 1e-14)
            .map_err(|e| Error::Numerical(format!("least-squares fit failed: {e}")))?;
        // one step of iterative refinement: recovers the digits the plain
        // SVD solve leaves on the table at high degree
        let resid = &b - &a * &c;
        if let Ok(dc) = svd.solve(&resid, 1e-14) {
            c += dc;
        }
        Ok(EvenChebModel { kmax, coeffs: c.as_slice().to_vec() })
    }

    /// Fits with increasing term counts and returns the SMALLEST degree that
    /// reaches `rel_target` (extrapolation noise grows with degree, so the
    /// first adequate fit continues best); falls back to the best-residual
    /// fit when the target is never met.
    pub fn fit_adaptive(
        ks: &[f64],
        vals: &[f64],
        rel_target: f64,
        max_terms: usize,
    ) -> Result<(EvenChebModel, f64)> {
        let mut best: Option<(EvenChebModel, f64)> = None;
        let mut n = 60;
        while n <= max_terms {
            if let Ok(model) = EvenChebModel::fit(ks, vals, n, 4001) {
                let r = model.relative_residual(ks, vals);
                let better = best.as_ref().map_or(true, |(_, rb)| r < *rb);
                if better {
                    best = Some((model, r));
                }
                if r < rel_target {
                    break;
                }
            }
            n += 20;
        }
        best.ok_or_else(|| Error::Numerical("even-Chebyshev fit failed at all degrees".into()))
    }

    /// Max relative deviation from the data.
    pub fn relative_residual(&self, ks: &[f64], vals: &[f64]) -> f64 {
        let scale = vals.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
        ks.iter()
            .zip(vals)
            .map(|(&k, &v)| (self.eval_at_s(k * k) - v).abs())
            .fold(0.0, f64::max)
            / scale
    }

    /// Value at `s = k²` (any real `s`, inside or beyond the data range).
    pub fn eval_at_s(&self, s: f64) -> f64 {
        let u = 2.0 * s / (self.kmax * self.kmax) - 1.0;
        if u.abs() <= 1.0 {
            // Clenshaw
            let (mut b1, mut b2) = (0.0, 0.0);
            for &c in self.coeffs.iter().rev() {
                let b0 = 2.0 * u * b1 - b2 + c;
                b2 = b1;
                b1 = b0;
            }
            b1 - u * b2
        } else {
            // T_n(u) = sign^n cosh(n·acosh|u|)
            let sign: f64 = if u < 0.0 { -1.0 } else { 1.0 };
            let a = u.abs().acosh();
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate() {
                let t = (j as f64 * a).cosh() * sign.powi(j as i32);
                acc += c * t;
            }
            acc
        }
    }

    /// `d/ds` of the model at `s` (`dT_n/du = n U_{n-1}`, hyperbolic form
    /// outside the interval).
    pub fn deriv_at_s(&self, s: f64) -> f64 {
        let u = 2.0 * s / (self.kmax * self.kmax) - 1.0;
        let du_ds = 2.0 / (self.kmax * self.kmax);
        if u.abs() < 1.0 - 1e-12 {
            let th = u.acos();
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate().skip(1) {
                let un1 = (j as f64 * th).sin() / th.sin();
                acc += c * j as f64 * un1;
            }
            acc * du_ds
        } else {
            let sign: f64 = if u < 0.0 { -1.0 } else { 1.0 };
            let a = u.abs().acosh().max(1e-14);
            let sh = a.sinh();
            let mut acc = 0.0;
            for (j, &c) in self.coeffs.iter().enumerate().skip(1) {
                // U_{n-1}(u) = sign^{n-1} sinh(n a)/sinh a
                let un1 = (j as f64 * a).sinh() / sh * sign.powi(j as i32 - 1);
                acc += c * j as f64 * un1;
            }
            acc * du_ds
        }
    }
}
