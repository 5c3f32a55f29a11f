//! Dense Nyström solver for Fredholm integral equations of the second kind
//! on a uniform grid with trapezoid weights.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Solves `u(y_r) + Σ_j w_j K(r, j) u(z_j) = rhs_r` on `n` uniform nodes of
/// spacing `h` (trapezoid weights `h/2, h, ..., h, h/2`).
pub fn solve_second_kind(
    n: usize,
    h: f64,
    kernel: impl Fn(usize, usize) -> f64,
    rhs: &[f64],
) -> Result<Vec<f64>> {
    assert_eq!(rhs.len(), n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        // degenerate single-node system: the integral term has zero weight
        return Ok(vec![rhs[0]]);
    }
    let mut a = DMatrix::<f64>::identity(n, n);
    for r in 0..n {
        for j in 0..n {
            let w = if j == 0 || j == n - 1 { 0.5 * h } else { h };
            a[(r, j)] += w * kernel(r, j);
        }
    }
    let b = DVector::from_column_slice(rhs);
    let lu = a.lu();
    match lu.solve(&b) {
        Some(x) => Ok(x.as_slice().to_vec()),
        None => Err(Error::Numerical(
            "singular Nystrom system: data outside the solvable class".into(),
        )),
    }
}
