//! Tabulated functions on uniform 1-D grids and their CSV representation.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A complex-valued function tabulated on a strictly ascending grid
/// (a k-grid, x-grid or y-grid depending on context).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "grid length {} does not match value count {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid must be strictly ascending".into()));
        }
        Ok(SampledFunction { grid, values })
    }

    pub fn from_real(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let vals = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        SampledFunction::new(grid, vals)
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    /// Writes `x_or_k,re,im` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x_or_k,re,im\n");
        for (x, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{x},{},{}\n", v.re, v.im));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if i == 0 && line.starts_with(|c: char| c.is_alphabetic()) {
                continue; // header
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() < 2 {
                return Err(Error::InvalidInput(format!("CSV line {}: need x,re[,im]", i + 1)));
            }
            let x: f64 = parts[0]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("CSV line {}: bad abscissa", i + 1)))?;
            let re: f64 = parts[1]
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("CSV line {}: bad re", i + 1)))?;
            let im: f64 = if parts.len() > 2 {
                parts[2].trim().parse().map_err(|_| {
                    Error::InvalidInput(format!("CSV line {}: bad im", i + 1))
                })?
            } else {
                0.0
            };
            grid.push(x);
            values.push(Complex64::new(re, im));
        }
        SampledFunction::new(grid, values)
    }
}

/// Uniform grid `start, start+step, ..., start + n*step` (n+1 points).
pub fn uniform_grid(start: f64, step: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| start + step * i as f64).collect()
}
