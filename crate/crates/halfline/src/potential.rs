//! Operator specification: piecewise-constant potential on `[0, b]` plus the
//! selfadjoint boundary parameter at the origin, and their file representation.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Piecewise-constant potential supported on `[0, b]`, one value per uniform
/// cell; `V(x) = 0` for `x > b` by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential {
    /// Upper end of the support interval.
    pub b: f64,
    /// Cell values on the uniform partition of `[0, b]`.
    pub cells: Vec<f64>,
}

/// Boundary parameter θ of `(sin θ)ψ'(0) + (cos θ)ψ(0) = 0`.
///
/// θ = π (Dirichlet) is a distinct branch everywhere in the theory,
/// so it is an explicit variant rather than a sentinel `cot θ` value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundaryParameter {
    Dirichlet,
    NonDirichlet { cot_theta: f64 },
}

impl BoundaryParameter {
    pub fn is_dirichlet(&self) -> bool {
        matches!(self, BoundaryParameter::Dirichlet)
    }

    /// `cot θ` for the non-Dirichlet branch.
    pub fn cot_theta(&self) -> Option<f64> {
        match self {
            BoundaryParameter::Dirichlet => None,
            BoundaryParameter::NonDirichlet { cot_theta } => Some(*cot_theta),
        }
    }
}

/// Coarse boundary classification used by the inversions before the exact
/// `cot θ` is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaClass {
    Dirichlet,
    NonDirichlet,
    Undetermined,
}

/// The object every solver consumes: potential plus boundary condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub potential: Potential,
    pub boundary: BoundaryParameter,
}

/// One bound state: wavenumber `γ` (`k = iγ`), Gel'fand-Levitan norming
/// constant `g` and Marchenko norming constant `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub gamma: f64,
    pub g: f64,
    pub m: f64,
}

/// The discrete part of the spectral data.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BoundStateSet {
    pub entries: Vec<BoundState>,
}

impl BoundStateSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.gamma).collect()
    }
}

/// Builds an operator spec with uniform cells over `[0, b]`.
pub fn make_operator_spec(
    b: f64,
    cell_values: &[f64],
    boundary: BoundaryParameter,
) -> Result<OperatorSpec> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidInput(format!("support bound b must be positive, got {b}")));
    }
    if cell_values.is_empty() {
        return Err(Error::InvalidInput("potential needs at least one cell".into()));
    }
    if cell_values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("potential cell values must be finite".into()));
    }
    if let BoundaryParameter::NonDirichlet { cot_theta } = boundary {
        if !cot_theta.is_finite() {
            return Err(Error::InvalidInput("cot theta must be finite".into()));
        }
    }
    Ok(OperatorSpec {
        potential: Potential { b, cells: cell_values.to_vec() },
        boundary,
    })
}

/// `∫₀ᵇ V dx` as the exact cell sum.
pub fn integral_of_potential(spec: &OperatorSpec) -> f64 {
    let p = &spec.potential;
    let dx = p.b / p.cells.len() as f64;
    p.cells.iter().map(|v| v * dx).sum()
}

impl Potential {
    /// Cell width of the uniform partition.
    pub fn dx(&self) -> f64 {
        self.b / self.cells.len() as f64
    }

    /// `V(x)`; zero beyond the support.
    pub fn value_at(&self, x: f64) -> f64 {
        if x < 0.0 || x >= self.b {
            return 0.0;
        }
        let i = ((x / self.dx()) as usize).min(self.cells.len() - 1);
        self.cells[i]
    }

    /// Same potential on a grid refined by an integer factor.
    pub fn refined(&self, factor: usize) -> Potential {
        let mut cells = Vec::with_capacity(self.cells.len() * factor);
        for &v in &self.cells {
            cells.extend(std::iter::repeat(v).take(factor));
        }
        Potential { b: self.b, cells }
    }

    /// Maximum absolute cell value.
    pub fn max_abs(&self) -> f64 {
        self.cells.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl OperatorSpec {
    pub fn to_json(&self) -> String {
        let body = serde_json::json!({
            "b": self.potential.b,
            "cells": self.potential.cells,
            "boundary": self.boundary,
        });
        serde_json::to_string_pretty(&body).expect("spec serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<OperatorSpec> {
        #[derive(Deserialize)]
        struct Wire {
            b: f64,
            cells: Vec<f64>,
            boundary: BoundaryParameter,
        }
        let w: Wire = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("spec JSON: {e}")))?;
        make_operator_spec(w.b, &w.cells, w.boundary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_operator() {
        let spec = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        assert_eq!(integral_of_potential(&spec), 0.0);
        assert_eq!(spec.potential.value_at(0.5), 0.0);
        assert_eq!(spec.potential.value_at(2.0), 0.0);
    }

    #[test]
    fn square_well_integral() {
        let spec = make_operator_spec(
            1.0,
            &[-10.0; 16],
            BoundaryParameter::NonDirichlet { cot_theta: 1.0 },
        )
        .unwrap();
        assert!((integral_of_potential(&spec) + 10.0).abs() < 1e-12);
    }

    #[test]
    fn two_cell_step_integral() {
        // V = 1 on (0, 1/2), V = -a on (1/2, 1): integral is (1 - a)/2.
        let a = 0.857247;
        let spec = make_operator_spec(1.0, &[1.0, -a], BoundaryParameter::Dirichlet).unwrap();
        assert!((integral_of_potential(&spec) - 0.5 * (1.0 - a)).abs() < 1e-12);
        assert!((integral_of_potential(&spec) - 0.0713765).abs() < 1e-7);
    }

    #[test]
    fn integral_invariant_under_refinement() {
        let spec = make_operator_spec(
            2.0,
            &[3.0, -1.5, 0.25],
            BoundaryParameter::NonDirichlet { cot_theta: -2.0 },
        )
        .unwrap();
        let refined = OperatorSpec {
            potential: spec.potential.refined(8),
            boundary: spec.boundary,
        };
        assert!(
            (integral_of_potential(&spec) - integral_of_potential(&refined)).abs() < 1e-14
        );
    }

    #[test]
    fn json_round_trip_is_exact() {
        let spec = make_operator_spec(
            1.0,
            &[0.1 + 0.2, -10.0 / 3.0, 1e-17],
            BoundaryParameter::NonDirichlet { cot_theta: 6.0_f64.sqrt() },
        );
        let spec = spec.unwrap();
        let back = OperatorSpec::from_json(&spec.to_json()).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(make_operator_spec(0.0, &[1.0], BoundaryParameter::Dirichlet).is_err());
        assert!(make_operator_spec(1.0, &[], BoundaryParameter::Dirichlet).is_err());
        assert!(make_operator_spec(1.0, &[f64::NAN], BoundaryParameter::Dirichlet).is_err());
    }

    #[test]
    fn dirichlet_json_shape() {
        let spec = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let v: serde_json::Value = serde_json::from_str(&spec.to_json()).unwrap();
        assert_eq!(v["boundary"]["kind"], "dirichlet");
        let nd = make_operator_spec(
            1.0,
            &[0.0],
            BoundaryParameter::NonDirichlet { cot_theta: 1.5 },
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&nd.to_json()).unwrap();
        assert_eq!(v["boundary"]["kind"], "non_dirichlet");
        assert_eq!(v["boundary"]["cot_theta"], 1.5);
    }
}
