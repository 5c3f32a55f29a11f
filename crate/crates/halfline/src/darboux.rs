//! Darboux transformations that add or remove one bound state while
//! preserving the compact support of the potential, plus the rational
//! updates of the Jost function and the scattering matrix.
//!
//! The transformed potential differs from the original by an exact
//! derivative, so cell values of the output are produced by telescoping
//! that derivative across each cell: no numerical differentiation anywhere.

use crate::direct::{h_derivative, h_function, h_zeros_on, norming_constants, regular_initial};
use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::potential::{BoundState, BoundaryParameter, OperatorSpec, Potential};
use crate::propagate::forward_trace;
use crate::resonance::verify_resonance;
use num_complex::Complex64;

/// Direction of a Darboux step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Add,
    Remove,
}

/// Record of one applied transformation.
#[derive(Debug, Clone, Copy)]
pub struct DarbouxStep {
    pub direction: Direction,
    pub gamma: f64,
    pub g_squared: f64,
    pub theta_update: BoundaryParameter,
}

/// Outcome of an add/remove: the new operator, the step record, and
/// (for adds) the created bound-state entry.
#[derive(Debug, Clone)]
pub struct DarbouxOutcome {
    pub spec: OperatorSpec,
    pub step: DarbouxStep,
    pub bound_state: Option<BoundState>,
}

/// Resolution of the transformed potential's cell grid. The transform
/// itself is exact; the only discretization is the projection of the output
/// (and of any operator built on top of it) onto piecewise-constant cells,
/// with pointwise error `O(Δ²·V'')`. The default suits the inversion
/// tolerances; round trips at the 1e-6 level on violently varying
/// transformed potentials need `min_cells` around 32768.
#[derive(Debug, Clone, Copy)]
pub struct DarbouxOptions {
    pub min_cells: usize,
}

impl Default for DarbouxOptions {
    fn default() -> Self {
        DarbouxOptions { min_cells: 4096 }
    }
}

const REFINE_MAX: usize = 65536;

fn refine_for_transform(spec: &OperatorSpec, opts: DarbouxOptions) -> (OperatorSpec, usize) {
    let n = spec.potential.cells.len();
    let target = (n * 8).clamp(opts.min_cells, REFINE_MAX.max(opts.min_cells)).max(n);
    let factor = target.div_ceil(n);
    (
        OperatorSpec {
            potential: spec.potential.refined(factor),
            boundary: spec.boundary,
        },
        n * factor,
    )
}

/// The unique norming constant that keeps the support inside `(0, b)` when a
/// bound state is created at an imaginary resonance `k = -iγ`:
/// `g² = 2γ / [φ(iγ,b)² - 2γ ∫₀ᵇ φ(iγ,y)² dy]`.
///
/// Returned even when nonpositive (a nonpositive value is the ineligibility
/// verdict); errors only when `γ` is not a resonance at all.
pub fn support_preserving_norming_constant(spec: &OperatorSpec, gamma: f64) -> Result<f64> {
    verify_resonance(spec, gamma)?;
    let k = Complex64::new(0.0, gamma);
    let (p0, d0) = regular_initial(spec.boundary);
    let tr = forward_trace(spec, k, p0, d0);
    let b = spec.potential.b;
    let (phib, _, cum) = tr.at(spec, k, b);
    let denom = (phib * phib).re - 2.0 * gamma * cum.re;
    Ok(2.0 * gamma / denom)
}

/// Same quantity through the boundary behaviour of `H`:
/// `g² = 4γ² / [H'(-γ) H(γ)]`. Algebraically identical to the integral
/// formula but free of the `e^{2γb}`-scale cancellation, which matters when
/// the operator is only known approximately.
pub fn h_based_g_squared(spec: &OperatorSpec, gamma: f64) -> Result<f64> {
    verify_resonance(spec, gamma)?;
    let hd = h_derivative(spec, -gamma)?;
    let hg = h_function(spec, gamma)?;
    if hd == 0.0 || hg == 0.0 {
        return Err(Error::Numerical("degenerate H data at resonance".into()));
    }
    Ok(4.0 * gamma * gamma / (hd * hg))
}

fn updated_boundary(boundary: BoundaryParameter, delta: f64) -> BoundaryParameter {
    match boundary {
        BoundaryParameter::Dirichlet => BoundaryParameter::Dirichlet,
        BoundaryParameter::NonDirichlet { cot_theta } => {
            BoundaryParameter::NonDirichlet { cot_theta: cot_theta + delta }
        }
    }
}

/// Adds a bound state at an eligible resonance `k = -iγ` (forced norming
/// constant from the support-preservation condition). Refuses ineligible
/// resonances, reporting the computed `g²`.
pub fn add_bound_state(spec: &OperatorSpec, gamma: f64) -> Result<DarbouxOutcome> {
    add_bound_state_opts(spec, gamma, DarbouxOptions::default())
}

/// [`add_bound_state`] with explicit output-resolution control.
pub fn add_bound_state_opts(
    spec: &OperatorSpec,
    gamma: f64,
    opts: DarbouxOptions,
) -> Result<DarbouxOutcome> {
    let g2 = support_preserving_norming_constant(spec, gamma)?;
    if g2 <= 0.0 {
        return Err(Error::Verification(format!(
            "resonance gamma = {gamma} is ineligible: support-preserving g^2 = {g2:.6}"
        )));
    }
    add_bound_state_with_g2_opts(spec, gamma, g2, opts)
}

/// Add step with a caller-supplied `g²` (already validated as the
/// support-preserving value, e.g. from data-side continuation).
pub fn add_bound_state_with_g2(spec: &OperatorSpec, gamma: f64, g2: f64) -> Result<DarbouxOutcome> {
    add_bound_state_with_g2_opts(spec, gamma, g2, DarbouxOptions::default())
}

/// [`add_bound_state_with_g2`] with explicit output-resolution control.
pub fn add_bound_state_with_g2_opts(
    spec: &OperatorSpec,
    gamma: f64,
    g2: f64,
    opts: DarbouxOptions,
) -> Result<DarbouxOutcome> {
    if !(g2 > 0.0) {
        return Err(Error::InvalidInput(format!("g^2 must be positive, got {g2}")));
    }
    let (fine, n_out) = refine_for_transform(spec, opts);
    let k = Complex64::new(0.0, gamma);
    let (p0, d0) = regular_initial(fine.boundary);
    let tr = forward_trace(&fine, k, p0, d0);

    // e(x) = 2ψ²/W with W = 1/g² + ∫₀ˣψ²; the new cell value is the old one
    // minus the telescoped derivative (e(x1) - e(x0))/Δ
    let w0 = 1.0 / g2;
    let e_at = |i: usize| -> f64 {
        let (psi, _) = tr.states[i];
        let w = w0 + tr.cum_sq[i].re;
        2.0 * (psi * psi).re / w
    };
    let mut cells = Vec::with_capacity(n_out);
    let dx = fine.potential.b / n_out as f64;
    for i in 0..n_out {
        let d_e = e_at(i + 1) - e_at(i);
        cells.push(fine.potential.cells[i] - d_e / dx);
    }
    let new_spec = OperatorSpec {
        potential: Potential { b: fine.potential.b, cells },
        boundary: updated_boundary(fine.boundary, g2),
    };

    // the created bound state sits at γ up to the projection error; polish it
    let gamma_new = polish_h_zero(&new_spec, gamma).unwrap_or(gamma);
    let (g, m) = norming_constants(&new_spec, gamma_new)?;
    Ok(DarbouxOutcome {
        spec: new_spec,
        step: DarbouxStep {
            direction: Direction::Add,
            gamma,
            g_squared: g2,
            theta_update: updated_boundary(spec.boundary, g2),
        },
        bound_state: Some(BoundState { gamma: gamma_new, g, m }),
    })
}

fn polish_h_zero(spec: &OperatorSpec, gamma: f64) -> Option<f64> {
    let width = 1e-4 * (1.0 + gamma);
    let zeros = h_zeros_on(spec, gamma - width, gamma + width, width / 20.0).ok()?;
    zeros
        .into_iter()
        .min_by(|a, b| (a - gamma).abs().partial_cmp(&(b - gamma).abs()).unwrap())
}

/// Removes the bound state at `k = iγ` with Gel'fand-Levitan norming
/// constant `g`. The denominator `1 - g²∫₀ˣφ²` is evaluated in tail form
/// `g²(∫ₓᵇφ² + φ(b)²/2γ)`, which is positive by construction and immune to
/// cancellation; `g` itself is validated against the operator's own norming
/// constant first.
pub fn remove_bound_state(spec: &OperatorSpec, gamma: f64, g: f64) -> Result<DarbouxOutcome> {
    remove_bound_state_opts(spec, gamma, g, DarbouxOptions::default())
}

/// [`remove_bound_state`] with explicit output-resolution control.
pub fn remove_bound_state_opts(
    spec: &OperatorSpec,
    gamma: f64,
    g: f64,
    opts: DarbouxOptions,
) -> Result<DarbouxOutcome> {
    let (g_true, _) = norming_constants(spec, gamma)?;
    let g2 = g * g;
    if ((g2 / (g_true * g_true)) - 1.0).abs() > 1e-4 {
        return Err(Error::InvalidInput(format!(
            "supplied g^2 = {g2:.8} is not the norming constant of the bound state at {gamma} (computed {:.8})",
            g_true * g_true
        )));
    }
    let (fine, n_out) = refine_for_transform(spec, opts);
    let k = Complex64::new(0.0, gamma);
    let (p0, d0) = regular_initial(fine.boundary);
    let tr = forward_trace(&fine, k, p0, d0);
    let b = fine.potential.b;
    let (phib, _, cum_b) = tr.at(&fine, k, b);
    let tail = (phib * phib).re / (2.0 * gamma);

    // e(x) = 2φ²/T with T = ∫ₓᵇφ² + tail; V₀ = V₁ + d/dx e, telescoped per cell
    let e_at = |i: usize| -> f64 {
        let (phi, _) = tr.states[i];
        let t = (cum_b - tr.cum_sq[i]).re + tail;
        2.0 * (phi * phi).re / t
    };
    let mut cells = Vec::with_capacity(n_out);
    let dx = b / n_out as f64;
    for i in 0..n_out {
        let d_e = e_at(i + 1) - e_at(i);
        cells.push(fine.potential.cells[i] + d_e / dx);
    }
    let new_spec = OperatorSpec {
        potential: Potential { b, cells },
        boundary: updated_boundary(fine.boundary, -g2),
    };
    Ok(DarbouxOutcome {
        spec: new_spec,
        step: DarbouxStep {
            direction: Direction::Remove,
            gamma,
            g_squared: g2,
            theta_update: updated_boundary(spec.boundary, -g2),
        },
        bound_state: None,
    })
}

/// Pointwise rational update of Jost-function samples:
/// multiply by `(k-iγ)/(k+iγ)` on Add, by its reciprocal on Remove.
pub fn transform_jost(samples: &SampledFunction, gamma: f64, direction: Direction) -> SampledFunction {
    let ig = Complex64::new(0.0, gamma);
    let values = samples
        .grid
        .iter()
        .zip(&samples.values)
        .map(|(&k, &f)| {
            let kk = Complex64::new(k, 0.0);
            match direction {
                Direction::Add => f * (kk - ig) / (kk + ig),
                Direction::Remove => f * (kk + ig) / (kk - ig),
            }
        })
        .collect();
    SampledFunction { grid: samples.grid.clone(), values }
}

/// Pointwise update of scattering-matrix samples after an Add:
/// `S ↦ ((k+iγ)/(k-iγ))² S`.
pub fn transform_scattering(samples: &SampledFunction, gamma: f64) -> SampledFunction {
    let ig = Complex64::new(0.0, gamma);
    let values = samples
        .grid
        .iter()
        .zip(&samples.values)
        .map(|(&k, &s)| {
            let kk = Complex64::new(k, 0.0);
            let f = (kk + ig) / (kk - ig);
            s * f * f
        })
        .collect();
    SampledFunction { grid: samples.grid.clone(), values }
}

/// Max |V_new| sampled on `(b, 2b]`: support-preservation diagnostic.
pub fn support_leak(outcome: &DarbouxOutcome, original: &OperatorSpec, gamma: f64) -> f64 {
    // V beyond b is ∓d/dx e(x); evaluate by telescoping over 64 sample
    // cells on (b, 2b] using the trace of the operator the transform used
    let spec = &outcome.spec;
    let k = Complex64::new(0.0, gamma);
    let (p0, d0) = regular_initial(original.boundary);
    let (fine, _) = refine_for_transform(original, DarbouxOptions::default());
    let tr = forward_trace(&fine, k, p0, d0);
    let b = spec.potential.b;
    let (phib, _, cum_b) = tr.at(&fine, k, b);
    let tail = (phib * phib).re / (2.0 * gamma);
    let g2 = outcome.step.g_squared;
    let e_of = |x: f64| -> f64 {
        let (phi, _, cum) = tr.at(&fine, k, x);
        match outcome.step.direction {
            Direction::Add => {
                let w = 1.0 / g2 + cum.re;
                2.0 * (phi * phi).re / w
            }
            Direction::Remove => {
                let t = (cum_b - cum).re + tail;
                2.0 * (phi * phi).re / t
            }
        }
    };
    let n = 64;
    let dx = b / n as f64;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x0 = b + i as f64 * dx;
        let v = (e_of(x0 + dx) - e_of(x0)) / dx;
        worst = worst.max(v.abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::{bound_states, jost_function};
    use crate::potential::make_operator_spec;
    use approx::assert_relative_eq;

    fn well(v: f64, cot: f64) -> OperatorSpec {
        make_operator_spec(1.0, &[v], BoundaryParameter::NonDirichlet { cot_theta: cot }).unwrap()
    }

    #[test]
    fn g_squared_matches_reported_values() {
        // ineligible resonance of the deep well
        let a = well(-10.0, 1.0);
        let g2 = support_preserving_norming_constant(&a, 2.8208359).unwrap();
        assert_relative_eq!(g2, -4.2376139, max_relative = 1e-4);
        // eligible resonance of the shallow well
        let b = well(-0.2, 6.0);
        let g2 = support_preserving_norming_constant(&b, 3.3618189).unwrap();
        assert_relative_eq!(g2, 1.9320940, max_relative = 1e-4);
        // free potential with negative cot θ: g² = -2 cot θ
        let c = well(0.0, -1.0);
        let g2 = support_preserving_norming_constant(&c, 1.0).unwrap();
        assert_relative_eq!(g2, 2.0, max_relative = 1e-9);
    }

    #[test]
    fn h_based_formula_agrees_with_integral_formula() {
        // compare the two characterizations at precisely located zeros
        for (v, c) in [(-10.0, 1.0), (-0.2, 6.0), (0.0, -1.0)] {
            let spec = well(v, c);
            for (gamma, simple) in
                crate::resonance::imaginary_resonances(&spec, 8.0).unwrap()
            {
                if !simple {
                    continue;
                }
                let a = support_preserving_norming_constant(&spec, gamma).unwrap();
                let b = h_based_g_squared(&spec, gamma).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn free_add_keeps_zero_potential() {
        // V ≡ 0, cot θ = -1: adding the eligible resonance at γ = 1 with
        // g² = 2 leaves V ≡ 0 and flips cot θ to +1
        let spec = well(0.0, -1.0);
        let out = add_bound_state(&spec, 1.0).unwrap();
        assert_relative_eq!(out.step.g_squared, 2.0, max_relative = 1e-9);
        assert_relative_eq!(out.spec.boundary.cot_theta().unwrap(), 1.0, epsilon = 1e-9);
        let worst = out.spec.potential.cells.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-8, "potential should stay zero, max |V| = {worst:.3e}");
        assert!(support_leak(&out, &spec, 1.0) < 1e-8);
        let bs = out.bound_state.unwrap();
        assert_relative_eq!(bs.gamma, 1.0, epsilon = 1e-7);
        assert_relative_eq!(bs.g * bs.g, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn add_refuses_ineligible() {
        let spec = well(-10.0, 1.0);
        let err = add_bound_state(&spec, 2.8208359).unwrap_err();
        assert!(matches!(err, Error::Verification(_)), "{err}");
    }

    #[test]
    fn add_preserves_support_and_transforms_jost() {
        let spec = well(-0.2, 6.0);
        let gamma = 3.3618189;
        let out = add_bound_state(&spec, gamma).unwrap();
        assert!(support_leak(&out, &spec, gamma) < 1e-6 * (1.0 + 0.2));
        // F_new(k) = ((k-iγ)/(k+iγ)) F_old(k) on a real grid, via direct re-solve
        for i in 0..50 {
            let k = 0.11 + 0.37 * i as f64;
            let kk = Complex64::new(k, 0.0);
            let f_old = jost_function(&spec, kk);
            let f_new = jost_function(&out.spec, kk);
            let ig = Complex64::new(0.0, gamma);
            let expect = f_old * (kk - ig) / (kk + ig);
            assert!(
                (f_new - expect).norm() < 1e-6 * (1.0 + expect.norm()),
                "k = {k}: {f_new} vs {expect}"
            );
        }
    }

    #[test]
    fn remove_is_inverse_of_add_free_case() {
        let spec = well(0.0, 1.0);
        // the free operator with cot θ = 1 has the bound state γ = 1, g² = 2
        let out = remove_bound_state(&spec, 1.0, 2.0_f64.sqrt()).unwrap();
        assert_relative_eq!(out.spec.boundary.cot_theta().unwrap(), -1.0, epsilon = 1e-9);
        let worst = out.spec.potential.cells.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        assert!(worst < 1e-8, "max |V| = {worst:.3e}");
    }

    #[test]
    fn add_remove_round_trip_on_well() {
        // the transformed potential varies violently (range ≈ ±50), so the
        // 1e-6 round trip needs the fine intermediate projection
        let opts = DarbouxOptions { min_cells: 32768 };
        let spec = well(-0.2, 6.0);
        let gamma = 3.3618189;
        let added = add_bound_state_opts(&spec, gamma, opts).unwrap();
        let bs = added.bound_state.unwrap();
        let removed = remove_bound_state_opts(&added.spec, bs.gamma, bs.g, opts).unwrap();
        // compare on the original cell grid (one cell): block average
        let cells = &removed.spec.potential.cells;
        let avg: f64 = cells.iter().sum::<f64>() / cells.len() as f64;
        assert!((avg + 0.2).abs() < 1e-6, "cell deviation {:.3e}", (avg + 0.2).abs());
        let cot = removed.spec.boundary.cot_theta().unwrap();
        assert_relative_eq!(cot, 6.0, max_relative = 1e-7);
    }

    #[test]
    fn removed_then_readded_reproduces_g2_exact_case() {
        // removal of the free operator's bound state leaves V ≡ 0 exactly,
        // so the re-add value reproduces g² at full precision
        let spec = well(0.0, 1.0);
        let removed = remove_bound_state(&spec, 1.0, 2.0_f64.sqrt()).unwrap();
        let g2_back = support_preserving_norming_constant(&removed.spec, 1.0).unwrap();
        assert_relative_eq!(g2_back, 2.0, max_relative = 1e-6);
    }

    #[test]
    fn removed_then_readded_reproduces_g2_well() {
        // deep bound state: the projected stripped operator shifts the
        // resonance slightly, so relocate it before re-evaluating (3.19)-style g²
        let spec = well(-0.2, 6.0);
        let bs = bound_states(&spec, 10.0).unwrap();
        let st = bs.entries[0];
        let removed =
            remove_bound_state_opts(&spec, st.gamma, st.g, DarbouxOptions { min_cells: 16384 })
                .unwrap();
        let rs = crate::resonance::imaginary_resonances(&removed.spec, 8.0).unwrap();
        let (gam, _) = rs
            .iter()
            .min_by(|a, b| {
                (a.0 - st.gamma).abs().partial_cmp(&(b.0 - st.gamma).abs()).unwrap()
            })
            .copied()
            .unwrap();
        assert!((gam - st.gamma).abs() < 5e-3, "relocated at {gam}");
        // γ·b ≈ 6 puts this resonance at e^{2γb} ≈ 1.6e5 sensitivity to the
        // stripped potential, so the float-level edge noise of the cell
        // projection caps the consistency at the few-percent level
        let g2_back = h_based_g_squared(&removed.spec, gam).unwrap();
        assert_relative_eq!(g2_back, st.g * st.g, max_relative = 5e-2);
    }

    #[test]
    fn remove_rejects_wrong_g() {
        let spec = well(0.0, 1.0);
        assert!(remove_bound_state(&spec, 1.0, 2.0).is_err()); // g² = 4 ≠ 2
        assert!(remove_bound_state(&spec, 0.5, 1.0).is_err()); // not a bound state
    }

    #[test]
    fn jost_transform_preserves_modulus_and_inverts() {
        let grid: Vec<f64> = (0..200).map(|i| i as f64 * 0.05).collect();
        let values: Vec<Complex64> = grid
            .iter()
            .map(|&k| Complex64::new(k, -0.7) * Complex64::new(0.3, k * k * 0.01))
            .collect();
        let f = SampledFunction::new(grid, values).unwrap();
        let gamma = 1.7;
        let added = transform_jost(&f, gamma, Direction::Add);
        for (a, b) in f.values.iter().zip(&added.values) {
            assert_relative_eq!(a.norm(), b.norm(), max_relative = 1e-12);
        }
        let back = transform_jost(&added, gamma, Direction::Remove);
        for (a, b) in f.values.iter().zip(&back.values) {
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn scattering_transform_unimodular_and_fixed_at_zero() {
        let grid: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let values: Vec<Complex64> = grid
            .iter()
            .map(|&k| {
                let kk = Complex64::new(k, 0.0);
                -(-kk - Complex64::i()) / (kk - Complex64::i())
            })
            .collect();
        let s = SampledFunction::new(grid, values).unwrap();
        let out = transform_scattering(&s, 2.2);
        for (a, b) in s.values.iter().zip(&out.values) {
            assert_relative_eq!(a.norm(), b.norm(), max_relative = 1e-12);
        }
        assert!((out.values[0] - s.values[0]).norm() < 1e-12);
    }

    #[test]
    fn scattering_transform_matches_direct_resolve() {
        let spec = well(-0.2, 6.0);
        let gamma = 3.3618189;
        let out = add_bound_state(&spec, gamma).unwrap();
        for i in 1..25 {
            let k = 0.2 * i as f64;
            let s_old = crate::direct::scattering_matrix(&spec, k).unwrap();
            let s_new = crate::direct::scattering_matrix(&out.spec, k).unwrap();
            let kk = Complex64::new(k, 0.0);
            let ig = Complex64::new(0.0, gamma);
            let f = (kk + ig) / (kk - ig);
            let expect = s_old * f * f;
            assert!(
                (s_new - expect).norm() < 1e-6,
                "k = {k}: {s_new} vs {expect}"
            );
        }
    }
}
