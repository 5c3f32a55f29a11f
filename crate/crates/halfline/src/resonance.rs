//! Imaginary resonances: location on the negative imaginary axis,
//! eligible/ineligible classification, and the maximal eligible count.

use crate::direct::{bound_states, h_derivative, h_function, h_zeros_on};
use crate::error::{Error, Result};
use crate::potential::OperatorSpec;
use serde::Serialize;

/// Whether a resonance can be converted into a bound state without
/// enlarging the potential's support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Eligibility {
    Eligible,
    Ineligible,
}

/// One imaginary resonance `k = -iγ`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Resonance {
    pub gamma: f64,
    pub eligibility: Eligibility,
    pub simple: bool,
}

/// Resonance scan of one operator over a finite window.
#[derive(Debug, Clone, Serialize)]
pub struct ResonanceReport {
    pub resonances: Vec<Resonance>,
    pub beta_max: f64,
    /// `M` = eligible count + bound-state count, relative to the window.
    pub maximal_eligible_count: usize,
    pub bound_state_count: usize,
}

/// Zero-detection thresholds. `|H| < TOL_F·(1+|β|)` declares a tangential
/// zero; `|H'| < TOL_D` at a zero with no sign change declares it double;
/// consecutive sign-change zeros closer than `PAIR_GAP` are one double zero
/// resolved at finite precision.
const TOL_F: f64 = 1e-9;
const TOL_D: f64 = 1e-6;
const PAIR_GAP: f64 = 1e-2;

/// All zeros of `H(β)` in `[-beta_max, 0)` as `(γ, simple)` pairs, γ ascending.
///
/// Sign-change zeros are bisected and Newton-polished. A pair of zeros
/// closer than `PAIR_GAP` is coalesced into a single double zero reported at
/// the pair's smaller γ (the barely-split double of a rounded tuning).
/// Tangential zeros (`|H|` tiny at an extremum, no sign change) are doubles.
pub fn imaginary_resonances(spec: &OperatorSpec, beta_max: f64) -> Result<Vec<(f64, bool)>> {
    if !(beta_max > 0.0) {
        return Err(Error::InvalidInput("beta_max must be positive".into()));
    }
    let step = (0.01_f64).min(beta_max / 1e4);
    let zeros = h_zeros_on(spec, -beta_max, -1e-9, step)?;

    // tangential double zeros: local minima of |H| below threshold without sign change
    let mut doubles = Vec::new();
    let n = ((beta_max / step).ceil() as usize).max(3);
    let mut samples = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let b = -beta_max + (beta_max - 1e-9) * i as f64 / n as f64;
        samples.push((b, h_function(spec, b)?));
    }
    for w in samples.windows(3) {
        let ((b0, h0), (_b1, h1), (b2, h2)) = (w[0], w[1], w[2]);
        if h1.abs() < h0.abs() && h1.abs() <= h2.abs() && h0 * h1 > 0.0 && h1 * h2 > 0.0 {
            // refine the extremum by ternary search on |H|
            let (mut a, mut c) = (b0, b2);
            for _ in 0..120 {
                let m1 = a + (c - a) / 3.0;
                let m2 = c - (c - a) / 3.0;
                if h_function(spec, m1)?.abs() < h_function(spec, m2)?.abs() {
                    c = m2;
                } else {
                    a = m1;
                }
            }
            let bm = 0.5 * (a + c);
            let hm = h_function(spec, bm)?;
            let hd = h_derivative(spec, bm)?;
            if hm.abs() < TOL_F * (1.0 + bm.abs()) && hd.abs() < TOL_D {
                doubles.push(bm);
            }
        }
    }

    // coalesce near-pairs of sign-change zeros into doubles
    let mut out: Vec<(f64, bool)> = Vec::new();
    let mut i = 0;
    while i < zeros.len() {
        if i + 1 < zeros.len() && (zeros[i + 1] - zeros[i]).abs() < PAIR_GAP {
            // report at the larger β (smaller γ), matching a solver started
            // from the shallow side of the dip
            out.push((-zeros[i + 1], false));
            i += 2;
        } else {
            out.push((-zeros[i], true));
            i += 1;
        }
    }
    for b in doubles {
        let g = -b;
        if !out.iter().any(|(g0, _)| (g0 - g).abs() < PAIR_GAP) {
            out.push((g, false));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(out)
}

pub(crate) fn verify_resonance(spec: &OperatorSpec, gamma: f64) -> Result<()> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidInput("resonance gamma must be positive".into()));
    }
    let h = h_function(spec, -gamma)?;
    // compare against the local scale of H near -γ
    let d = 1e-3 * (1.0 + gamma);
    let scale = h_function(spec, -gamma - d)?
        .abs()
        .max(h_function(spec, -gamma + d)?.abs())
        .max(1e-30);
    if h.abs() > 1e-4 * scale {
        return Err(Error::InvalidInput(format!(
            "gamma = {gamma} is not an imaginary resonance: H(-gamma) = {h:.6e}, local scale {scale:.3e}"
        )));
    }
    Ok(())
}

/// Eligibility via the same-operator criterion `H'(-γ)/H(γ) > 0`; double
/// zeros (`|H'(-γ)| < 1e-6`) are ineligible.
pub fn classify_eligibility(spec: &OperatorSpec, gamma: f64) -> Result<Eligibility> {
    verify_resonance(spec, gamma)?;
    let hd = h_derivative(spec, -gamma)?;
    let hg = h_function(spec, gamma)?;
    if hg.abs() < 1e-12 * (1.0 + gamma) {
        return Err(Error::Numerical(format!(
            "H({gamma}) = 0: F(iγ) and F(-iγ) cannot both vanish"
        )));
    }
    if hd.abs() < TOL_D {
        return Ok(Eligibility::Ineligible);
    }
    Ok(if hd / hg > 0.0 { Eligibility::Eligible } else { Eligibility::Ineligible })
}

/// `H(β;0)` of the bound-state-free member of the Darboux family, obtained
/// by stripping the product factor of each bound state:
/// `H(β;0) = H(β;N)·∏ (β+γ_s)/(β-γ_s)`.
pub fn stripped_h(spec: &OperatorSpec, bound_gammas: &[f64], beta: f64) -> Result<f64> {
    let mut h = h_function(spec, beta)?;
    for &g in bound_gammas {
        h *= (beta + g) / (beta - g);
    }
    Ok(h)
}

/// Eligibility via the bound-state-free criterion `H(-γ;0)=0, H'(-γ;0)>0`.
/// Equivalent to [`classify_eligibility`]; kept as an independent route.
pub fn classify_via_stripped(
    spec: &OperatorSpec,
    gamma: f64,
    bound_gammas: &[f64],
) -> Result<Eligibility> {
    verify_resonance(spec, gamma)?;
    let step = 1e-6 * (1.0 + gamma);
    let hp = (stripped_h(spec, bound_gammas, -gamma + step)?
        - stripped_h(spec, bound_gammas, -gamma - step)?)
        / (2.0 * step);
    if hp.abs() < TOL_D {
        return Ok(Eligibility::Ineligible);
    }
    Ok(if hp > 0.0 { Eligibility::Eligible } else { Eligibility::Ineligible })
}

/// Full resonance scan with eligibility verdicts and the window-relative `M`.
pub fn analyze(spec: &OperatorSpec, beta_max: f64) -> Result<ResonanceReport> {
    let raw = imaginary_resonances(spec, beta_max)?;
    let mut resonances = Vec::with_capacity(raw.len());
    for (gamma, simple) in raw {
        let eligibility = if simple {
            classify_eligibility(spec, gamma)?
        } else {
            Eligibility::Ineligible
        };
        resonances.push(Resonance { gamma, eligibility, simple });
    }
    let n_bound = bound_states(spec, beta_max)?.len();
    let eligible = resonances
        .iter()
        .filter(|r| r.eligibility == Eligibility::Eligible)
        .count();
    Ok(ResonanceReport {
        resonances,
        beta_max,
        maximal_eligible_count: eligible + n_bound,
        bound_state_count: n_bound,
    })
}

/// `M` = eligible-in-window + bound-state count (window-relative).
pub fn maximal_eligible_count(spec: &OperatorSpec, beta_max: f64) -> Result<usize> {
    Ok(analyze(spec, beta_max)?.maximal_eligible_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{make_operator_spec, BoundaryParameter};
    use approx::assert_relative_eq;

    fn well(v: f64, cot: f64) -> OperatorSpec {
        make_operator_spec(1.0, &[v], BoundaryParameter::NonDirichlet { cot_theta: cot }).unwrap()
    }

    #[test]
    fn well_a_single_ineligible_resonance() {
        let spec = well(-10.0, 1.0);
        let rs = imaginary_resonances(&spec, 8.0).unwrap();
        assert_eq!(rs.len(), 1);
        assert_relative_eq!(rs[0].0, 2.8208359, epsilon = 1e-5);
        assert!(rs[0].1, "simple");
        assert_eq!(classify_eligibility(&spec, rs[0].0).unwrap(), Eligibility::Ineligible);
    }

    #[test]
    fn well_b_one_eligible_one_ineligible() {
        let spec = well(-0.2, 6.0);
        let rs = imaginary_resonances(&spec, 8.0).unwrap();
        assert_eq!(rs.len(), 2);
        assert_relative_eq!(rs[0].0, 3.3618189, epsilon = 1e-5);
        assert_relative_eq!(rs[1].0, 5.9584210, epsilon = 1e-5);
        assert_eq!(classify_eligibility(&spec, rs[0].0).unwrap(), Eligibility::Eligible);
        assert_eq!(classify_eligibility(&spec, rs[1].0).unwrap(), Eligibility::Ineligible);
    }

    #[test]
    fn well_c_double_zero() {
        // rounded tuning: the analytic double zero splits into a close pair,
        // which must still be reported as one double (ineligible) resonance
        let spec = well(0.003521, -3.0);
        let rs = imaginary_resonances(&spec, 8.0).unwrap();
        assert_eq!(rs.len(), 1, "pair must coalesce: {rs:?}");
        assert_relative_eq!(rs[0].0, 3.6205, epsilon = 2e-3);
        assert!(!rs[0].1, "double");
        let rep = analyze(&spec, 8.0).unwrap();
        assert_eq!(rep.bound_state_count, 0);
        assert_eq!(rep.resonances[0].eligibility, Eligibility::Ineligible);
    }

    #[test]
    fn free_eligible_resonance() {
        // V ≡ 0, cot θ = -1: eligible resonance at γ = 1
        let spec = well(0.0, -1.0);
        let rs = imaginary_resonances(&spec, 5.0).unwrap();
        assert_eq!(rs.len(), 1);
        assert_relative_eq!(rs[0].0, 1.0, epsilon = 1e-9);
        assert_eq!(classify_eligibility(&spec, 1.0).unwrap(), Eligibility::Eligible);
    }

    #[test]
    fn stripped_criterion_agrees() {
        for (v, c) in [(-10.0, 1.0), (-0.2, 6.0)] {
            let spec = well(v, c);
            let gammas = crate::direct::bound_states(&spec, 10.0).unwrap().gammas();
            for (g, simple) in imaginary_resonances(&spec, 8.0).unwrap() {
                if !simple {
                    continue;
                }
                assert_eq!(
                    classify_eligibility(&spec, g).unwrap(),
                    classify_via_stripped(&spec, g, &gammas).unwrap(),
                    "at gamma = {g} for ({v}, {c})"
                );
            }
        }
    }

    #[test]
    fn stripped_with_no_bound_states_is_identical() {
        let spec = well(0.0, -1.0);
        assert_eq!(
            classify_eligibility(&spec, 1.0).unwrap(),
            classify_via_stripped(&spec, 1.0, &[]).unwrap()
        );
    }

    #[test]
    fn maximal_counts() {
        // (-10, 1): N = 2, eligible 0 → M = 2; (-0.2, 6): N = 1, eligible 1 → M = 2
        assert_eq!(maximal_eligible_count(&well(-10.0, 1.0), 8.0).unwrap(), 2);
        assert_eq!(maximal_eligible_count(&well(-0.2, 6.0), 8.0).unwrap(), 2);
        // free Dirichlet: H ≡ 1, no zeros at all
        let free = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        assert_eq!(maximal_eligible_count(&free, 8.0).unwrap(), 0);
    }

    #[test]
    fn rejects_non_resonance() {
        let spec = well(-0.2, 6.0);
        assert!(classify_eligibility(&spec, 2.0).is_err());
    }

    #[test]
    fn alternation_over_stripped_family() {
        // sorting bound states (as eligible ex-resonances) together with the
        // window resonances, eligible entries never sit adjacent
        let spec = well(-0.2, 6.0);
        let gammas = crate::direct::bound_states(&spec, 10.0).unwrap().gammas();
        let mut all: Vec<(f64, Eligibility)> = Vec::new();
        for (g, simple) in imaginary_resonances(&spec, 8.0).unwrap() {
            let e = if simple {
                classify_via_stripped(&spec, g, &gammas).unwrap()
            } else {
                Eligibility::Ineligible
            };
            all.push((g, e));
        }
        for &g in &gammas {
            all.push((g, Eligibility::Eligible));
        }
        all.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut last_was_eligible = false;
        for (_, e) in &all {
            let el = *e == Eligibility::Eligible;
            assert!(!(el && last_was_eligible), "two adjacent eligible resonances");
            last_was_eligible = el;
        }
    }
}
