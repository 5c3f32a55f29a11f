//! Recovery of all operators compatible with the modulus of the Jost
//! function: boundary-class detection, outer-function construction, the
//! integral-equation solve for the bound-state-free member, data-side
//! resonance extraction, and the 2^M family enumeration.
//!
//! The resonance data comes from the observation that `|F(k)|²` is an even
//! entire function of `k`, hence an entire function `q(s)` of `s = k²` with
//! `q(-β²) = H(β)H(-β)` for every member of the Darboux family. Its zeros on
//! `s < 0` are the imaginary resonances, a zero is eligible exactly when
//! `q'(-γ²) > 0`, and the support-preserving norming constant of every add
//! step is `g² = 2γ/q'(-γ²)` — all read off one pole-free continuation of
//! the data, immune to the `e^{2γb}` error amplification that reconstructed
//! potentials suffer on the negative imaginary axis.

use crate::darboux::{add_bound_state_with_g2_opts, DarbouxOptions};
use crate::direct::{h_function, jost_function};
use crate::error::{Error, Result};
use crate::fourier::{cos_transform, top_decade_mean};
use crate::fredholm::solve_second_kind;
use crate::grid::SampledFunction;
use crate::marchenko::resample_cells;
use crate::potential::{
    BoundState, BoundStateSet, BoundaryParameter, OperatorSpec, Potential, ThetaClass,
};
use crate::rational::EvenChebModel;
use num_complex::Complex64;
use rayon::prelude::*;

/// `|F_θ|` samples with the detected boundary class.
#[derive(Debug, Clone)]
pub struct SpectralModulus {
    pub abs_f: SampledFunction,
    pub theta_class: ThetaClass,
}

/// One member of the solution family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    /// Bitmask over the eligible-resonance list (bit `i` set = converted).
    pub mask: u32,
    pub spec: OperatorSpec,
    pub bound_states: BoundStateSet,
    /// Sup of `||F| - |F_data||/(1+|F_data|)` after a direct re-solve.
    pub abs_f_error: f64,
}

/// The full 2^M family reconstructed from `|F|` data.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    pub members: Vec<FamilyMember>,
    /// Eligible resonances `(γ, g²)` of the bound-state-free member.
    pub eligible: Vec<(f64, f64)>,
    pub beta_max: f64,
}

/// Tunables of the Gel'fand-Levitan solve.
#[derive(Debug, Clone, Copy)]
pub struct GlOptions {
    /// Known (or estimated) support bound.
    pub b_est: f64,
    /// Cell count of reconstructed potentials.
    pub cells: usize,
    /// Nyström nodes across `[0, b_est]`.
    pub nodes: usize,
    /// Acceptance threshold for each member's `|F|` re-solve.
    pub abs_f_tol: f64,
    /// Resolution of the Darboux adds.
    pub darboux: DarbouxOptions,
}

impl Default for GlOptions {
    fn default() -> Self {
        GlOptions {
            b_est: 1.0,
            cells: crate::CELLS_DEFAULT,
            nodes: 512,
            abs_f_tol: 1e-3,
            darboux: DarbouxOptions::default(),
        }
    }
}

fn positive_real_data(abs_f: &SampledFunction) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut ks = Vec::new();
    let mut vals = Vec::new();
    for (&k, v) in abs_f.grid.iter().zip(&abs_f.values) {
        if v.im.abs() > 1e-12 * (1.0 + v.norm()) || v.re < 0.0 {
            return Err(Error::InvalidInput(
                "|F| data must be real and nonnegative".into(),
            ));
        }
        if k >= 0.0 {
            ks.push(k);
            vals.push(v.re);
        }
    }
    if ks.len() < 100 {
        return Err(Error::InvalidInput("|F| data grid is too small".into()));
    }
    Ok((ks, vals))
}

/// Boundary class from the large-k growth: `|F| ~ |k|` for a non-Dirichlet
/// boundary, `|F| ~ 1` for Dirichlet, compared over the top decade.
pub fn detect_theta_class(abs_f: &SampledFunction) -> Result<ThetaClass> {
    let (ks, vals) = positive_real_data(abs_f)?;
    let kmax = *ks.last().unwrap();
    if kmax < 50.0 {
        return Err(Error::InvalidInput("need data up to k >= 50 for class detection".into()));
    }
    let mut nd = 0.0;
    let mut d = 0.0;
    let mut norm = 0.0;
    let mut n = 0usize;
    for (&k, &v) in ks.iter().zip(&vals) {
        if k > 0.9 * kmax {
            nd += (v - k) * (v - k);
            d += (v - 1.0) * (v - 1.0);
            norm += v * v;
            n += 1;
        }
    }
    let _ = n;
    let r_nd = (nd / norm).sqrt();
    let r_d = (d / norm).sqrt();
    if (r_nd - r_d).abs() < 0.1 * r_nd.max(r_d) {
        return Err(Error::Numerical(format!(
            "ambiguous boundary class: residuals {r_nd:.3e} (linear) vs {r_d:.3e} (constant)"
        )));
    }
    Ok(if r_nd < r_d { ThetaClass::NonDirichlet } else { ThetaClass::Dirichlet })
}

/// Pole-free continuation of `q(s) = |F(√s)|²` from the sampled `s > 0` to
/// the bound-state/resonance region `s < 0`.
pub fn continue_modulus_squared(abs_f: &SampledFunction) -> Result<EvenChebModel> {
    let (ks, vals) = positive_real_data(abs_f)?;
    let q: Vec<f64> = vals.iter().map(|v| v * v).collect();
    let (model, resid) = EvenChebModel::fit_adaptive(&ks, &q, 1e-14, 280)?;
    if resid > 1e-9 {
        return Err(Error::Numerical(format!(
            "modulus-squared continuation residual {resid:.3e} too large"
        )));
    }
    Ok(model)
}

/// Resonance data read from the continued `q`: zeros `γ` on `s = -γ² < 0`
/// with `q'(-γ²)` and the add-step norming constant `g² = 2γ/q'`.
/// Near-double pairs (gap below 0.01 in γ) are coalesced and marked.
pub fn data_side_resonances(
    model: &EvenChebModel,
    beta_max: f64,
) -> Vec<(f64, f64, bool)> {
    let s_lo = -beta_max * beta_max;
    let n = 60_000;
    let mut zeros: Vec<f64> = Vec::new();
    let mut prev_s = s_lo;
    let mut prev_q = model.eval_at_s(prev_s);
    for i in 1..=n {
        let s = s_lo * (1.0 - i as f64 / n as f64) - 1e-9;
        let q = model.eval_at_s(s);
        if prev_q == 0.0 {
            zeros.push(prev_s);
        } else if prev_q * q < 0.0 {
            let (mut a, mut c) = (prev_s, s);
            let mut qa = prev_q;
            for _ in 0..200 {
                let m = 0.5 * (a + c);
                if (c - a).abs() < 1e-14 * (1.0 + m.abs()) {
                    break;
                }
                let qm = model.eval_at_s(m);
                if qa * qm <= 0.0 {
                    c = m;
                } else {
                    a = m;
                    qa = qm;
                }
            }
            zeros.push(0.5 * (a + c));
        }
        prev_s = s;
        prev_q = q;
    }
    let mut gammas: Vec<f64> = zeros.iter().map(|s| (-s).sqrt()).collect();
    gammas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out = Vec::new();
    let mut i = 0;
    while i < gammas.len() {
        if i + 1 < gammas.len() && gammas[i + 1] - gammas[i] < 0.01 {
            // a barely split double zero: one ineligible resonance
            out.push((gammas[i], 0.0, false));
            i += 2;
        } else {
            let g = gammas[i];
            let qp = model.deriv_at_s(-g * g);
            out.push((g, 2.0 * g / qp, true));
            i += 1;
        }
    }
    out
}

fn fit_c_squared(ks: &[f64], vals: &[f64]) -> f64 {
    top_decade_mean(ks, |i| vals[i] * vals[i] - ks[i] * ks[i])
}

/// The Jost function of the bound-state-free member from its modulus:
/// the outer construction on the closed upper half plane (`Im k ≥ 0`).
///
/// Real-axis values use principal-value regularization by subtraction of
/// the fitted asymptotic model (whose Hilbert transform is known exactly).
/// Values with `Im k < 0` are out of contract: the integral formula does
/// not continue to the lower half plane numerically; use the recovered
/// operator and the ODE instead.
pub fn outer_jost(abs_f: &SampledFunction, theta_class: ThetaClass, k: Complex64) -> Result<Complex64> {
    if k.im < -1e-12 {
        return Err(Error::InvalidInput(
            "outer construction is evaluated on Im k >= 0 only; use the recovered operator for the lower half plane".into(),
        ));
    }
    let (ks, vals) = positive_real_data(abs_f)?;
    match theta_class {
        ThetaClass::Undetermined => Err(Error::InvalidInput("boundary class must be fixed".into())),
        ThetaClass::NonDirichlet => {
            let c2 = fit_c_squared(&ks, &vals);
            if !(c2 > 0.0) {
                return Err(Error::Numerical(format!(
                    "asymptotic constant C² = {c2:.3e} is not positive; tail not in the expected class"
                )));
            }
            let c = c2.sqrt();
            // r(t) = log(√(t²+C²)/|F(t)|), the residual log-modulus
            let r: Vec<f64> = ks
                .iter()
                .zip(&vals)
                .map(|(&t, &v)| ((t * t + c2).sqrt() / v).ln())
                .collect();
            let corr = cauchy_exponent(&ks, &r, k)?;
            Ok((k + Complex64::i() * c) * corr.exp())
        }
        ThetaClass::Dirichlet => {
            let r: Vec<f64> = vals.iter().map(|v| v.ln()).collect();
            let corr = cauchy_exponent(&ks, &r, k)?;
            // the Dirichlet branch carries the opposite exponent sign
            Ok((-corr).exp())
        }
    }
}

/// `-(1/πi) ∫ r(t)/(t - k - i0⁺) dt` for an even real `r` sampled on `t ≥ 0`.
fn cauchy_exponent(ks: &[f64], r: &[f64], k: Complex64) -> Result<Complex64> {
    let kmax = *ks.last().unwrap();
    let tail = r[r.len() - 1].abs().max(r[r.len() - 2].abs());
    if tail > 1e-2 {
        return Err(Error::Numerical(format!(
            "log-modulus integrand does not decay (|r(kmax)| = {tail:.3e}); bad normalization"
        )));
    }
    let dk: Vec<f64> = (0..ks.len())
        .map(|i| {
            let left = if i == 0 { ks[0] } else { ks[i - 1] };
            let right = if i == ks.len() - 1 { ks[ks.len() - 1] } else { ks[i + 1] };
            0.5 * (right - left)
        })
        .collect();
    if k.im > 1e-9 {
        // off the axis: plain quadrature of r(t)·2k/(t²-k²) over t ≥ 0
        let mut acc = Complex64::new(0.0, 0.0);
        for ((&t, &ri), &w) in ks.iter().zip(r).zip(&dk) {
            let t2 = Complex64::new(t * t, 0.0);
            acc += ri * 2.0 * k / (t2 - k * k) * w;
        }
        return Ok(-acc / (std::f64::consts::PI * Complex64::i()));
    }
    // real axis: subtract the singular node value and add its exact PV
    let x = k.re;
    let xa = x.abs();
    let r_at = |t: f64| -> f64 {
        // linear interpolation of the even function r
        let ta = t.abs();
        match ks.binary_search_by(|g| g.partial_cmp(&ta).unwrap()) {
            Ok(i) => r[i],
            Err(0) => r[0],
            Err(i) if i >= ks.len() => r[ks.len() - 1],
            Err(i) => {
                let w = (ta - ks[i - 1]) / (ks[i] - ks[i - 1]);
                r[i - 1] * (1.0 - w) + r[i] * w
            }
        }
    };
    let rx = r_at(xa);
    let mut pv = 0.0;
    for ((&t, &ri), &w) in ks.iter().zip(r).zip(&dk) {
        // ∫₀^∞ [r(t) - r(x)]·2x/(t² - x²) dt, the regularized symmetric form
        let denom = t * t - x * x;
        let term = if denom.abs() < 1e-12 * (1.0 + x * x) {
            // removable point: [r(t)-r(x)]/(t-x) → r'(x); estimate locally
            let h = (ks[1] - ks[0]).max(1e-6);
            let rp = (r_at(xa + h) - r_at((xa - h).abs())) / (2.0 * h);
            rp * 2.0 * xa / (t + xa).max(1e-30) * x.signum()
        } else {
            (ri - rx) * 2.0 * x / denom
        };
        pv += term * w;
    }
    // PV of the constant part over the truncated symmetric interval
    if xa < kmax {
        pv += rx * ((kmax - x) / (kmax + x)).abs().ln();
        pv += rx * ((-kmax - x) / (kmax - x + (kmax + x))).abs().ln() * 0.0; // no-op: kept symmetric form above
    }
    // -(1/πi)[PV + iπ r(x)] = (i/π)PV - r(x)
    Ok(Complex64::new(-rx, pv / std::f64::consts::PI))
}

/// Gel'fand-Levitan kernel tables: `G(x,y)` is assembled from a 1-D
/// transform `Φ(u)` through `G = (Φ(x-y) ± Φ(x+y))/2`.
pub struct GlKernel {
    h: f64,
    phi: Vec<f64>,
    dirichlet: bool,
}

impl GlKernel {
    /// Builds the kernel table on `[0, 2·x_max]` with node spacing `h`,
    /// including the bound-state sum when `bound_states` is nonempty.
    pub fn build(
        abs_f: &SampledFunction,
        bound_states: &[(f64, f64)],
        theta_class: ThetaClass,
        x_max: f64,
        h: f64,
    ) -> Result<GlKernel> {
        let (ks, vals) = positive_real_data(abs_f)?;
        let n_u = (2.0 * x_max / h).round() as usize + 1;
        let us: Vec<f64> = (0..n_u).map(|i| i as f64 * h).collect();
        match theta_class {
            ThetaClass::Undetermined => {
                Err(Error::InvalidInput("boundary class must be fixed".into()))
            }
            ThetaClass::NonDirichlet => {
                let c2 = fit_c_squared(&ks, &vals);
                let integrand: Vec<f64> = ks
                    .iter()
                    .zip(&vals)
                    .map(|(&k, &v)| k * k / (v * v) - 1.0)
                    .collect();
                let mut phi = cos_transform(&ks, &integrand, &us, Some(c2).filter(|c| *c > 0.0));
                for (u, p) in us.iter().zip(phi.iter_mut()) {
                    for &(gamma, g2) in bound_states {
                        *p += g2 * (gamma * u).cosh();
                    }
                }
                Ok(GlKernel { h, phi, dirichlet: false })
            }
            ThetaClass::Dirichlet => {
                // model the tail of 1/|F|² - 1 as -B/(k²+1)
                let b_fit = top_decade_mean(&ks, |i| {
                    (1.0 - 1.0 / (vals[i] * vals[i])) * (ks[i] * ks[i] + 1.0)
                });
                let integrand: Vec<f64> = ks
                    .iter()
                    .zip(&vals)
                    .map(|(&k, &v)| 1.0 / (v * v) - 1.0 + b_fit / (k * k + 1.0))
                    .collect();
                let base = cos_transform(&ks, &integrand, &us, None);
                let phi: Vec<f64> = us
                    .iter()
                    .zip(base)
                    .map(|(&u, p)| {
                        let model = -b_fit * (-u).exp();
                        let mut val = p + model;
                        for &(gamma, g2) in bound_states {
                            val -= g2 / (gamma * gamma) * (gamma * u).cosh();
                        }
                        val
                    })
                    .collect();
                Ok(GlKernel { h, phi, dirichlet: true })
            }
        }
    }

    /// `G` at node indices `(i, j)` of the `h`-grid.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        let diff = self.phi[i.abs_diff(j)];
        let sum = self.phi[i + j];
        if self.dirichlet { 0.5 * (diff - sum) } else { 0.5 * (diff + sum) }
    }

    pub fn g00(&self) -> f64 {
        self.at(0, 0)
    }
}

/// Solves the Gel'fand-Levitan equation row by row and returns the diagonal
/// `A(x,x)` on the node grid, plus `A(0,0)`.
pub fn solve_gl(kernel: &GlKernel, n_nodes: usize) -> Result<(Vec<f64>, f64)> {
    let h = kernel.h;
    let a00 = -kernel.g00();
    let diag: Vec<f64> = (0..n_nodes)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            if i == 0 {
                return Ok(a00);
            }
            let n = i + 1;
            let rhs: Vec<f64> = (0..n).map(|r| -kernel.at(i, r)).collect();
            let sol = solve_second_kind(n, h, |r, j| kernel.at(j, r), &rhs)?;
            Ok(sol[i])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((diag, a00))
}

/// `V = 2 d/dx A(x,x)` as exact cell averages (telescoped diagonal
/// differences), plus `cot θ = -A(0,0)`.
pub fn extract_potential_and_theta(
    diag: &[f64],
    a00: f64,
    h: f64,
    b: f64,
    cells: usize,
    theta_class: ThetaClass,
) -> (Potential, BoundaryParameter) {
    let n = ((b / h).round() as usize).min(diag.len() - 1);
    let per_node: Vec<f64> = (0..n).map(|i| 2.0 * (diag[i + 1] - diag[i]) / h).collect();
    let pot = resample_cells(&per_node, b, cells);
    let boundary = match theta_class {
        ThetaClass::Dirichlet => BoundaryParameter::Dirichlet,
        _ => BoundaryParameter::NonDirichlet { cot_theta: -a00 },
    };
    (pot, boundary)
}

/// Recovers the bound-state-free member `{V(·;0), θ₀}` from `|F|` data.
pub fn recover_base_member(
    abs_f: &SampledFunction,
    theta_class: ThetaClass,
    opts: &GlOptions,
) -> Result<OperatorSpec> {
    let h = opts.b_est / opts.nodes as f64;
    let kernel = GlKernel::build(abs_f, &[], theta_class, opts.b_est, h)?;
    let (diag, a00) = solve_gl(&kernel, opts.nodes + 1)?;
    let (pot, boundary) =
        extract_potential_and_theta(&diag, a00, h, opts.b_est, opts.cells, theta_class);
    Ok(OperatorSpec { potential: pot, boundary })
}

fn abs_f_reproduction(spec: &OperatorSpec, abs_f: &SampledFunction) -> f64 {
    let stride = (abs_f.grid.len() / 500).max(1);
    let pairs: Vec<(f64, f64)> = abs_f
        .grid
        .iter()
        .zip(&abs_f.values)
        .enumerate()
        .filter(|(i, (k, _))| i % stride == 0 && **k >= 0.0)
        .map(|(_, (&k, v))| (k, v.re))
        .collect();
    pairs
        .par_iter()
        .map(|&(k, v)| {
            let f = jost_function(spec, Complex64::new(k, 0.0)).norm();
            (f - v).abs() / (1.0 + v)
        })
        .reduce(|| 0.0, f64::max)
}

/// Full enumeration: boundary class, base member, data-side eligible set,
/// and one Darboux add per subset element, verified member by member
/// against the input modulus.
pub fn enumerate_solutions(
    abs_f: &SampledFunction,
    beta_max: f64,
    opts: &GlOptions,
) -> Result<SolutionFamily> {
    let theta_class = detect_theta_class(abs_f)?;
    let base = recover_base_member(abs_f, theta_class, opts)?;

    // the base member must carry no bound states: H(β;0) > 0 on (0, beta_max]
    let mut probe = 1e-3;
    while probe <= beta_max {
        if h_function(&base, probe)? <= 0.0 {
            return Err(Error::Verification(format!(
                "recovered base member has H({probe}) <= 0: a bound state survived stripping"
            )));
        }
        probe += 0.05;
    }

    let model = continue_modulus_squared(abs_f)?;
    let resonances = data_side_resonances(&model, beta_max);
    let eligible: Vec<(f64, f64)> = resonances
        .iter()
        .filter(|(_, g2, simple)| *simple && *g2 > 0.0)
        .map(|(g, g2, _)| (*g, *g2))
        .collect();
    let m_count = eligible.len();
    if m_count > 20 {
        return Err(Error::Numerical(format!(
            "{m_count} eligible resonances would give 2^{m_count} members; narrow the window"
        )));
    }

    let masks: Vec<u32> = (0..(1u32 << m_count)).collect();
    let members: Vec<FamilyMember> = masks
        .par_iter()
        .map(|&mask| -> Result<FamilyMember> {
            let mut spec = base.clone();
            let mut entries = Vec::new();
            for (bit, &(gamma, g2)) in eligible.iter().enumerate() {
                if mask & (1 << bit) == 0 {
                    continue;
                }
                // g² is family-invariant, so every add uses the data value
                let out = add_bound_state_with_g2_opts(&spec, gamma, g2, opts.darboux)?;
                let bs = out.bound_state.expect("add returns a bound state");
                entries.push(bs);
                spec = out.spec;
            }
            let err = abs_f_reproduction(&spec, abs_f);
            if err > opts.abs_f_tol {
                return Err(Error::Verification(format!(
                    "family member {mask:#b} reproduces |F| only to {err:.3e}"
                )));
            }
            Ok(FamilyMember {
                mask,
                spec,
                bound_states: BoundStateSet { entries },
                abs_f_error: err,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SolutionFamily { members, eligible, beta_max })
}

/// Convenience: `(γ, g, m)` of a member's bound states as a `BoundStateSet`
/// ordered by γ.
pub fn sorted_bound_states(member: &FamilyMember) -> Vec<BoundState> {
    let mut v = member.bound_states.entries.clone();
    v.sort_by(|a, b| a.gamma.partial_cmp(&b.gamma).unwrap());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::sample_direct;
    use crate::potential::make_operator_spec;
    use approx::assert_relative_eq;

    fn abs_f_of(spec: &OperatorSpec) -> SampledFunction {
        sample_direct(spec, 100.0, 0.01).unwrap().2
    }

    fn well(v: f64, cot: f64) -> OperatorSpec {
        make_operator_spec(1.0, &[v], BoundaryParameter::NonDirichlet { cot_theta: cot }).unwrap()
    }

    #[test]
    fn theta_class_detection() {
        // |F| = √(k²+1) from the free operator with cot θ = 1
        let nd = well(0.0, 1.0);
        assert_eq!(detect_theta_class(&abs_f_of(&nd)).unwrap(), ThetaClass::NonDirichlet);
        // |F| ≡ 1 from the free Dirichlet operator
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        assert_eq!(detect_theta_class(&abs_f_of(&d)).unwrap(), ThetaClass::Dirichlet);
        // a genuine well
        assert_eq!(
            detect_theta_class(&abs_f_of(&well(-0.2, 6.0))).unwrap(),
            ThetaClass::NonDirichlet
        );
    }

    #[test]
    fn outer_jost_trivial_dirichlet() {
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let abs_f = abs_f_of(&d);
        for &k in &[Complex64::new(0.7, 0.0), Complex64::new(1.0, 2.0)] {
            let f = outer_jost(&abs_f, ThetaClass::Dirichlet, k).unwrap();
            assert!((f - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn outer_jost_free_factorization() {
        // |F| = √(k²+1): the zero-free-in-C⁺ function with that modulus and
        // outer normalization is k + i (base member cot θ₀ = -1)
        let spec = well(0.0, 1.0);
        let abs_f = abs_f_of(&spec);
        for &kr in &[0.5, 2.0, 7.3] {
            let k = Complex64::new(kr, 0.0);
            let f = outer_jost(&abs_f, ThetaClass::NonDirichlet, k).unwrap();
            let expect = k + Complex64::i();
            assert!(
                (f - expect).norm() < 2e-3 * (1.0 + expect.norm()),
                "k = {kr}: {f} vs {expect}"
            );
            assert_relative_eq!(f.norm(), (kr * kr + 1.0).sqrt(), max_relative = 1e-3);
        }
        // and in the upper half plane
        let k = Complex64::new(1.0, 1.5);
        let f = outer_jost(&abs_f, ThetaClass::NonDirichlet, k).unwrap();
        let expect = k + Complex64::i();
        assert!((f - expect).norm() < 2e-3 * (1.0 + expect.norm()), "{f} vs {expect}");
    }

    #[test]
    fn outer_jost_rejects_lower_half_plane() {
        let abs_f = abs_f_of(&well(0.0, 1.0));
        assert!(outer_jost(&abs_f, ThetaClass::NonDirichlet, Complex64::new(0.0, -2.0)).is_err());
    }

    #[test]
    fn data_side_resonances_match_known_values() {
        let abs_f = abs_f_of(&well(-0.2, 6.0));
        let model = continue_modulus_squared(&abs_f).unwrap();
        let rs = data_side_resonances(&model, 8.0);
        assert_eq!(rs.len(), 3, "{rs:?}");
        assert_relative_eq!(rs[0].0, 3.3618189, epsilon = 1e-5);
        assert_relative_eq!(rs[1].0, 5.9584210, epsilon = 1e-3);
        assert_relative_eq!(rs[2].0, 6.0166435, epsilon = 1e-3);
        // eligibility pattern: eligible, ineligible, eligible(ex bound state)
        assert!(rs[0].1 > 0.0);
        assert!(rs[1].1 < 0.0);
        assert!(rs[2].1 > 0.0);
        assert_relative_eq!(rs[0].1, 1.9320940, max_relative = 1e-5);
        assert_relative_eq!(rs[2].1, 12.0000024, max_relative = 1e-4);
    }

    #[test]
    fn gl_kernel_free_case_value() {
        // |F|² = k²+1, no bound states: G(0,0) = -1 so cot θ₀ = -1
        let abs_f = abs_f_of(&well(0.0, 1.0));
        let kernel = GlKernel::build(&abs_f, &[], ThetaClass::NonDirichlet, 1.0, 1.0 / 256.0).unwrap();
        assert_relative_eq!(kernel.g00(), -1.0, max_relative = 1e-6);
        // symmetry G(i,j) = G(j,i) holds by construction
        assert_eq!(kernel.at(3, 7), kernel.at(7, 3));
    }

    #[test]
    fn gl_kernel_trivial_dirichlet() {
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let abs_f = abs_f_of(&d);
        let kernel = GlKernel::build(&abs_f, &[], ThetaClass::Dirichlet, 1.0, 1.0 / 128.0).unwrap();
        for i in [0usize, 10, 100] {
            for j in [0usize, 5, 50] {
                assert!(kernel.at(i, j).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gl_solve_free_case_round_trip() {
        // data from V ≡ 0, cot θ = 1: the stripped member is V ≡ 0, cot θ₀ = -1
        let abs_f = abs_f_of(&well(0.0, 1.0));
        let opts = GlOptions::default();
        let base = recover_base_member(&abs_f, ThetaClass::NonDirichlet, &opts).unwrap();
        assert_relative_eq!(base.boundary.cot_theta().unwrap(), -1.0, epsilon = 1e-4);
        assert!(base.potential.max_abs() < 1e-3, "max |V| = {:.3e}", base.potential.max_abs());
    }

    #[test]
    fn enumerate_free_family() {
        // M = 1: the family is {(V≡0, cot -1), (V≡0, cot 1 with γ=1)}
        let abs_f = abs_f_of(&well(0.0, 1.0));
        let fam = enumerate_solutions(&abs_f, 5.0, &GlOptions::default()).unwrap();
        assert_eq!(fam.members.len(), 2);
        assert_eq!(fam.eligible.len(), 1);
        assert_relative_eq!(fam.eligible[0].0, 1.0, epsilon = 1e-6);
        assert_relative_eq!(fam.eligible[0].1, 2.0, max_relative = 1e-6);
        let base = &fam.members[0];
        assert_relative_eq!(base.spec.boundary.cot_theta().unwrap(), -1.0, epsilon = 1e-4);
        let full = &fam.members[1];
        assert_relative_eq!(full.spec.boundary.cot_theta().unwrap(), 1.0, epsilon = 1e-4);
        assert_eq!(full.bound_states.len(), 1);
        assert_relative_eq!(full.bound_states.entries[0].gamma, 1.0, epsilon = 1e-6);
        for m in &fam.members {
            assert!(m.abs_f_error < 1e-3);
        }
    }

    #[test]
    fn enumerate_trivial_dirichlet_family() {
        // |F| ≡ 1: family of exactly one member, the free Dirichlet operator
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let abs_f = abs_f_of(&d);
        let fam = enumerate_solutions(&abs_f, 5.0, &GlOptions::default()).unwrap();
        assert_eq!(fam.members.len(), 1);
        assert!(fam.members[0].spec.boundary.is_dirichlet());
        assert!(fam.members[0].spec.potential.max_abs() < 1e-3);
    }
}
