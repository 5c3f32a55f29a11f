//! Direct problem: Jost solution and Jost function on ℂ, regular solution,
//! scattering matrix, the real function `H(β)` on the imaginary axis, bound
//! states with both norming constants, and full-line scattering coefficients.

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::potential::{BoundState, BoundStateSet, BoundaryParameter, OperatorSpec};
use crate::propagate::{cells_of, forward_trace, jost_at_origin, jost_edge_states, CellStep};
use num_complex::Complex64;

/// Boundary values of the Jost solution at the origin.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryTrace {
    pub f0: Complex64,
    pub fprime0: Complex64,
    pub k: Complex64,
}

/// Full-line transmission and reflection coefficients at one wavenumber.
#[derive(Debug, Clone, Copy)]
pub struct FullLineCoefficients {
    pub t: Complex64,
    pub l: Complex64,
    pub r: Complex64,
    pub k: Complex64,
}

/// `f(k,0)` and `f'(k,0)`; entire in `k`.
pub fn jost_boundary_trace(spec: &OperatorSpec, k: Complex64) -> BoundaryTrace {
    let (f0, fprime0) = jost_at_origin(spec, k);
    BoundaryTrace { f0, fprime0, k }
}

/// The Jost function `F_θ(k)`: `-i[f'(k,0) + cot θ f(k,0)]` for a
/// non-Dirichlet boundary, `f(k,0)` for Dirichlet.
pub fn jost_function(spec: &OperatorSpec, k: Complex64) -> Complex64 {
    let tr = jost_boundary_trace(spec, k);
    match spec.boundary {
        BoundaryParameter::Dirichlet => tr.f0,
        BoundaryParameter::NonDirichlet { cot_theta } => {
            -Complex64::i() * (tr.fprime0 + cot_theta * tr.f0)
        }
    }
}

/// Derivative `dF/dk` by centered difference (entire function, so a real
/// step works anywhere in ℂ).
pub fn jost_function_derivative(spec: &OperatorSpec, k: Complex64, step: f64) -> Complex64 {
    let h = Complex64::new(step, 0.0);
    (jost_function(spec, k + h) - jost_function(spec, k - h)) / (2.0 * step)
}

/// Initial data of the regular solution at the origin.
pub fn regular_initial(boundary: BoundaryParameter) -> (Complex64, Complex64) {
    match boundary {
        BoundaryParameter::Dirichlet => (Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)),
        BoundaryParameter::NonDirichlet { cot_theta } => {
            (Complex64::new(1.0, 0.0), Complex64::new(-cot_theta, 0.0))
        }
    }
}

/// Regular solution `φ_θ(k, ·)` tabulated on an ascending `x`-grid in `[0, ∞)`.
pub fn regular_solution(spec: &OperatorSpec, k: Complex64, x_grid: &[f64]) -> Result<SampledFunction> {
    if x_grid.iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidInput("regular solution grid must lie in [0, ∞)".into()));
    }
    let (p0, d0) = regular_initial(spec.boundary);
    let tr = forward_trace(spec, k, p0, d0);
    let values = x_grid
        .iter()
        .map(|&x| tr.at(spec, k, x).0)
        .collect::<Vec<_>>();
    SampledFunction::new(x_grid.to_vec(), values)
}

/// `(φ(k,x), φ'(k,x))` at a single point.
pub fn regular_at(spec: &OperatorSpec, k: Complex64, x: f64) -> (Complex64, Complex64) {
    let (p0, d0) = regular_initial(spec.boundary);
    let tr = forward_trace(spec, k, p0, d0);
    let (p, d, _) = tr.at(spec, k, x);
    (p, d)
}

fn f_scale(spec: &OperatorSpec, k: Complex64) -> f64 {
    match spec.boundary {
        BoundaryParameter::Dirichlet => 1.0,
        BoundaryParameter::NonDirichlet { cot_theta } => 1.0 + k.norm() + cot_theta.abs(),
    }
}

/// Scattering matrix `S_θ(k) = ∓F_θ(-k)/F_θ(k)` for real `k`; the value at
/// an exceptional `k = 0` (where `F_θ(0) = 0`) is the analytic limit.
pub fn scattering_matrix(spec: &OperatorSpec, k: f64) -> Result<Complex64> {
    let kk = Complex64::new(k, 0.0);
    let num = jost_function(spec, -kk);
    let den = jost_function(spec, kk);
    let sign = if spec.boundary.is_dirichlet() { 1.0 } else { -1.0 };
    if den.norm() < 1e-9 * f_scale(spec, kk) {
        if k.abs() < 1e-9 {
            // simple zero of F at k = 0: S(0) = ∓(-Ḟ(0))/Ḟ(0) = ±1
            return Ok(Complex64::new(-sign, 0.0));
        }
        return Err(Error::Numerical(format!(
            "|F_theta({k})| underflowed on the real axis; inconsistent with an integrable potential"
        )));
    }
    Ok(sign * num / den)
}

/// The real function `H(β)`: `-iF(iβ)` (non-Dirichlet) or `F(iβ)` (Dirichlet).
///
/// Errors when the computed value has a non-negligible imaginary part, which
/// signals a propagation failure: for a real potential `H` is exactly real.
pub fn h_function(spec: &OperatorSpec, beta: f64) -> Result<f64> {
    let f = jost_function(spec, Complex64::new(0.0, beta));
    let h = if spec.boundary.is_dirichlet() { f } else { -Complex64::i() * f };
    if h.im.abs() > 1e-9 * (1.0 + h.norm()) {
        return Err(Error::Numerical(format!(
            "H({beta}) has imaginary residual {:.3e}",
            h.im
        )));
    }
    Ok(h.re)
}

/// `H'(β)` by centered difference with step `1e-6·(1+|β|)`.
pub fn h_derivative(spec: &OperatorSpec, beta: f64) -> Result<f64> {
    let step = 1e-6 * (1.0 + beta.abs());
    Ok((h_function(spec, beta + step)? - h_function(spec, beta - step)?) / (2.0 * step))
}

/// Locates all zeros of `H` on an interval by sign scan plus bisection,
/// with one Newton polish. Returns ascending β values.
pub(crate) fn h_zeros_on(spec: &OperatorSpec, lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    let n = ((hi - lo) / step).ceil() as usize;
    let mut zeros = Vec::new();
    let mut prev_b = lo;
    let mut prev_h = h_function(spec, lo)?;
    for i in 1..=n {
        let b = (lo + step * i as f64).min(hi);
        let h = h_function(spec, b)?;
        if prev_h == 0.0 {
            zeros.push(prev_b);
        } else if prev_h * h < 0.0 {
            let (mut a, mut c) = (prev_b, b);
            let mut ha = prev_h;
            for _ in 0..200 {
                let m = 0.5 * (a + c);
                if c - a < 1e-12 * (1.0 + m.abs()) {
                    break;
                }
                let hm = h_function(spec, m)?;
                if ha * hm <= 0.0 {
                    c = m;
                } else {
                    a = m;
                    ha = hm;
                }
            }
            let mut root = 0.5 * (a + c);
            // one Newton polish with centered-difference H'
            let hd = h_derivative(spec, root)?;
            if hd != 0.0 {
                let polished = root - h_function(spec, root)? / hd;
                if polished > a - step && polished < c + step {
                    root = polished;
                }
            }
            zeros.push(root);
        }
        prev_b = b;
        prev_h = h;
    }
    Ok(zeros)
}

/// All bound states in `(0, beta_max]` with Gel'fand-Levitan and Marchenko
/// norming constants. The zeros of `H` on the positive imaginary axis are
/// simple, so a sign scan finds them all at the scan resolution.
pub fn bound_states(spec: &OperatorSpec, beta_max: f64) -> Result<BoundStateSet> {
    if !(beta_max > 0.0) {
        return Err(Error::InvalidInput("beta_max must be positive".into()));
    }
    let step = (1e-2 * beta_max).min(0.02);
    let gammas = h_zeros_on(spec, 1e-9, beta_max, step)?;
    let mut entries = Vec::with_capacity(gammas.len());
    for gamma in gammas {
        let (g, m) = norming_constants(spec, gamma)?;
        entries.push(BoundState { gamma, g, m });
    }
    Ok(BoundStateSet { entries })
}

/// Gel'fand-Levitan and Marchenko norming constants at a verified bound
/// state: `g = (∫₀^∞ φ(iγ)²)^{-1/2}`, `m = (∫₀^∞ f(iγ)²)^{-1/2}`.
/// The `[0, b]` parts are exact per-cell integrals; the tails are the exact
/// exponentials of the free region.
pub fn norming_constants(spec: &OperatorSpec, gamma: f64) -> Result<(f64, f64)> {
    let h = h_function(spec, gamma)?;
    let hscale = 1.0 + gamma + spec.boundary.cot_theta().map_or(0.0, f64::abs);
    if h.abs() > 1e-6 * hscale {
        return Err(Error::InvalidInput(format!(
            "gamma = {gamma} is not a bound state: H({gamma}) = {h:.6e}"
        )));
    }
    let k = Complex64::new(0.0, gamma);
    let b = spec.potential.b;

    // regular solution: interior integral + exponential tail
    let (p0, d0) = regular_initial(spec.boundary);
    let tr = forward_trace(spec, k, p0, d0);
    let (phib, dphib, cum) = tr.at(spec, k, b);
    let decay_residual = (dphib + gamma * phib).norm();
    if decay_residual > 1e-6 * (dphib.norm() + gamma * phib.norm()).max(1e-300) {
        return Err(Error::InvalidInput(format!(
            "phi(i*{gamma}, b) does not decay: phi' + gamma*phi residual {decay_residual:.3e}"
        )));
    }
    let integral_phi = cum.re + (phib * phib).re / (2.0 * gamma);
    if integral_phi <= 0.0 {
        return Err(Error::Numerical("nonpositive norm integral for phi".into()));
    }
    let g = 1.0 / integral_phi.sqrt();

    // Jost solution: per-cell closed-form integrals + exact tail e^{-2γb}/(2γ)
    let states = jost_edge_states(spec, k);
    let cells = cells_of(spec);
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, (x0, x1, v)) in cells.iter().enumerate() {
        let step = CellStep::new(*v, x1 - x0, k);
        let (a, bb) = states[i];
        acc += step.integral_sq(a, bb);
    }
    let integral_f = acc.re + (-2.0 * gamma * b).exp() / (2.0 * gamma);
    if integral_f <= 0.0 {
        return Err(Error::Numerical("nonpositive norm integral for f".into()));
    }
    let m = 1.0 / integral_f.sqrt();
    Ok((g, m))
}

/// Full-line `T, L, R` associated with the potential extended by zero to the
/// whole line. `k = 0` is handled by the analytic limit: in the generic case
/// `T(0) = 0, L(0) = R(0) = -1`; in the exceptional case (`f'(0,0) = 0`) the
/// limit comes from the `k`-derivative of the entire denominator.
pub fn full_line_coefficients(spec: &OperatorSpec, k: Complex64) -> Result<FullLineCoefficients> {
    let tr = jost_boundary_trace(spec, k);
    let trm = jost_boundary_trace(spec, -k);
    let ik = Complex64::i() * k;
    let den = tr.fprime0 + ik * tr.f0;
    if k.norm() < 1e-9 {
        let h = 1e-5;
        let dp = jost_boundary_trace(spec, Complex64::new(h, 0.0));
        let dm = jost_boundary_trace(spec, Complex64::new(-h, 0.0));
        let fp0 = tr.fprime0; // f'(0,0)
        let scale = 1.0 + tr.f0.norm();
        if fp0.norm() > 1e-9 * scale {
            // generic full-line case
            return Ok(FullLineCoefficients {
                t: Complex64::new(0.0, 0.0),
                l: Complex64::new(-1.0, 0.0),
                r: Complex64::new(-1.0, 0.0),
                k,
            });
        }
        // d/dk [f'(k,0) + ik f(k,0)] at 0
        let ddk_fp = (dp.fprime0 - dm.fprime0) / (2.0 * h);
        let dden = ddk_fp + Complex64::i() * tr.f0;
        let t0 = 2.0 * Complex64::i() / dden;
        let dnum_l = (Complex64::i() * tr.f0) - ddk_fp;
        let l0 = dnum_l / dden;
        // numerator of R: f'(-k,0) + ik f(-k,0); its k-derivative at 0
        let dnum_r = -ddk_fp + Complex64::i() * tr.f0;
        let r0 = -dnum_r / dden;
        return Ok(FullLineCoefficients { t: t0, l: l0, r: r0, k });
    }
    if den.norm() < 1e-12 * (1.0 + k.norm()) * (1.0 + tr.f0.norm()) {
        return Err(Error::Numerical(format!(
            "full-line denominator vanishes at k = {k}: full-line bound state"
        )));
    }
    let t = 2.0 * ik / den;
    let l = (ik * tr.f0 - tr.fprime0) / den;
    let r = -(trm.fprime0 + ik * trm.f0) / den;
    Ok(FullLineCoefficients { t, l, r, k })
}

/// Samples `F_θ`, `S_θ` and `|F_θ|` on the uniform k-grid `0..=kmax`.
pub fn sample_direct(
    spec: &OperatorSpec,
    kmax: f64,
    dk: f64,
) -> Result<(SampledFunction, SampledFunction, SampledFunction)> {
    use rayon::prelude::*;
    if !(kmax > 0.0) || !(dk > 0.0) {
        return Err(Error::InvalidInput("kmax and dk must be positive".into()));
    }
    let n = (kmax / dk).round() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 * dk).collect();
    let fvals: Vec<Complex64> = grid
        .par_iter()
        .map(|&k| jost_function(spec, Complex64::new(k, 0.0)))
        .collect();
    let svals: Vec<Complex64> = grid
        .par_iter()
        .map(|&k| scattering_matrix(spec, k))
        .collect::<Result<Vec<_>>>()?;
    let absf: Vec<Complex64> = fvals.iter().map(|f| Complex64::new(f.norm(), 0.0)).collect();
    Ok((
        SampledFunction::new(grid.clone(), fvals)?,
        SampledFunction::new(grid.clone(), svals)?,
        SampledFunction::new(grid, absf)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::make_operator_spec;
    use approx::assert_relative_eq;

    fn well(v: f64, cot: f64) -> OperatorSpec {
        make_operator_spec(1.0, &[v], BoundaryParameter::NonDirichlet { cot_theta: cot }).unwrap()
    }

    /// Closed-form Jost function of the unit-width well, independent oracle.
    fn well_jost_oracle(v: f64, cot: f64, k: Complex64) -> Complex64 {
        let eta = (Complex64::new(v, 0.0) - k * k).sqrt();
        let (ch, sh_over) = if eta.norm() < 1e-9 {
            (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
        } else {
            (eta.cosh(), eta.sinh() / eta)
        };
        let e = (Complex64::i() * k).exp();
        e * (k - Complex64::i() * cot) * ch - e * (k * cot - Complex64::i() * eta * eta) * sh_over
    }

    #[test]
    fn free_trace() {
        let spec = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let k = Complex64::new(1.7, -0.4);
        let tr = jost_boundary_trace(&spec, k);
        assert!((tr.f0 - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!((tr.fprime0 - Complex64::i() * k).norm() < 1e-12);
    }

    #[test]
    fn well_trace_matches_closed_form() {
        // f(k,0) = e^{ik}[cosh η - ik sinh η / η] for the unit well
        let v = -10.0;
        let spec = well(v, 1.0);
        for &k in &[
            Complex64::new(0.7, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(1.3, -0.8),
        ] {
            let eta = (Complex64::new(v, 0.0) - k * k).sqrt();
            let expect =
                (Complex64::i() * k).exp() * (eta.cosh() - Complex64::i() * k * eta.sinh() / eta);
            let tr = jost_boundary_trace(&spec, k);
            assert!(
                (tr.f0 - expect).norm() < 1e-8 * (1.0 + expect.norm()),
                "k={k}: {} vs {expect}",
                tr.f0
            );
        }
    }

    #[test]
    fn jost_function_free_cases() {
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let nd = well(0.0, 2.5);
        for &k in &[Complex64::new(0.3, 0.0), Complex64::new(-1.0, 2.0)] {
            assert!((jost_function(&d, k) - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let expect = k - Complex64::i() * 2.5;
            assert!((jost_function(&nd, k) - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn jost_function_well_matches_oracle() {
        let spec = well(-10.0, 1.0);
        for i in 0..100 {
            let re = -3.0 + 0.061 * i as f64;
            let im = -2.0 + 0.0404 * i as f64;
            let k = Complex64::new(re, im);
            let got = jost_function(&spec, k);
            let expect = well_jost_oracle(-10.0, 1.0, k);
            assert!(
                (got - expect).norm() < 1e-8 * (1.0 + expect.norm()),
                "k = {k}"
            );
        }
    }

    #[test]
    fn regular_solution_free_dirichlet() {
        let spec = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let k = Complex64::new(1.3, 0.0);
        let xs = [0.0, 0.4, 1.0, 1.7];
        let sol = regular_solution(&spec, k, &xs).unwrap();
        for (x, v) in xs.iter().zip(&sol.values) {
            let expect = (k * x).sin() / k;
            assert!((v - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn regular_solution_well_closed_form() {
        // φ(k,x) = cosh ηx - cot θ sinh(ηx)/η inside the well
        let v = -10.0;
        let cot = 1.0;
        let spec = well(v, cot);
        let k = Complex64::new(0.9, 0.0);
        let eta = (Complex64::new(v, 0.0) - k * k).sqrt();
        for &x in &[0.2, 0.5, 0.95] {
            let expect = (eta * x).cosh() - cot * (eta * x).sinh() / eta;
            let (phi, _) = regular_at(&spec, k, x);
            assert!((phi - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn regular_solution_matches_jost_combination() {
        // (2.7): 2k φ = F(k)f(-k,x) - F(-k)f(k,x) (non-Dirichlet)
        let spec = well(-3.0, 0.5);
        for &kr in &[0.37, 1.9, 4.4] {
            let k = Complex64::new(kr, 0.0);
            let fk = jost_function(&spec, k);
            let fmk = jost_function(&spec, -k);
            for &x in &[0.1, 0.6, 1.0] {
                let (phi, _) = regular_at(&spec, k, x);
                let stp = jost_edge_trace_at(&spec, k, x);
                let stm = jost_edge_trace_at(&spec, -k, x);
                let combo = (fk * stm - fmk * stp) / (2.0 * k);
                assert!(
                    (phi - combo).norm() < 1e-8 * (1.0 + phi.norm()),
                    "k={kr} x={x}"
                );
            }
        }
    }

    fn jost_edge_trace_at(spec: &OperatorSpec, k: Complex64, x: f64) -> Complex64 {
        // helper: f(k, x) anywhere by propagating forward from the origin trace
        let (f0, df0) = jost_at_origin_pair(spec, k);
        let mut f = f0;
        let mut df = df0;
        for (x0, x1, v) in cells_of(spec) {
            if x <= x0 {
                break;
            }
            let upto = x.min(x1);
            let step = CellStep::new(v, upto - x0, k);
            let (nf, ndf) = step.forward(f, df);
            f = nf;
            df = ndf;
            if x <= x1 {
                return f;
            }
        }
        if x > spec.potential.b {
            let step = CellStep::new(0.0, x - spec.potential.b, k);
            let (nf, _) = step.forward(f, df);
            return nf;
        }
        f
    }

    fn jost_at_origin_pair(spec: &OperatorSpec, k: Complex64) -> (Complex64, Complex64) {
        let tr = jost_boundary_trace(spec, k);
        (tr.f0, tr.fprime0)
    }

    #[test]
    fn wronskian_identity() {
        let spec = well(-5.0, 2.0);
        for &kr in &[0.21, 1.0, 7.7, 33.0] {
            let k = Complex64::new(kr, 0.0);
            let a = jost_boundary_trace(&spec, k);
            let b = jost_boundary_trace(&spec, -k);
            let w = b.f0 * a.fprime0 - b.fprime0 * a.f0;
            let expect = 2.0 * Complex64::i() * k;
            assert!((w - expect).norm() < 1e-8 * (1.0 + expect.norm()));
        }
    }

    #[test]
    fn scattering_free_cases() {
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        assert!((scattering_matrix(&d, 3.2).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let nd = well(0.0, 1.0);
        for &k in &[0.2, 2.0, 9.5] {
            let s = scattering_matrix(&nd, k).unwrap();
            let kk = Complex64::new(k, 0.0);
            let expect = -(-kk - Complex64::i()) / (kk - Complex64::i());
            assert!((s - expect).norm() < 1e-12);
            assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn s_at_zero_is_plus_minus_one() {
        // generic non-Dirichlet: S(0) = -1; free Dirichlet: S(0) = +1
        let nd = well(-1.0, 2.0);
        let s = scattering_matrix(&nd, 0.0).unwrap();
        assert!((s - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let s = scattering_matrix(&d, 0.0).unwrap();
        assert!((s - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn h_free_cases() {
        let nd = well(0.0, 2.0);
        for &b in &[-3.0, -0.5, 0.1, 4.0] {
            assert_relative_eq!(h_function(&nd, b).unwrap(), b - 2.0, epsilon = 1e-10);
        }
        let d = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        assert_relative_eq!(h_function(&d, 1.7).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn h_large_beta_asymptotics() {
        let nd = well(-4.0, 3.0);
        let h = h_function(&nd, 80.0).unwrap();
        assert!((h - 80.0).abs() < 5.0, "H(80) = {h} should be 80 + O(1)");
        let d = make_operator_spec(1.0, &[-4.0], BoundaryParameter::Dirichlet).unwrap();
        let h = h_function(&d, 80.0).unwrap();
        assert!((h - 1.0).abs() < 0.05);
    }

    #[test]
    fn bound_states_well_a() {
        // (v, cot θ) = (-10, 1): two bound states
        let spec = well(-10.0, 1.0);
        let bs = bound_states(&spec, 10.0).unwrap();
        assert_eq!(bs.len(), 2);
        assert_relative_eq!(bs.entries[0].gamma, 0.7604091, epsilon = 1e-5);
        assert_relative_eq!(bs.entries[1].gamma, 3.2527304, epsilon = 1e-5);
    }

    #[test]
    fn bound_states_well_b() {
        let spec = well(-0.2, 6.0);
        let bs = bound_states(&spec, 10.0).unwrap();
        assert_eq!(bs.len(), 1);
        assert_relative_eq!(bs.entries[0].gamma, 6.0166435, epsilon = 1e-5);
    }

    #[test]
    fn no_bound_states_free_negative_cot() {
        let spec = well(0.0, -1.0);
        let bs = bound_states(&spec, 10.0).unwrap();
        assert!(bs.is_empty());
    }

    #[test]
    fn norming_constants_free_case() {
        // V ≡ 0, cot θ = 1: bound state at γ = 1 with φ = f = e^{-x}, so g² = m² = 2
        let spec = well(0.0, 1.0);
        let (g, m) = norming_constants(&spec, 1.0).unwrap();
        assert_relative_eq!(g * g, 2.0, max_relative = 1e-10);
        assert_relative_eq!(m * m, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn norming_relation_2_29() {
        // g = 2γm / |F(-iγ)| for the well with one bound state
        let spec = well(-0.2, 6.0);
        let bs = bound_states(&spec, 10.0).unwrap();
        let st = bs.entries[0];
        let fm = jost_function(&spec, Complex64::new(0.0, -st.gamma)).norm();
        let rhs = 2.0 * st.gamma * st.m / fm;
        assert_relative_eq!(st.g, rhs, max_relative = 1e-6);
    }

    #[test]
    fn rejects_non_bound_state_gamma() {
        let spec = well(-0.2, 6.0);
        assert!(norming_constants(&spec, 2.0).is_err());
    }

    #[test]
    fn full_line_free() {
        let spec = make_operator_spec(1.0, &[0.0], BoundaryParameter::Dirichlet).unwrap();
        let c = full_line_coefficients(&spec, Complex64::new(1.1, 0.0)).unwrap();
        assert!((c.t - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(c.l.norm() < 1e-12);
        assert!(c.r.norm() < 1e-12);
    }

    #[test]
    fn full_line_unitarity() {
        let spec = well(-2.5, 0.0);
        for &k in &[0.35, 1.1, 6.0] {
            let c = full_line_coefficients(&spec, Complex64::new(k, 0.0)).unwrap();
            assert_relative_eq!(c.t.norm_sqr() + c.l.norm_sqr(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn entirety_proxy_cauchy_mean() {
        // mean of F over a small circle equals the center value for an entire function
        let spec = well(-10.0, 1.0);
        let center = Complex64::new(0.8, -1.2);
        let r = 0.3;
        let n = 64;
        let mut mean = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let th = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let k = center + r * Complex64::new(th.cos(), th.sin());
            mean += jost_function(&spec, k);
        }
        mean /= n as f64;
        let f0 = jost_function(&spec, center);
        assert!((mean - f0).norm() < 1e-6 * (1.0 + f0.norm()));
    }

    #[test]
    fn asymptotics_non_dirichlet() {
        // F(k) - k + i cot θ - (i/2)∫V → 0 with decreasing residual
        let spec = well(-10.0, 1.0);
        let integral = -10.0;
        let mut prev = f64::INFINITY;
        for &k in &[1e3, 1e4] {
            let f = jost_function(&spec, Complex64::new(k, 0.0));
            let target = Complex64::new(k, -1.0) + Complex64::i() * (integral / 2.0);
            let resid = (f - target).norm();
            assert!(resid < prev);
            prev = resid;
        }
        assert!(prev < 1e-2);
    }
}
