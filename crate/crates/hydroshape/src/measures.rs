//! Disequilibria, Shannon entropies and shape complexities of hydrogenic
//! states, via the analytic decomposition into polynomial quartic integrals
//! and entropic functionals, plus an independent brute-force quadrature
//! oracle over the densities themselves.

use serde::Serialize;

use crate::hydrogenic::{check_charge, QuantumState, StateError};
use crate::quadrature::{
    cached_rule, integrate_adaptive, Domain, Estimate, QuadratureError, Weight,
};
use crate::specfun::{
    digamma_unchecked, ln_gamma_unchecked, PolyEvaluator, PolyFamily, PolySpec, SpecFunError,
};

/// Default relative tolerance of all measure computations, one order below
/// the acceptance tolerances.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

const LN_2: f64 = std::f64::consts::LN_2;
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Which route produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Method {
    #[serde(rename = "closed")]
    ClosedForm,
    #[serde(rename = "pipeline")]
    AnalyticPipeline,
    #[serde(rename = "oracle")]
    Oracle,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::ClosedForm => "closed",
            Method::AnalyticPipeline => "pipeline",
            Method::Oracle => "oracle",
        }
    }
}

/// A measure value with an error estimate and its provenance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureResult {
    pub value: f64,
    pub err_est: f64,
    pub method: Method,
}

impl MeasureResult {
    pub fn new(value: f64, err_est: f64, method: Method) -> Self {
        Self { value, err_est, method }
    }
}

/// The six measures of one state in both spaces, plus the complexity
/// product `C[ρ]`·`C[γ]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub disequilibrium_pos: MeasureResult,
    pub shannon_pos: MeasureResult,
    pub complexity_pos: MeasureResult,
    pub disequilibrium_mom: MeasureResult,
    pub shannon_mom: MeasureResult,
    pub complexity_mom: MeasureResult,
    pub product: MeasureResult,
}

impl ComplexityReport {
    /// Complexities assembled as ⟨·⟩·exp(S) from the Z-dependent parts;
    /// the Z^{±D} factors cancel the ∓D ln Z entropy terms.
    pub(crate) fn assemble(
        dis_pos: MeasureResult,
        s_pos: MeasureResult,
        dis_mom: MeasureResult,
        s_mom: MeasureResult,
    ) -> Self {
        let method = dis_pos.method;
        let c = |dis: MeasureResult, s: MeasureResult| {
            let value = dis.value * s.value.exp();
            let rel = (dis.err_est / dis.value.abs().max(f64::MIN_POSITIVE)).hypot(s.err_est);
            MeasureResult::new(value, value.abs() * rel, method)
        };
        let c_pos = c(dis_pos, s_pos);
        let c_mom = c(dis_mom, s_mom);
        let product = MeasureResult::new(
            c_pos.value * c_mom.value,
            c_pos.value * c_mom.value
                * (c_pos.err_est / c_pos.value.abs().max(f64::MIN_POSITIVE))
                    .hypot(c_mom.err_est / c_mom.value.abs().max(f64::MIN_POSITIVE)),
            method,
        );
        Self {
            disequilibrium_pos: dis_pos,
            shannon_pos: s_pos,
            complexity_pos: c_pos,
            disequilibrium_mom: dis_mom,
            shannon_mom: s_mom,
            complexity_mom: c_mom,
            product,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("η − L − 1 = {0} is not a nonnegative integer")]
    NonIntegerRadialDegree(f64),
}

impl From<SpecFunError> for MeasureError {
    fn from(e: SpecFunError) -> Self {
        MeasureError::Quadrature(QuadratureError::SpecFun(e))
    }
}

fn radial_degree_from(eta: f64, grand_l: f64) -> Result<usize, MeasureError> {
    let kf = eta - grand_l - 1.0;
    if kf < -1e-9 || (kf - kf.round()).abs() > 1e-9 {
        return Err(MeasureError::NonIntegerRadialDegree(kf));
    }
    Ok(kf.round() as usize)
}

// ---------------------------------------------------------------------------
// quartic integrals
// ---------------------------------------------------------------------------

/// Radial position quartic integral ∫₀^∞ x^{3−D} {ω_{2L+1}(x) [L̃]²}² dx.
///
/// The exponent is 3−D: with the 2^{D−2} Z^D/η^{D+2} prefactor this
/// reproduces the ground-state disequilibrium for every D ≥ 2, which the
/// −D−5 variant fails to do (its integrand is not even
/// integrable at the origin).
pub fn radial_quartic_position(d: usize, eta: f64, grand_l: f64) -> Result<f64, MeasureError> {
    radial_quartic_position_with_power(d, eta, grand_l, 3.0 - d as f64)
}

/// The same integral with the power of the leading x factor replaced, as a
/// fault-injection point for route-agreement validation.
#[doc(hidden)]
pub fn radial_quartic_position_with_power(
    _d: usize,
    eta: f64,
    grand_l: f64,
    power: f64,
) -> Result<f64, MeasureError> {
    let k = radial_degree_from(eta, grand_l)?;
    let alpha = 2.0 * grand_l + 1.0;
    // substitute s = 2x: exact Gauss-Laguerre with weight s^{4L+2+power} e^{-s}
    let alpha_eff = 4.0 * grand_l + 2.0 + power;
    let rule = cached_rule(Weight::GenLaguerre { alpha: alpha_eff }, 2 * k + 2)?;
    let ev = PolyEvaluator::new(PolySpec::new(PolyFamily::Laguerre, k, alpha)?);
    let sum = rule.integrate(|s| {
        let p = ev.eval(0.5 * s);
        let p2 = p * p;
        p2 * p2
    });
    Ok(2f64.powf(-(alpha_eff + 1.0)) * sum)
}

/// Angular quartic integral ∫ |Y_{l,{μ}}|⁴ dΩ, factorized into exact
/// Gauss–Gegenbauer evaluations per angle; 1/(2π) for D = 2.
pub fn angular_quartic(state: &QuantumState) -> Result<f64, MeasureError> {
    let mut value = 1.0 / (2.0 * std::f64::consts::PI);
    for f in state.angular_factors() {
        let lambda_rule = 2.0 * f.sin_power as f64 + f.measure_power as f64 / 2.0;
        let rule = cached_rule(Weight::Gegenbauer { lambda: lambda_rule }, 2 * f.degree + 2)?;
        let ev = PolyEvaluator::new(PolySpec::new(PolyFamily::Gegenbauer, f.degree, f.lambda)?);
        value *= rule.integrate(|x| {
            let c = ev.eval(x);
            let c2 = c * c;
            c2 * c2
        });
    }
    Ok(value)
}

/// Radial momentum quartic integral
/// ∫₀^∞ y^{4l+D−1} (1+y²)^{−(4L+8)} [C̃_{η−L−1}^{L+1}((1−y²)/(1+y²))]⁴ dy.
///
/// The power 4l+D−1 (= 4L−D+5) reproduces the ground-state momentum
/// disequilibrium for every D; it coincides with 4L+D−1 only at
/// D = 3. Evaluated exactly after mapping t = (1−y²)/(1+y²), where the
/// integrand becomes a Gegenbauer weight of parameter L+l+1 times the
/// polynomial (1+t)^{D+2} [C̃]⁴.
pub fn radial_quartic_momentum(d: usize, eta: f64, grand_l: f64) -> Result<f64, MeasureError> {
    let k = radial_degree_from(eta, grand_l)?;
    let l = grand_l - (d as f64 - 3.0) / 2.0;
    let lambda_rule = grand_l + l + 1.0;
    let n_pts = (4 * k + d + 4) / 2 + 1;
    let rule = cached_rule(Weight::Gegenbauer { lambda: lambda_rule }, n_pts)?;
    let ev = PolyEvaluator::new(PolySpec::new(PolyFamily::Gegenbauer, k, grand_l + 1.0)?);
    let sum = rule.integrate(|t| {
        let c = ev.eval(t);
        let c2 = c * c;
        (1.0 + t).powi(d as i32 + 2) * c2 * c2
    });
    Ok(2f64.powf(-(4.0 * grand_l + 8.0)) * sum)
}

// ---------------------------------------------------------------------------
// entropic functionals
// ---------------------------------------------------------------------------

/// Laguerre entropic functional −∫₀^∞ x ω_α(x) ỹ_k²(x) ln ỹ_k²(x) dx.
///
/// Degree 0 reduces analytically to (α+1)·ln Γ(α+1); positive degrees go
/// through root-subdivided adaptive quadrature.
pub fn laguerre_entropy(k: usize, alpha: f64, rel_tol: f64) -> Result<Estimate, MeasureError> {
    if k == 0 {
        PolySpec::new(PolyFamily::Laguerre, 0, alpha)?;
        let value = (alpha + 1.0) * ln_gamma_unchecked(alpha + 1.0);
        return Ok(Estimate { value, err_est: 1e-16 * (1.0 + value.abs()) });
    }
    laguerre_entropy_quadrature(k, alpha, rel_tol)
}

/// Quadrature path of [`laguerre_entropy`], usable at any degree.
pub fn laguerre_entropy_quadrature(
    k: usize,
    alpha: f64,
    rel_tol: f64,
) -> Result<Estimate, MeasureError> {
    let spec = PolySpec::new(PolyFamily::Laguerre, k, alpha)?;
    let roots = spec.roots()?;
    let ev = PolyEvaluator::new(spec);
    let est = integrate_adaptive(
        |x| {
            let ln_w = (alpha + 1.0) * x.ln() - x;
            let ln_p2 = ev.eval_ln_sq(x);
            let t = ln_w + ln_p2;
            if t < -745.0 || !t.is_finite() {
                0.0
            } else {
                t.exp() * ln_p2
            }
        },
        Domain::HalfLine { scale: 2.0 * k as f64 + alpha + 1.0 },
        &roots,
        rel_tol,
    )?;
    Ok(Estimate { value: -est.value, err_est: est.err_est })
}

/// Gegenbauer entropic functional −∫₋₁¹ ω*_λ(x) ỹ_k²(x) ln ỹ_k²(x) dx.
///
/// Degree 0 reduces analytically to ln(√π Γ(λ+1/2)/Γ(λ+1)).
pub fn gegenbauer_entropy(k: usize, lambda: f64, rel_tol: f64) -> Result<Estimate, MeasureError> {
    if k == 0 {
        let m0 = crate::specfun::weight_zeroth_moment(PolyFamily::Gegenbauer, lambda)?;
        let value = m0.ln();
        return Ok(Estimate { value, err_est: 1e-16 * (1.0 + value.abs()) });
    }
    gegenbauer_entropy_quadrature(k, lambda, rel_tol)
}

/// Quadrature path of [`gegenbauer_entropy`], usable at any degree.
pub fn gegenbauer_entropy_quadrature(
    k: usize,
    lambda: f64,
    rel_tol: f64,
) -> Result<Estimate, MeasureError> {
    let spec = PolySpec::new(PolyFamily::Gegenbauer, k, lambda)?;
    let roots = spec.roots()?;
    let ev = PolyEvaluator::new(spec);
    let w_exp = lambda - 0.5;
    let est = integrate_adaptive(
        |x| {
            let ln_w = if w_exp == 0.0 { 0.0 } else { w_exp * (1.0 - x * x).ln() };
            let ln_p2 = ev.eval_ln_sq(x);
            let t = ln_w + ln_p2;
            if t < -745.0 || !t.is_finite() {
                0.0
            } else {
                t.exp() * ln_p2
            }
        },
        Domain::Finite { a: -1.0, b: 1.0 },
        &roots,
        rel_tol,
    )?;
    Ok(Estimate { value: -est.value, err_est: est.err_est })
}

// ---------------------------------------------------------------------------
// entropy constants
// ---------------------------------------------------------------------------

/// The constant part of the radial position entropy,
/// `S[R]` = A(n,l,D) + `E₁[L̃]`/(2η) − D ln Z.
pub fn position_radial_entropy_const(n: u32, l: u32, d: usize) -> f64 {
    let eta = n as f64 + (d as f64 - 3.0) / 2.0;
    let grand_l = l as f64 + (d as f64 - 3.0) / 2.0;
    -2.0 * l as f64
        * ((2.0 * eta - 2.0 * grand_l - 1.0) / (2.0 * eta) + digamma_unchecked(eta + grand_l + 1.0))
        + (3.0 * eta * eta - grand_l * (grand_l + 1.0)) / eta
        + (d as f64 + 1.0) * eta.ln()
        - (d as f64 - 1.0) * LN_2
}

/// The constant part of the angular entropy,
/// `S[Y]` = B(l,{μ},D) + Σ_j `E₂[C̃_j]`; ln 2π for D = 2.
pub fn angular_entropy_const(state: &QuantumState) -> f64 {
    let mut value = LN_2PI;
    for f in state.angular_factors() {
        let s = f.sin_power as f64;
        if f.sin_power == 0 {
            continue;
        }
        let alpha_j = f.lambda - s;
        let mu_j = f.degree as f64 + s;
        value -= 2.0
            * s
            * (digamma_unchecked(2.0 * alpha_j + mu_j + s) - digamma_unchecked(alpha_j + mu_j)
                - LN_2
                - 1.0 / (2.0 * (alpha_j + mu_j)));
    }
    value
}

/// The constant part of the radial momentum entropy,
/// `S[M]` = F(n,l,D) + `E₂[C̃_{η−L−1}^{L+1}]` + D ln Z.
///
/// The term 2η(2L+1)/(4η²−1) is an indeterminate 0/0 at η = 1/2 (the D = 2
/// ground state, where also 2L+1 = 2η−1 = 0); the cancelled ratio tends
/// to 1 there.
pub fn momentum_radial_entropy_const(n: u32, l: u32, d: usize) -> f64 {
    let eta = n as f64 + (d as f64 - 3.0) / 2.0;
    let grand_l = l as f64 + (d as f64 - 3.0) / 2.0;
    let ratio = if 2.0 * eta - 1.0 == 0.0 {
        1.0
    } else {
        (2.0 * grand_l + 1.0) / (2.0 * eta - 1.0)
    };
    let pole_term = ratio * 2.0 * eta / (2.0 * eta + 1.0);
    -(d as f64) * eta.ln() + (2.0 * grand_l + 4.0) * LN_2
        - (2.0 * grand_l + 4.0) * (digamma_unchecked(eta + grand_l + 1.0) - digamma_unchecked(eta))
        + (grand_l + 2.0) / eta
        - (d as f64 + 1.0) * (1.0 - pole_term)
}

// ---------------------------------------------------------------------------
// analytic pipeline measures
// ---------------------------------------------------------------------------

/// `S[Y]` with the Gegenbauer entropic functionals of every angular factor.
fn angular_shannon(state: &QuantumState, rel_tol: f64) -> Result<Estimate, MeasureError> {
    let mut value = angular_entropy_const(state);
    let mut err_sq = 0.0;
    for f in state.angular_factors() {
        let e2 = gegenbauer_entropy(f.degree, f.lambda, rel_tol)?;
        value += e2.value;
        err_sq += e2.err_est * e2.err_est;
    }
    Ok(Estimate { value, err_est: err_sq.sqrt() })
}

/// ⟨ρ⟩ = (2^{D−2}/η^{D+2}) Z^D K₁ K₂.
pub fn disequilibrium_position(state: &QuantumState, z: f64) -> Result<MeasureResult, MeasureError> {
    check_charge(z)?;
    let d = state.dim();
    let k1 = radial_quartic_position(d, state.eta(), state.grand_l())?;
    let k2 = angular_quartic(state)?;
    let value =
        2f64.powi(d as i32 - 2) * state.eta().powi(-(d as i32 + 2)) * z.powi(d as i32) * k1 * k2;
    Ok(MeasureResult::new(value, 5e-15 * value.abs(), Method::AnalyticPipeline))
}

/// ⟨γ⟩ = (2^{4L+8} η^D / Z^D) K₃ K₂.
pub fn disequilibrium_momentum(state: &QuantumState, z: f64) -> Result<MeasureResult, MeasureError> {
    check_charge(z)?;
    let d = state.dim();
    let k3 = radial_quartic_momentum(d, state.eta(), state.grand_l())?;
    let k2 = angular_quartic(state)?;
    let value = 2f64.powf(4.0 * state.grand_l() + 8.0) * state.eta().powi(d as i32)
        / z.powi(d as i32)
        * k3
        * k2;
    Ok(MeasureResult::new(value, 5e-15 * value.abs(), Method::AnalyticPipeline))
}

/// `S[ρ]` = A(n,l,D) + E₁/(2η) − D ln Z + `S[Y]`.
pub fn shannon_position(
    state: &QuantumState,
    z: f64,
    rel_tol: f64,
) -> Result<MeasureResult, MeasureError> {
    check_charge(z)?;
    let e1 = laguerre_entropy(state.radial_degree(), 2.0 * state.grand_l() + 1.0, rel_tol)?;
    let sy = angular_shannon(state, rel_tol)?;
    let value = position_radial_entropy_const(state.principal(), state.l(), state.dim())
        + e1.value / (2.0 * state.eta())
        - state.dim() as f64 * z.ln()
        + sy.value;
    let err = (e1.err_est / (2.0 * state.eta())).hypot(sy.err_est) + 1e-15 * (1.0 + value.abs());
    Ok(MeasureResult::new(value, err, Method::AnalyticPipeline))
}

/// `S[γ]` = F(n,l,D) + `E₂[C̃_{η−L−1}^{L+1}]` + D ln Z + `S[Y]`.
pub fn shannon_momentum(
    state: &QuantumState,
    z: f64,
    rel_tol: f64,
) -> Result<MeasureResult, MeasureError> {
    check_charge(z)?;
    let e2 = gegenbauer_entropy(state.radial_degree(), state.grand_l() + 1.0, rel_tol)?;
    let sy = angular_shannon(state, rel_tol)?;
    let value = momentum_radial_entropy_const(state.principal(), state.l(), state.dim())
        + e2.value
        + state.dim() as f64 * z.ln()
        + sy.value;
    let err = e2.err_est.hypot(sy.err_est) + 1e-15 * (1.0 + value.abs());
    Ok(MeasureResult::new(value, err, Method::AnalyticPipeline))
}

/// `C[ρ]`, assembled in log space without any Z dependence.
pub fn complexity_position(state: &QuantumState, rel_tol: f64) -> Result<MeasureResult, MeasureError> {
    let d = state.dim();
    let k1 = radial_quartic_position(d, state.eta(), state.grand_l())?;
    let k2 = angular_quartic(state)?;
    let e1 = laguerre_entropy(state.radial_degree(), 2.0 * state.grand_l() + 1.0, rel_tol)?;
    let sy = angular_shannon(state, rel_tol)?;
    let ln_c = (d as f64 - 2.0) * LN_2 - (d as f64 + 2.0) * state.eta().ln()
        + k1.ln()
        + k2.ln()
        + position_radial_entropy_const(state.principal(), state.l(), d)
        + e1.value / (2.0 * state.eta())
        + sy.value;
    let value = ln_c.exp();
    let err = value * ((e1.err_est / (2.0 * state.eta())).hypot(sy.err_est) + 1e-14);
    Ok(MeasureResult::new(value, err, Method::AnalyticPipeline))
}

/// `C[γ]`, assembled in log space without any Z dependence.
pub fn complexity_momentum(state: &QuantumState, rel_tol: f64) -> Result<MeasureResult, MeasureError> {
    let d = state.dim();
    let k3 = radial_quartic_momentum(d, state.eta(), state.grand_l())?;
    let k2 = angular_quartic(state)?;
    let e2 = gegenbauer_entropy(state.radial_degree(), state.grand_l() + 1.0, rel_tol)?;
    let sy = angular_shannon(state, rel_tol)?;
    let ln_c = (4.0 * state.grand_l() + 8.0) * LN_2 + d as f64 * state.eta().ln()
        + k3.ln()
        + k2.ln()
        + momentum_radial_entropy_const(state.principal(), state.l(), d)
        + e2.value
        + sy.value;
    let value = ln_c.exp();
    let err = value * (e2.err_est.hypot(sy.err_est) + 1e-14);
    Ok(MeasureResult::new(value, err, Method::AnalyticPipeline))
}

/// All six measures of the analytic pipeline, with the complexities
/// built from the Z-dependent intermediates.
pub fn pipeline_report(
    state: &QuantumState,
    z: f64,
    rel_tol: f64,
) -> Result<ComplexityReport, MeasureError> {
    let dis_pos = disequilibrium_position(state, z)?;
    let s_pos = shannon_position(state, z, rel_tol)?;
    let dis_mom = disequilibrium_momentum(state, z)?;
    let s_mom = shannon_momentum(state, z, rel_tol)?;
    Ok(ComplexityReport::assemble(dis_pos, s_pos, dis_mom, s_mom))
}

#[doc(hidden)]
pub fn disequilibrium_position_with_k1_power(
    state: &QuantumState,
    z: f64,
    power: f64,
) -> Result<MeasureResult, MeasureError> {
    check_charge(z)?;
    let d = state.dim();
    let k1 = radial_quartic_position_with_power(d, state.eta(), state.grand_l(), power)?;
    let k2 = angular_quartic(state)?;
    let value =
        2f64.powi(d as i32 - 2) * state.eta().powi(-(d as i32 + 2)) * z.powi(d as i32) * k1 * k2;
    Ok(MeasureResult::new(value, 5e-15 * value.abs(), Method::AnalyticPipeline))
}

// ---------------------------------------------------------------------------
// brute-force oracle
// ---------------------------------------------------------------------------

struct RadialParts {
    norm: Estimate,
    quartic: Estimate,
    entropy: Estimate,
}

/// ∫ f², ∫ f⁴ and −∫ f² ln f² of a radial factor against r^{D−1} dr, from a
/// log-space evaluator ln f²(r), with breakpoints at the zeros of f.
fn radial_parts<F: Fn(f64) -> f64>(
    d: usize,
    ln_sq: F,
    zeros: &[f64],
    scale: f64,
    rel_tol: f64,
) -> Result<RadialParts, MeasureError> {
    let dm1 = d as f64 - 1.0;
    let dom = Domain::HalfLine { scale };
    let guarded = |t: f64| if t < -745.0 || !t.is_finite() { 0.0 } else { t.exp() };
    let norm = integrate_adaptive(|r| guarded(ln_sq(r) + dm1 * r.ln()), dom, zeros, rel_tol)?;
    let quartic =
        integrate_adaptive(|r| guarded(2.0 * ln_sq(r) + dm1 * r.ln()), dom, zeros, rel_tol)?;
    let entropy = integrate_adaptive(
        |r| {
            let ls = ln_sq(r);
            let t = ls + dm1 * r.ln();
            if t < -745.0 || !t.is_finite() {
                0.0
            } else {
                t.exp() * ls
            }
        },
        dom,
        zeros,
        rel_tol,
    )?;
    Ok(RadialParts {
        norm,
        quartic,
        entropy: Estimate { value: -entropy.value, err_est: entropy.err_est },
    })
}

struct AngularParts {
    norm: f64,
    norm_err: f64,
    quartic: f64,
    /// per-factor −∫ f_j² ln f_j² and the companion norms, combined below
    entropies: Vec<Estimate>,
    norms: Vec<f64>,
}

fn angular_parts(state: &QuantumState, rel_tol: f64) -> Result<AngularParts, MeasureError> {
    let mut norm = 1.0;
    let mut norm_err: f64 = 0.0;
    let mut quartic = 1.0 / (2.0 * std::f64::consts::PI);
    let mut entropies = Vec::new();
    let mut norms = Vec::new();
    for f in state.angular_factors() {
        let spec = PolySpec::new(PolyFamily::Gegenbauer, f.degree, f.lambda)?;
        let roots = spec.roots()?;
        let ev = PolyEvaluator::new(spec);
        let s = f.sin_power as f64;
        let w2 = s + (f.measure_power as f64 - 1.0) / 2.0;
        let w4 = 2.0 * s + (f.measure_power as f64 - 1.0) / 2.0;
        let dom = Domain::Finite { a: -1.0, b: 1.0 };
        let nj = integrate_adaptive(
            |x| {
                let c = ev.eval(x);
                c * c * (1.0 - x * x).powf(w2)
            },
            dom,
            &roots,
            rel_tol,
        )?;
        let qj = integrate_adaptive(
            |x| {
                let c = ev.eval(x);
                let c2 = c * c;
                c2 * c2 * (1.0 - x * x).powf(w4)
            },
            dom,
            &roots,
            rel_tol,
        )?;
        let sj = integrate_adaptive(
            |x| {
                let ln_p2 = ev.eval_ln_sq(x);
                if ln_p2 == f64::NEG_INFINITY {
                    return 0.0;
                }
                let one_m_x2 = 1.0 - x * x;
                let ln_f2 =
                    if f.sin_power == 0 { ln_p2 } else { ln_p2 + s * one_m_x2.ln() };
                ln_p2.exp() * one_m_x2.powf(w2) * ln_f2
            },
            dom,
            &roots,
            rel_tol,
        )?;
        norm_err = norm_err.hypot(nj.err_est / nj.value.abs().max(f64::MIN_POSITIVE));
        norm *= nj.value;
        quartic *= qj.value;
        entropies.push(Estimate { value: -sj.value, err_est: sj.err_est });
        norms.push(nj.value);
    }
    Ok(AngularParts { norm, norm_err: norm_err * norm.abs(), quartic, entropies, norms })
}

/// −∫ |Y|² ln |Y|² dΩ assembled from the per-factor pieces, with the
/// numeric norms folded in rather than assumed to be 1.
fn angular_entropy_from_parts(parts: &AngularParts) -> Estimate {
    let mut value = LN_2PI * parts.norm;
    let mut err_sq = (LN_2PI * parts.norm_err).powi(2);
    for (j, e) in parts.entropies.iter().enumerate() {
        let others: f64 =
            parts.norms.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &n)| n).product();
        value += e.value * others;
        err_sq += (e.err_est * others).powi(2);
    }
    Estimate { value, err_est: err_sq.sqrt() }
}

struct OracleParts {
    pos: RadialParts,
    mom: RadialParts,
    ang: AngularParts,
}

fn oracle_parts(state: &QuantumState, z: f64, rel_tol: f64) -> Result<OracleParts, MeasureError> {
    check_charge(z)?;
    let d = state.dim();
    let eta = state.eta();
    let l = state.l() as f64;
    let grand_l = state.grand_l();

    // position radial factor
    let lambda_len = eta / (2.0 * z);
    let lag = state.radial_laguerre();
    let lag_roots = lag.roots()?;
    let r_zeros: Vec<f64> = lag_roots.iter().map(|&x| x * lambda_len).collect();
    let lag_ev = PolyEvaluator::new(lag);
    let ln_pref_pos = -(d as f64) * lambda_len.ln() - (2.0 * eta).ln();
    let ln_r_sq = move |r: f64| {
        let x = r / lambda_len;
        let poly = lag_ev.eval_ln_sq(x);
        if l == 0.0 {
            ln_pref_pos - x + poly
        } else {
            ln_pref_pos + 2.0 * l * x.ln() - x + poly
        }
    };
    let pos = radial_parts(d, ln_r_sq, &r_zeros, 2.0 * eta * lambda_len, rel_tol)?;

    // momentum radial factor
    let geg = state.momentum_gegenbauer();
    let geg_roots = geg.roots()?;
    let mut p_zeros: Vec<f64> = geg_roots
        .iter()
        .map(|&y| z / eta * ((1.0 - y) / (1.0 + y)).sqrt())
        .collect();
    p_zeros.sort_by(f64::total_cmp);
    let geg_ev = PolyEvaluator::new(geg);
    let ln_pref_mom = 2.0 * (grand_l + 2.0) * LN_2 + d as f64 * (eta / z).ln();
    let ln_m_sq = move |p: f64| {
        let u = eta * p / z;
        let u2 = u * u;
        let y = (1.0 - u2) / (1.0 + u2);
        let poly = geg_ev.eval_ln_sq(y);
        let radial = if l == 0.0 { 0.0 } else { 2.0 * l * u.ln() };
        ln_pref_mom + radial - 2.0 * (grand_l + 2.0) * u2.ln_1p() + poly
    };
    let mom = radial_parts(d, ln_m_sq, &p_zeros, z / eta, rel_tol)?;

    let ang = angular_parts(state, rel_tol)?;
    Ok(OracleParts { pos, mom, ang })
}

/// All six measures by direct factorized quadrature of the densities,
/// bypassing every closed-form constant. This is the ground-truth route.
pub fn oracle_report(
    state: &QuantumState,
    z: f64,
    rel_tol: f64,
) -> Result<ComplexityReport, MeasureError> {
    let parts = oracle_parts(state, z, rel_tol)?;
    let sy = angular_entropy_from_parts(&parts.ang);
    let mk = |radial: &RadialParts| {
        let dis = radial.quartic.value * parts.ang.quartic;
        let dis_err = radial.quartic.err_est * parts.ang.quartic;
        // S = S_radial·∫|Y|² + (∫ radial²)·S_angular
        let s = radial.entropy.value * parts.ang.norm + radial.norm.value * sy.value;
        let s_err = (radial.entropy.err_est * parts.ang.norm)
            .hypot(radial.norm.err_est * sy.value)
            .hypot(radial.norm.value * sy.err_est);
        (
            MeasureResult::new(dis, dis_err, Method::Oracle),
            MeasureResult::new(s, s_err, Method::Oracle),
        )
    };
    let (dis_pos, s_pos) = mk(&parts.pos);
    let (dis_mom, s_mom) = mk(&parts.mom);
    Ok(ComplexityReport::assemble(dis_pos, s_pos, dis_mom, s_mom))
}

/// (∫ρ, ∫γ) by the same factorized quadrature; both must be 1.
pub fn normalization(state: &QuantumState, z: f64, rel_tol: f64) -> Result<(f64, f64), MeasureError> {
    let parts = oracle_parts(state, z, rel_tol)?;
    Ok((parts.pos.norm.value * parts.ang.norm, parts.mom.norm.value * parts.ang.norm))
}
