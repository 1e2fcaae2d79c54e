//! Orthonormal Laguerre and Gegenbauer polynomials: evaluation, monic
//! recurrence coefficients, and roots.
//!
//! "Orthonormal" means ∫ w(x) p_j(x) p_k(x) dx = δ_{jk} under the family
//! weight, w(x) = x^α e^{−x} on (0,∞) for Laguerre and
//! w(x) = (1−x²)^{λ−1/2} on (−1,1) for Gegenbauer. Values are produced by
//! the three-term recurrence on orthonormal values, which stay O(1) inside
//! the bulk of the support, with a power-of-two rescale guard for the far
//! tails. Signs follow the classical conventions (L₁⁰(0) = +1).

use super::gamma::ln_gamma_unchecked;
use super::SpecFunError;

/// Polynomial family, identified by its orthogonality weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyFamily {
    /// Generalized Laguerre, weight x^α e^{−x} on (0, ∞), α > −1.
    Laguerre,
    /// Gegenbauer (ultraspherical), weight (1−x²)^{λ−1/2} on (−1, 1), λ > 0.
    Gegenbauer,
}

/// An orthonormal classical polynomial: family, degree and weight parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolySpec {
    family: PolyFamily,
    degree: usize,
    param: f64,
}

impl PolySpec {
    pub fn new(family: PolyFamily, degree: usize, param: f64) -> Result<Self, SpecFunError> {
        check_param(family, param)?;
        Ok(Self { family, degree, param })
    }

    pub fn family(&self) -> PolyFamily {
        self.family
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn param(&self) -> f64 {
        self.param
    }

    /// Value of the orthonormal polynomial at `x`.
    pub fn eval(&self, x: f64) -> f64 {
        PolyEvaluator::new(*self).eval(x)
    }

    /// All real roots, sorted ascending, strictly inside the support.
    ///
    /// Nodes come from the eigenvalues of the symmetric Jacobi matrix,
    /// sharpened by one Newton step on the recurrence-evaluated polynomial.
    pub fn roots(&self) -> Result<Vec<f64>, SpecFunError> {
        if self.degree == 0 {
            return Ok(Vec::new());
        }
        let coeffs = recurrence_coeffs(self.family, self.param, self.degree)?;
        let diag: Vec<f64> = coeffs.iter().map(|&(a, _)| a).collect();
        let off: Vec<f64> = coeffs[1..].iter().map(|&(_, b)| b.sqrt()).collect();
        let mut roots = symtri_eigenvalues(diag, off)?;
        let ev = PolyEvaluator::new(*self);
        for r in &mut roots {
            for _ in 0..2 {
                let (p, dp) = ev.eval_with_derivative(*r);
                if dp != 0.0 {
                    let step = p / dp;
                    if step.is_finite() {
                        *r -= step;
                    }
                }
            }
        }
        roots.sort_by(f64::total_cmp);
        Ok(roots)
    }
}

fn check_param(family: PolyFamily, param: f64) -> Result<(), SpecFunError> {
    let ok = match family {
        PolyFamily::Laguerre => param.is_finite() && param > -1.0,
        PolyFamily::Gegenbauer => param.is_finite() && param > 0.0,
    };
    if ok {
        Ok(())
    } else {
        Err(SpecFunError::InvalidPolyParam { family, param })
    }
}

/// Zeroth moment of the family weight: ∫ w(x) dx over the support.
pub fn weight_zeroth_moment(family: PolyFamily, param: f64) -> Result<f64, SpecFunError> {
    check_param(family, param)?;
    Ok(match family {
        PolyFamily::Laguerre => ln_gamma_unchecked(param + 1.0).exp(),
        PolyFamily::Gegenbauer => {
            // sqrt(pi) Gamma(lam + 1/2) / Gamma(lam + 1)
            (0.5 * std::f64::consts::PI.ln() + ln_gamma_unchecked(param + 0.5)
                - ln_gamma_unchecked(param + 1.0))
            .exp()
        }
    })
}

/// Monic three-term recurrence coefficients (a_k, b_k), k = 0..n_max−1,
/// for the family weight: π_{k+1} = (x − a_k) π_k − b_k π_{k−1}.
///
/// b_0 holds the zeroth moment of the weight (Gautschi's convention);
/// b_k > 0 for k ≥ 1.
pub fn recurrence_coeffs(
    family: PolyFamily,
    param: f64,
    n_max: usize,
) -> Result<Vec<(f64, f64)>, SpecFunError> {
    check_param(family, param)?;
    if n_max == 0 {
        return Err(SpecFunError::EmptyRecurrence);
    }
    let m0 = weight_zeroth_moment(family, param)?;
    let mut out = Vec::with_capacity(n_max);
    match family {
        PolyFamily::Laguerre => {
            for k in 0..n_max {
                let kf = k as f64;
                let a = 2.0 * kf + param + 1.0;
                let b = if k == 0 { m0 } else { kf * (kf + param) };
                out.push((a, b));
            }
        }
        PolyFamily::Gegenbauer => {
            for k in 0..n_max {
                let kf = k as f64;
                let b = if k == 0 {
                    m0
                } else {
                    kf * (kf + 2.0 * param - 1.0) / (4.0 * (kf + param) * (kf + param - 1.0))
                };
                out.push((0.0, b));
            }
        }
    }
    Ok(out)
}

/// Reusable evaluator holding the precomputed recurrence coefficients.
pub struct PolyEvaluator {
    degree: usize,
    sign: f64,
    p0: f64,
    a: Vec<f64>,
    sqrt_b: Vec<f64>,
}

const RESCALE_LIMIT: f64 = 1e250;
const RESCALE: f64 = 1e-250;
const RESCALE_LN: f64 = 575.6462732485114; // ln(1e250)

impl PolyEvaluator {
    pub fn new(spec: PolySpec) -> Self {
        // parameters were validated at construction
        let coeffs = recurrence_coeffs(spec.family, spec.param, spec.degree + 1)
            .expect("PolySpec holds a validated parameter");
        let a: Vec<f64> = coeffs.iter().map(|&(a, _)| a).collect();
        let sqrt_b: Vec<f64> = coeffs.iter().map(|&(_, b)| b.sqrt()).collect();
        // classical Laguerre has leading coefficient (−1)^k / k!
        let sign = match spec.family {
            PolyFamily::Laguerre if spec.degree % 2 == 1 => -1.0,
            _ => 1.0,
        };
        Self { degree: spec.degree, sign, p0: 1.0 / sqrt_b[0], a, sqrt_b }
    }

    /// (mantissa, count) with value = mantissa · (1e250)^count.
    fn eval_scaled(&self, x: f64) -> (f64, i32) {
        let mut prev = 0.0f64;
        let mut cur = self.p0;
        let mut scale: i32 = 0;
        for k in 0..self.degree {
            let next = ((x - self.a[k]) * cur - self.sqrt_b[k] * prev) / self.sqrt_b[k + 1];
            prev = cur;
            cur = next;
            if cur.abs() > RESCALE_LIMIT {
                cur *= RESCALE;
                prev *= RESCALE;
                scale += 1;
            }
        }
        (self.sign * cur, scale)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (m, s) = self.eval_scaled(x);
        if s == 0 {
            m
        } else {
            m * RESCALE_LIMIT.powi(s)
        }
    }

    /// ln(p(x)²); −∞ exactly at a root.
    pub fn eval_ln_sq(&self, x: f64) -> f64 {
        let (m, s) = self.eval_scaled(x);
        if m == 0.0 {
            f64::NEG_INFINITY
        } else {
            2.0 * (m.abs().ln() + s as f64 * RESCALE_LN)
        }
    }

    /// (p(x), p′(x)) by the differentiated recurrence. Both sequences are
    /// rescaled jointly, which leaves the Newton ratio p/p′ intact even
    /// when the raw values leave f64 range (high-degree Laguerre near the
    /// top node).
    pub fn eval_with_derivative(&self, x: f64) -> (f64, f64) {
        let mut prev = 0.0f64;
        let mut cur = self.p0;
        let mut dprev = 0.0f64;
        let mut dcur = 0.0f64;
        for k in 0..self.degree {
            let next = ((x - self.a[k]) * cur - self.sqrt_b[k] * prev) / self.sqrt_b[k + 1];
            let dnext = ((x - self.a[k]) * dcur + cur - self.sqrt_b[k] * dprev) / self.sqrt_b[k + 1];
            prev = cur;
            cur = next;
            dprev = dcur;
            dcur = dnext;
            if cur.abs().max(dcur.abs()) > RESCALE_LIMIT {
                cur *= RESCALE;
                prev *= RESCALE;
                dcur *= RESCALE;
                dprev *= RESCALE;
            }
        }
        (self.sign * cur, self.sign * dcur)
    }

    /// Gauss weight at a node: 1/Σ_{j=0}^{n−1} p_j(x)², the Christoffel
    /// function of the first n orthonormal polynomials. At far-tail
    /// Laguerre nodes the sum exceeds f64 range and the weight flushes to
    /// zero, which is also its nearest representable value.
    pub(crate) fn gauss_weight(&self, x: f64, n: usize) -> f64 {
        // squares are accumulated, so the rescale threshold must keep
        // cur² inside f64 range
        const LIMIT: f64 = 1e150;
        const SCALE: f64 = 1e-150;
        let mut prev = 0.0f64;
        let mut cur = self.p0;
        let mut sum = cur * cur;
        let mut level: i32 = 0;
        for k in 0..n.saturating_sub(1) {
            let next = ((x - self.a[k]) * cur - self.sqrt_b[k] * prev) / self.sqrt_b[k + 1];
            prev = cur;
            cur = next;
            if cur.abs() > LIMIT {
                cur *= SCALE;
                prev *= SCALE;
                sum *= SCALE * SCALE;
                level += 1;
            }
            sum += cur * cur;
        }
        let mut w = 1.0 / sum;
        for _ in 0..level {
            w *= SCALE;
            w *= SCALE;
        }
        w
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method
/// (EISPACK tql1 lineage), ascending.
pub(crate) fn symtri_eigenvalues(
    mut d: Vec<f64>,
    off: Vec<f64>,
) -> Result<Vec<f64>, SpecFunError> {
    let n = d.len();
    if n == 0 {
        return Ok(d);
    }
    debug_assert_eq!(off.len(), n - 1);
    let mut e = off;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(SpecFunError::EigenNoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0f64;
            let mut c = 1.0f64;
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                let t = (d[i] - g) * s + 2.0 * c * b;
                p = s * t;
                d[i + 1] = g + p;
                g = c * t - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laguerre(k: usize, alpha: f64) -> PolySpec {
        PolySpec::new(PolyFamily::Laguerre, k, alpha).unwrap()
    }

    fn gegenbauer(k: usize, lambda: f64) -> PolySpec {
        PolySpec::new(PolyFamily::Gegenbauer, k, lambda).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(PolySpec::new(PolyFamily::Laguerre, 3, -1.0).is_err());
        assert!(PolySpec::new(PolyFamily::Gegenbauer, 3, 0.0).is_err());
        assert!(PolySpec::new(PolyFamily::Gegenbauer, 3, f64::NAN).is_err());
        assert!(PolySpec::new(PolyFamily::Laguerre, 0, -0.5).is_ok());
    }

    #[test]
    fn constant_polynomials() {
        // c = 1/sqrt(Gamma(alpha+1)) = 1 for alpha = 1
        assert!((laguerre(0, 1.0).eval(3.7) - 1.0).abs() < 1e-15);
        // 1/sqrt(pi/2) = sqrt(2/pi)
        let c = gegenbauer(0, 1.0).eval(-0.2);
        assert!((c - 0.797_884_560_802_865_4).abs() < 1e-15);
    }

    #[test]
    fn classical_signs() {
        // orthonormal L_1^0(x) = 1 - x
        let p = laguerre(1, 0.0);
        assert!((p.eval(0.0) - 1.0).abs() < 1e-15);
        assert!((p.eval(3.0) + 2.0).abs() < 1e-14);
        // Gegenbauer keeps a positive leading coefficient
        assert!(gegenbauer(3, 1.5).eval(0.9) > 0.0);
    }

    #[test]
    fn monic_coefficient_anchors() {
        let lag = recurrence_coeffs(PolyFamily::Laguerre, 0.0, 6).unwrap();
        for (k, &(a, b)) in lag.iter().enumerate() {
            assert!((a - (2 * k + 1) as f64).abs() < 1e-15);
            if k >= 1 {
                assert!((b - (k * k) as f64).abs() < 1e-13);
            }
        }
        assert!((lag[0].1 - 1.0).abs() < 1e-15); // b_0 = Gamma(1)

        let cheb = recurrence_coeffs(PolyFamily::Gegenbauer, 1.0, 6).unwrap();
        for (k, &(a, b)) in cheb.iter().enumerate() {
            assert_eq!(a, 0.0);
            if k >= 1 {
                assert!((b - 0.25).abs() < 1e-15, "k={k}");
            }
        }

        let leg = recurrence_coeffs(PolyFamily::Gegenbauer, 0.5, 3).unwrap();
        assert!((leg[1].1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((leg[0].1 - 2.0).abs() < 1e-15); // b_0 = zeroth moment
    }

    #[test]
    fn root_anchors() {
        let r = laguerre(1, 0.0).roots().unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-14);

        for lam in [0.5, 1.0, 2.5, 7.0] {
            let r = gegenbauer(1, lam).roots().unwrap();
            assert!(r[0].abs() < 1e-14, "lambda={lam}");
        }

        // C_2^1(x) = 4x^2 - 1
        let r = gegenbauer(2, 1.0).roots().unwrap();
        assert!((r[0] + 0.5).abs() < 1e-14);
        assert!((r[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn root_residuals_and_support() {
        for (spec, lo, hi) in [
            (laguerre(12, 2.5), 0.0, f64::INFINITY),
            (laguerre(20, 0.0), 0.0, f64::INFINITY),
            (gegenbauer(15, 0.5), -1.0, 1.0),
            (gegenbauer(9, 4.5), -1.0, 1.0),
        ] {
            let roots = spec.roots().unwrap();
            assert_eq!(roots.len(), spec.degree());
            let ev = PolyEvaluator::new(spec);
            for w in roots.windows(2) {
                assert!(w[0] < w[1], "roots not strictly increasing");
            }
            for &r in &roots {
                assert!(r > lo && r < hi, "root {r} outside support");
                let (p, dp) = ev.eval_with_derivative(r);
                // residual measured against the local scale of the polynomial
                assert!(p.abs() <= 1e-12 * (1.0 + dp.abs() * r.abs().max(1.0)));
            }
        }
    }

    #[test]
    fn root_interlacing() {
        for spec_k in [
            |k| laguerre(k, 0.5),
            |k| laguerre(k, 3.0),
            |k| gegenbauer(k, 0.5),
            |k| gegenbauer(k, 2.0),
        ] {
            for k in 1..12usize {
                let lo = spec_k(k).roots().unwrap();
                let hi = spec_k(k + 1).roots().unwrap();
                for i in 0..k {
                    assert!(
                        hi[i] < lo[i] && lo[i] < hi[i + 1],
                        "interlacing failed at k={k}, i={i}"
                    );
                }
            }
        }
    }

    #[test]
    fn scaled_recurrence_far_tail() {
        // far outside the bulk the raw values overflow; ln(p^2) must not
        let ev = PolyEvaluator::new(laguerre(80, 0.0));
        let ln_sq = ev.eval_ln_sq(1e8);
        assert!(ln_sq.is_finite());
        // leading behaviour ~ (k ln x - ln k!)*2
        let expected = 2.0 * (80.0 * (1e8f64).ln() - ln_gamma_unchecked(81.0));
        assert!((ln_sq - expected).abs() / expected < 1e-3);
    }

    #[test]
    fn ln_sq_is_neg_infinity_at_roots() {
        let spec = gegenbauer(2, 1.0);
        let ev = PolyEvaluator::new(spec);
        assert_eq!(ev.eval_ln_sq(0.5), f64::NEG_INFINITY);
    }
}
