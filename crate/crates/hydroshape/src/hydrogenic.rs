//! Quantum-state bookkeeping and the position/momentum wavefunctions and
//! probability densities of the D-dimensional hydrogenic system.
//!
//! Atomic units throughout. A state is labelled by the dimension D ≥ 2, the
//! principal quantum number n ≥ 1, and the hyperangular tower
//! μ₁ ≥ μ₂ ≥ … ≥ |μ_{D−1}|, with l ≡ μ₁ and m ≡ μ_{D−1}. Derived
//! quantities: η = n + (D−3)/2, the grand orbital momentum
//! L = l + (D−3)/2, and the length scale λ = η/(2Z).

use serde::Serialize;

use crate::specfun::{PolyEvaluator, PolyFamily, PolySpec, SpecFunError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StateError {
    #[error("dimension must satisfy D ≥ 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("principal quantum number must satisfy n ≥ 1")]
    PrincipalTooSmall,
    #[error("hyperangular tower must have D−1 = {expected} entries, got {got}")]
    TowerLength { expected: usize, got: usize },
    #[error("tower violates μ{i} ≥ μ{j}: {a} < {b}", j = i + 1)]
    TowerOrder { i: usize, a: i32, b: i32 },
    #[error("tower violates μ{i} ≥ |μ{j}| (|m|): {a} < |{b}|", j = i + 1)]
    TowerModulus { i: usize, a: i32, b: i32 },
    #[error("tower violates μ{i} ≥ 0: got {a}")]
    TowerNegative { i: usize, a: i32 },
    #[error("angular momentum exceeds n − 1: l = {l} with n = {n}")]
    AngularExceedsPrincipal { l: i32, n: u32 },
    #[error("nuclear charge Z must be positive, got {0}")]
    NonPositiveCharge(f64),
    #[error("{name} must be nonnegative, got {value}")]
    NegativeCoordinate { name: &'static str, value: f64 },
    #[error("expected {expected} angles (θ₁..θ_(D−2), φ), got {got}")]
    AngleCount { expected: usize, got: usize },
    #[error("angle {name} = {value} outside its range")]
    AngleRange { name: &'static str, value: f64 },
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
}

/// One factor of the hyperspherical harmonic: an orthonormal Gegenbauer
/// polynomial of `degree` and parameter `lambda` in cos θ_j, times
/// (sin θ_j)^{sin_power}, integrated against (sin θ_j)^{measure_power} dθ_j.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngularFactor {
    pub degree: usize,
    pub lambda: f64,
    pub sin_power: i32,
    pub measure_power: i32,
}

/// A bound state of the D-dimensional hydrogenic system.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantumState {
    d: usize,
    n: u32,
    mu: Vec<i32>,
}

impl QuantumState {
    pub fn new(d: usize, n: u32, mu: Vec<i32>) -> Result<Self, StateError> {
        if d < 2 {
            return Err(StateError::DimensionTooSmall(d));
        }
        if n < 1 {
            return Err(StateError::PrincipalTooSmall);
        }
        if mu.len() != d - 1 {
            return Err(StateError::TowerLength { expected: d - 1, got: mu.len() });
        }
        // μ₁ ≥ μ₂ ≥ … ≥ μ_{D−2} ≥ |μ_{D−1}| ≥ 0; for D = 2 the single
        // entry is m itself and may be negative.
        if d >= 3 {
            for i in 0..d - 3 {
                if mu[i] < 0 {
                    return Err(StateError::TowerNegative { i: i + 1, a: mu[i] });
                }
                if mu[i] < mu[i + 1] {
                    return Err(StateError::TowerOrder { i: i + 1, a: mu[i], b: mu[i + 1] });
                }
            }
            let penult = mu[d - 3];
            if penult < 0 {
                return Err(StateError::TowerNegative { i: d - 2, a: penult });
            }
            let last = mu[d - 2];
            if penult < last.abs() {
                return Err(StateError::TowerModulus { i: d - 2, a: penult, b: last });
            }
        }
        let l = if d == 2 { mu[0].abs() } else { mu[0] };
        if l as u32 > n - 1 {
            return Err(StateError::AngularExceedsPrincipal { l, n });
        }
        Ok(Self { d, n, mu })
    }

    /// n = 1 with every μ zero.
    pub fn ground(d: usize) -> Result<Self, StateError> {
        if d < 2 {
            return Err(StateError::DimensionTooSmall(d));
        }
        Self::new(d, 1, vec![0; d - 1])
    }

    /// μᵢ = n − 1 for every i: the state of maximal hyperangular momenta.
    pub fn circular(d: usize, n: u32) -> Result<Self, StateError> {
        if d < 2 {
            return Err(StateError::DimensionTooSmall(d));
        }
        if n < 1 {
            return Err(StateError::PrincipalTooSmall);
        }
        Self::new(d, n, vec![n as i32 - 1; d - 1])
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn principal(&self) -> u32 {
        self.n
    }

    pub fn tower(&self) -> &[i32] {
        &self.mu
    }

    /// l ≡ μ₁ (for D = 2, |m|).
    pub fn l(&self) -> u32 {
        if self.d == 2 { self.mu[0].unsigned_abs() } else { self.mu[0] as u32 }
    }

    /// m ≡ μ_{D−1}, the only signed quantum number.
    pub fn m(&self) -> i32 {
        self.mu[self.d - 2]
    }

    /// η = n + (D−3)/2.
    pub fn eta(&self) -> f64 {
        self.n as f64 + (self.d as f64 - 3.0) / 2.0
    }

    /// Grand orbital momentum L = l + (D−3)/2.
    pub fn grand_l(&self) -> f64 {
        self.l() as f64 + (self.d as f64 - 3.0) / 2.0
    }

    /// Degree of the radial polynomials: η − L − 1 = n − l − 1.
    pub fn radial_degree(&self) -> usize {
        (self.n - 1 - self.l()) as usize
    }

    /// λ = η/(2Z), the radial length scale.
    pub fn orbital_scale(&self, z: f64) -> Result<f64, StateError> {
        check_charge(z)?;
        Ok(self.eta() / (2.0 * z))
    }

    pub fn is_ground(&self) -> bool {
        self.n == 1 && self.mu.iter().all(|&m| m == 0)
    }

    pub fn is_circular(&self) -> bool {
        let top = self.n as i32 - 1;
        let body = self.mu[..self.d - 2].iter().all(|&m| m == top);
        body && self.mu[self.d - 2].abs() == top
    }

    /// E = −Z²/(2η²).
    pub fn energy(&self, z: f64) -> Result<f64, StateError> {
        check_charge(z)?;
        let eta = self.eta();
        Ok(-z * z / (2.0 * eta * eta))
    }

    /// The angular factors of the hyperspherical harmonic, j = 1..D−2.
    ///
    /// |Y|² depends on |m| only, so the last tower entry enters through its
    /// modulus. Empty for D = 2, where Y = e^{imφ}/√(2π).
    pub fn angular_factors(&self) -> Vec<AngularFactor> {
        let d = self.d;
        if d == 2 {
            return Vec::new();
        }
        let mut tow: Vec<i32> = self.mu.clone();
        let last = tow.len() - 1;
        tow[last] = tow[last].abs();
        (1..=d - 2)
            .map(|j| {
                let mu_j = tow[j - 1];
                let mu_j1 = tow[j];
                AngularFactor {
                    degree: (mu_j - mu_j1) as usize,
                    lambda: (d - j - 1) as f64 / 2.0 + mu_j1 as f64,
                    sin_power: mu_j1,
                    measure_power: (d - 1 - j) as i32,
                }
            })
            .collect()
    }

    pub(crate) fn radial_laguerre(&self) -> PolySpec {
        PolySpec::new(PolyFamily::Laguerre, self.radial_degree(), 2.0 * self.grand_l() + 1.0)
            .expect("2L+1 = 2l+D−2 ≥ 0 for a valid state")
    }

    pub(crate) fn momentum_gegenbauer(&self) -> PolySpec {
        PolySpec::new(PolyFamily::Gegenbauer, self.radial_degree(), self.grand_l() + 1.0)
            .expect("L+1 = l+(D−1)/2 ≥ 1/2 for a valid state")
    }

    /// Radial position wavefunction R_{n,l}(r), normalized so that
    /// ∫ R² r^{D−1} dr = 1.
    ///
    /// The weight quotient [ω_{2L+1}(x)/x^{D−2}]^{1/2} is evaluated through
    /// the explicit power law x^l e^{−x/2}, which is regular at the origin.
    pub fn radial_position(&self, z: f64, r: f64) -> Result<f64, StateError> {
        if r.is_nan() || r < 0.0 {
            return Err(StateError::NegativeCoordinate { name: "r", value: r });
        }
        let ev = PolyEvaluator::new(self.radial_laguerre());
        self.radial_position_with(&ev, z, r)
    }

    pub(crate) fn radial_position_with(
        &self,
        ev: &PolyEvaluator,
        z: f64,
        r: f64,
    ) -> Result<f64, StateError> {
        check_charge(z)?;
        let lambda = self.eta() / (2.0 * z);
        let x = r / lambda;
        let pref = (lambda.powi(-(self.d as i32)) / (2.0 * self.eta())).sqrt();
        Ok(pref * x.powi(self.l() as i32) * (-0.5 * x).exp() * ev.eval(x))
    }

    /// Radial momentum wavefunction M_{n,l}(p), normalized so that
    /// ∫ M² p^{D−1} dp = 1.
    pub fn radial_momentum(&self, z: f64, p: f64) -> Result<f64, StateError> {
        if p.is_nan() || p < 0.0 {
            return Err(StateError::NegativeCoordinate { name: "p", value: p });
        }
        let ev = PolyEvaluator::new(self.momentum_gegenbauer());
        self.radial_momentum_with(&ev, z, p)
    }

    pub(crate) fn radial_momentum_with(
        &self,
        ev: &PolyEvaluator,
        z: f64,
        p: f64,
    ) -> Result<f64, StateError> {
        check_charge(z)?;
        let grand_l = self.grand_l();
        let u = self.eta() * p / z;
        let u2 = u * u;
        let y = (1.0 - u2) / (1.0 + u2);
        let pref = 2f64.powf(grand_l + 2.0) * (self.eta() / z).powf(self.d as f64 / 2.0);
        Ok(pref * u.powi(self.l() as i32) * (1.0 + u2).powf(-(grand_l + 2.0)) * ev.eval(y))
    }

    /// M_{n,l}(p) through the equivalent y-substituted form,
    /// y = (1−η²p̃²)/(1+η²p̃²). Agrees with `radial_momentum` pointwise for
    /// p > 0 (at p = 0 this form is an indeterminate product for D > 2).
    pub fn radial_momentum_y_form(&self, z: f64, p: f64) -> Result<f64, StateError> {
        if p.is_nan() || p < 0.0 {
            return Err(StateError::NegativeCoordinate { name: "p", value: p });
        }
        check_charge(z)?;
        let grand_l = self.grand_l();
        let u = self.eta() * p / z;
        let u2 = u * u;
        let y = (1.0 - u2) / (1.0 + u2);
        // 1±y evaluated from u² directly; forming them from y loses half
        // the digits near the endpoints
        let one_plus_y = 2.0 / (1.0 + u2);
        let one_minus_y = 2.0 * u2 / (1.0 + u2);
        let ev = PolyEvaluator::new(self.momentum_gegenbauer());
        let omega_half = (one_plus_y * one_minus_y).powf(0.5 * (grand_l + 0.5));
        Ok((self.eta() / z).powf(self.d as f64 / 2.0)
            * one_plus_y.powf(1.5)
            * (one_plus_y / one_minus_y).powf((self.d as f64 - 2.0) / 4.0)
            * omega_half
            * ev.eval(y))
    }

    /// |Y_{l,{μ}}(Ω)|² at angles (θ₁, …, θ_{D−2}, φ); independent of φ.
    pub fn hypersph_sq(&self, angles: &[f64]) -> Result<f64, StateError> {
        if angles.len() != self.d - 1 {
            return Err(StateError::AngleCount { expected: self.d - 1, got: angles.len() });
        }
        let phi = angles[self.d - 2];
        if !(0.0..2.0 * std::f64::consts::PI).contains(&phi) {
            return Err(StateError::AngleRange { name: "φ", value: phi });
        }
        let mut value = 1.0 / (2.0 * std::f64::consts::PI);
        for (j, factor) in self.angular_factors().iter().enumerate() {
            let theta = angles[j];
            if !(0.0..=std::f64::consts::PI).contains(&theta) {
                return Err(StateError::AngleRange { name: "θ", value: theta });
            }
            let spec = PolySpec::new(PolyFamily::Gegenbauer, factor.degree, factor.lambda)?;
            let c = spec.eval(theta.cos());
            value *= c * c * theta.sin().powi(2 * factor.sin_power);
        }
        Ok(value)
    }

    /// ρ(r, Ω) = R²|Y|², the product of the squared factors.
    pub fn density_position(&self, z: f64, r: f64, angles: &[f64]) -> Result<f64, StateError> {
        let radial = self.radial_position(z, r)?;
        Ok(radial * radial * self.hypersph_sq(angles)?)
    }

    /// γ(p, Ω) = M²|Y|².
    pub fn density_momentum(&self, z: f64, p: f64, angles: &[f64]) -> Result<f64, StateError> {
        let radial = self.radial_momentum(z, p)?;
        Ok(radial * radial * self.hypersph_sq(angles)?)
    }
}

pub(crate) fn check_charge(z: f64) -> Result<(), StateError> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(StateError::NonPositiveCharge(z))
    }
}

/// Surface area of the unit (D−1)-sphere, 2π^{D/2}/Γ(D/2).
pub fn hypersphere_surface(d: usize) -> f64 {
    let df = d as f64;
    (2f64.ln() + df / 2.0 * std::f64::consts::PI.ln()
        - crate::specfun::ln_gamma(df / 2.0).expect("d ≥ 1"))
    .exp()
}
