//! Quadrature-free closed forms for ground and circular states: the third
//! route, built entirely from ln Γ and ψ in log space.

use crate::hydrogenic::{check_charge, StateError};
use crate::measures::{ComplexityReport, MeasureError, MeasureResult, Method};
use crate::specfun::{digamma_unchecked as psi, ln_gamma_unchecked as lng};

const LN_2: f64 = std::f64::consts::LN_2;
const LN_PI: f64 = 1.144_729_885_849_400_2;

fn res(value: f64) -> MeasureResult {
    MeasureResult::new(value, 1e-15 * (1.0 + value.abs()), Method::ClosedForm)
}

fn report(
    ln_dis_pos: f64,
    s_pos: f64,
    c_pos: f64,
    ln_dis_mom: f64,
    s_mom: f64,
    c_mom: f64,
) -> ComplexityReport {
    let product = c_pos * c_mom;
    ComplexityReport {
        disequilibrium_pos: res(ln_dis_pos.exp()),
        shannon_pos: res(s_pos),
        complexity_pos: res(c_pos),
        disequilibrium_mom: res(ln_dis_mom.exp()),
        shannon_mom: res(s_mom),
        complexity_mom: res(c_mom),
        product: res(product),
    }
}

/// All six measures of the ground state (n = 1, every μ = 0).
pub fn ground_report(d: usize, z: f64) -> Result<ComplexityReport, MeasureError> {
    if d < 2 {
        return Err(StateError::DimensionTooSmall(d).into());
    }
    check_charge(z)?;
    let df = d as f64;
    let ln_z = z.ln();
    let ln_dm1 = (df - 1.0).ln();

    let ln_dis_pos = df * ln_z - df * ln_dm1 - (df - 1.0) / 2.0 * LN_PI - lng((df + 1.0) / 2.0);
    let s_pos =
        df * ln_dm1 - df * LN_2 + (df - 1.0) / 2.0 * LN_PI + lng((df + 1.0) / 2.0) + df - df * ln_z;
    let c_pos = (std::f64::consts::E / 2.0).powi(d as i32);

    let ln_dis_mom = df * (LN_2 + ln_dm1 - ln_z) - (df + 2.0) / 2.0 * LN_PI
        + 2.0 * lng((df + 1.0) / 2.0)
        + lng(2.0 + 1.5 * df)
        - lng(2.0 * df + 2.0);
    let psi_gap = psi(df + 1.0) - psi(df / 2.0 + 1.0);
    let s_mom = (df + 1.0) / 2.0 * LN_PI - df * ln_dm1 - lng((df + 1.0) / 2.0)
        + (df + 1.0) * psi_gap
        + df * ln_z;
    let c_mom = (df * LN_2 + lng((df + 1.0) / 2.0) + lng(2.0 + 1.5 * df)
        - 0.5 * LN_PI
        - lng(2.0 * df + 2.0)
        + (df + 1.0) * psi_gap)
        .exp();

    Ok(report(ln_dis_pos, s_pos, c_pos, ln_dis_mom, s_mom, c_mom))
}

/// The constant A(n,D) in the circular momentum entropy.
fn circular_momentum_entropy_const(n: u32, d: usize) -> f64 {
    let nf = n as f64;
    let df = d as f64;
    (2.0 * nf + df - 1.0) / (2.0 * nf + df - 3.0) - (df + 1.0) / (2.0 * nf + df - 2.0)
        - (nf - 1.0) * psi(nf)
        - (df + 1.0) / 2.0 * psi(nf + (df - 2.0) / 2.0)
        + (nf + (df - 1.0) / 2.0) * psi(nf + (df - 3.0) / 2.0)
}

/// All six measures of the circular state (μᵢ = n − 1 for all i).
///
/// For n = 1 these expressions collapse onto the ground-state ones through
/// the digamma recurrence and duplication identities.
pub fn circular_report(d: usize, n: u32, z: f64) -> Result<ComplexityReport, MeasureError> {
    if d < 2 {
        return Err(StateError::DimensionTooSmall(d).into());
    }
    if n < 1 {
        return Err(StateError::PrincipalTooSmall.into());
    }
    check_charge(z)?;
    let df = d as f64;
    let nf = n as f64;
    let ln_z = z.ln();
    let ln_scale = (2.0 * nf + df - 3.0).ln();
    let psi_pair = psi(nf) + psi(nf + (df - 1.0) / 2.0);

    let ln_dis_pos = df * ln_z + lng(nf - 0.5) + lng(2.0 * nf + (df - 3.0) / 2.0)
        - (2.0 * nf - 2.0) * LN_2
        - df / 2.0 * LN_PI
        - df * ln_scale
        - lng(nf)
        - 2.0 * lng(nf + (df - 1.0) / 2.0);
    // the pi exponent here is (D−1)/2; with the (D+1)/2 variant the
    // entropy exceeds the direct quadrature value by exactly ln pi and the
    // n = 1 reduction fails
    let s_pos = 2.0 * nf + df - 2.0 - (nf - 1.0) * psi_pair - df * LN_2
        + df * ln_scale
        + (df - 1.0) / 2.0 * LN_PI
        + lng(nf)
        + lng(nf + (df - 1.0) / 2.0)
        - df * ln_z;
    let c_pos = (lng(nf - 0.5) + lng(2.0 * nf + (df - 3.0) / 2.0)
        - (2.0 * nf + df - 2.0) * LN_2
        - 0.5 * LN_PI
        - lng(nf + (df - 1.0) / 2.0)
        + 2.0 * nf
        + df
        - 2.0
        - (nf - 1.0) * psi_pair)
        .exp();

    let ln_dis_mom = (4.0 * nf + df - 4.0) * LN_2 + df * ln_scale
        + 2.0 * lng(nf + (df - 1.0) / 2.0)
        + lng(2.0 * nf - 1.0)
        + lng(2.0 * nf + 1.5 * df)
        - df * ln_z
        - (df + 2.0) / 2.0 * LN_PI
        - 2.0 * lng(nf)
        - lng(4.0 * nf + 2.0 * df - 2.0);
    let a_nd = circular_momentum_entropy_const(n, d);
    let s_mom = a_nd
        + (df + 1.0) * LN_2
        + df * ln_z
        + (df + 1.0) / 2.0 * LN_PI
        + lng(nf)
        - df * ln_scale
        - lng(nf + (df - 1.0) / 2.0);
    let c_mom = ((4.0 * nf + 2.0 * df - 3.0) * LN_2 + lng(nf + (df - 1.0) / 2.0)
        + lng(2.0 * nf - 1.0)
        + lng(2.0 * nf + 1.5 * df)
        - 0.5 * LN_PI
        - lng(nf)
        - lng(4.0 * nf + 2.0 * df - 2.0)
        + a_nd)
        .exp();

    Ok(report(ln_dis_pos, s_pos, c_pos, ln_dis_mom, s_mom, c_mom))
}
