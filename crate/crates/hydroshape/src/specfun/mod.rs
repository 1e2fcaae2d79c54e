//! Gamma-family special functions and orthonormal classical polynomials.

mod gamma;
mod poly;

pub use gamma::{digamma, ln_gamma};
pub use poly::{recurrence_coeffs, weight_zeroth_moment, PolyEvaluator, PolyFamily, PolySpec};

pub(crate) use gamma::{digamma_unchecked, ln_gamma_unchecked};
pub(crate) use poly::symtri_eigenvalues;

/// Errors from the special-function layer.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpecFunError {
    #[error("argument `{name}` must be positive, got {value}")]
    NonPositiveArgument { name: &'static str, value: f64 },
    #[error("invalid parameter {param} for {family:?} (Laguerre needs α > −1, Gegenbauer λ > 0)")]
    InvalidPolyParam { family: PolyFamily, param: f64 },
    #[error("recurrence length must be at least 1")]
    EmptyRecurrence,
    #[error("tridiagonal eigenvalue iteration did not converge")]
    EigenNoConvergence,
}
