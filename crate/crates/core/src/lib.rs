//! Numerical toolkit for oscillatory integrals, GL(2) Voronoi summation,
//! the DFI delta method and Rankin-Selberg L-values, checked at desk scale.

pub mod arith;
pub mod error;
pub mod special_fn;
pub mod quadrature;
pub mod forms;
pub mod delta_method;
pub mod voronoi;
pub mod pipeline;
pub mod lfunction;
pub mod cli;

pub use error::{NumError, Result};
pub use num_complex::Complex64 as ComplexValue;

pub(crate) fn check_finite(z: ComplexValue, what: &'static str) -> Result<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(NumError::NonFinite(what))
    }
}
