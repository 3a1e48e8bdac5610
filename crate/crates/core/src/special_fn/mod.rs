//! Complex gamma, Bessel J/K and zeta, plus the Stirling forms of the
//! Voronoi gamma factor.

pub mod bernoulli;
mod bessel;
pub mod dd;
mod gamma;
mod zeta;

pub use bessel::{
    bessel_combo_maass, bessel_j, bessel_j_deriv, bessel_j_modulated, bessel_k_imag_order_direct, hankel_coefficients,
    maass_plus_modulated, SERIES_LIMIT,
};
pub use gamma::{
    gamma, gamma_factor, gamma_factor_asymptotic, gamma_factor_display, gamma_factor_envelope, gamma_factor_phase, gamma_stirling,
    ln_gamma, ln_gamma_asymptotic, ln_gamma_stirling, stirling_coefficients, StirlingConfig, STIRLING_SWITCH,
    STIRLING_TERMS,
};
pub use zeta::{zeta_em, zeta_line};
