//! Adaptive and oscillatory quadrature, Mellin-Barnes line integrals and the
//! executable derivative tests for exponential integrals.

pub mod bump;
mod gk;
mod mellin;
mod oscillatory;

pub use bump::{bump, bump_deriv, bump_on, inert_ratios, BUMP_TOTAL_VARIATION};
pub use gk::{integrate_adaptive, integrate_adaptive_with, integrate_panels, integrate_panels_noisy, integrate_real, kronrod_nodes, QuadratureResult, DEFAULT_MAX_PANELS};
pub use mellin::{integrate_split, mellin_barnes, mellin_barnes_window};
pub use oscillatory::{
    first_derivative_bound, integrate_oscillatory, locate_stationary_points, phase_noise, second_derivative_bound,
    stationary_phase_main_term, ComplexFn, OscillatoryIntegral, RealFn, Scales,
};
pub mod suites;
