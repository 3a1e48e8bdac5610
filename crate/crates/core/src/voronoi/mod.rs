//! GL(2) Voronoi summation: Bessel transforms, their expansions, the
//! Mellin-Barnes form Psi and a certified two-sided identity check.

mod identity;
pub mod jet;
mod phi;
mod psi;
mod tail;
mod testfn;

pub use phi::{phi_asymptotic, phi_holomorphic, phi_maass, AsymptoticCoefficients, DualKernel, PHI_TOL, TRAPEZOID_GUARD};
pub use testfn::{VoronoiTestFunction, SUPPORT_WINDOW};
pub use identity::{voronoi_dual_sum, voronoi_lhs, voronoi_verify, VoronoiCheck, DEFAULT_TAIL_TOL};
pub use tail::{TailCertificate, LANDAU};
pub use psi::{
    expand_stationary_point, main_log_phase, matched_nx, phi_sigma, psi_desk_points, psi_asymptotic, psi_mellin, psi_regime_classify, v_natural, varrho0,
    varrho0_second, PhaseExpansion, PsiDesk, PsiPair, PsiParams, Regime, DESK_ORDER, REGIME_FACTOR, TAU_CENTRE,
};
