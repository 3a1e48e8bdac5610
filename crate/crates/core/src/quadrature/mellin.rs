//! Vertical-line (Mellin-Barnes) integrals with the 1/(4 pi^2 i) normalization.

use super::gk::{integrate_panels, QuadratureResult, DEFAULT_MAX_PANELS};
use crate::{ComplexValue, NumError, Result};
use std::f64::consts::PI;

/// Splits [a, b] into `pieces` equal panels and integrates each adaptively.
pub fn integrate_split<F: Fn(f64) -> ComplexValue + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    pieces: usize,
) -> Result<QuadratureResult> {
    let n = pieces.max(1);
    let h = (b - a) / n as f64;
    let panels: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let lo = a + h * k as f64;
            (lo, if k + 1 == n { b } else { lo + h })
        })
        .collect();
    integrate_panels(f, &panels, tol, DEFAULT_MAX_PANELS.max(4 * n))
}

/// (1/(4 pi^2 i)) * integral over s = sigma + i tau, |tau| <= tau_cut.
pub fn mellin_barnes(
    integrand: &(dyn Fn(ComplexValue) -> ComplexValue + Sync),
    sigma: f64,
    tau_cut: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(tau_cut > 0.0) {
        return Err(NumError::Domain("tau_cut must be positive".into()));
    }
    let f = |t: f64| integrand(ComplexValue::new(sigma, t));
    let samples = 513;
    let mut peak: f64 = 0.0;
    for k in 0..samples {
        let t = -tau_cut + 2.0 * tau_cut * k as f64 / (samples - 1) as f64;
        peak = peak.max(f(t).norm());
    }
    let edge = f(tau_cut).norm().max(f(-tau_cut).norm());
    if edge > tol * peak {
        return Err(NumError::Budget(format!(
            "contour truncation dominates: edge {edge:e} vs peak {peak:e}"
        )));
    }
    let pieces = (tau_cut.ceil() as usize).clamp(8, 4096);
    // ds = i dtau, so (1/(4 pi^2 i)) i dtau = dtau / (4 pi^2)
    let r = integrate_split(&f, -tau_cut, tau_cut, tol * peak.max(1e-300), pieces)?;
    Ok(r.scaled(ComplexValue::new(1.0 / (4.0 * PI * PI), 0.0)))
}

/// As [`mellin_barnes`] over the segment sigma + i[lo, hi], for integrands
/// concentrated away from tau = 0. Edge negligibility and the quadrature
/// tolerance are relative to max(sampled peak, `scale`), so a caller
/// integrating several components over one window can share a scale.
pub fn mellin_barnes_window(
    integrand: &(dyn Fn(ComplexValue) -> ComplexValue + Sync),
    sigma: f64,
    lo: f64,
    hi: f64,
    tol: f64,
    scale: f64,
) -> Result<QuadratureResult> {
    if !(lo < hi) {
        return Err(NumError::Domain(format!("window [{lo}, {hi}]")));
    }
    let f = |t: f64| integrand(ComplexValue::new(sigma, t));
    let samples = 1025;
    let mut peak: f64 = scale.max(0.0);
    for k in 0..samples {
        peak = peak.max(f(lo + (hi - lo) * k as f64 / (samples - 1) as f64).norm());
    }
    let edge = f(lo).norm().max(f(hi).norm());
    if edge > tol * peak {
        return Err(NumError::Budget(format!("window edge {edge:e} vs peak {peak:e}")));
    }
    let pieces = ((hi - lo) / 2.0).ceil().clamp(8.0, 8192.0) as usize;
    let r = integrate_split(&f, lo, hi, tol * peak.max(1e-300), pieces)?;
    Ok(r.scaled(ComplexValue::new(1.0 / (4.0 * PI * PI), 0.0)))
}
