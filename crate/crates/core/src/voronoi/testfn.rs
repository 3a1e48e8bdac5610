//! The smooth weight h on the Voronoi side.

use super::jet::{bump_jet, Jet};
use crate::quadrature::{bump_on, inert_ratios};
use crate::{NumError, Result};

/// Admissible support window, after scaling by N.
pub const SUPPORT_WINDOW: (f64, f64) = (0.5, 2.5);

/// h(y) = amplitude * (canonical bump on (lo, hi)), applied as h(n/N).
#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiTestFunction {
    pub lo: f64,
    pub hi: f64,
    pub amplitude: f64,
    /// The scale N.
    pub n_scale: f64,
    pub description: String,
}

impl VoronoiTestFunction {
    pub fn new(lo: f64, hi: f64, amplitude: f64, n_scale: f64, description: &str) -> Result<Self> {
        let (wa, wb) = SUPPORT_WINDOW;
        if !(wa <= lo && lo < hi && hi <= wb) {
            return Err(NumError::Domain(format!("support [{lo}, {hi}] not inside [{wa}, {wb}]")));
        }
        if !(n_scale > 0.0 && n_scale.is_finite()) || !amplitude.is_finite() {
            return Err(NumError::Domain(format!("N = {n_scale}, amplitude = {amplitude}")));
        }
        Ok(VoronoiTestFunction { lo, hi, amplitude, n_scale, description: description.to_string() })
    }

    /// The canonical bump on the full window.
    pub fn canonical(n_scale: f64) -> Result<Self> {
        Self::new(SUPPORT_WINDOW.0, SUPPORT_WINDOW.1, 1.0, n_scale, "canonical bump on [1/2, 5/2]")
    }

    pub fn h(&self, y: f64) -> f64 {
        self.amplitude * bump_on(y, self.lo, self.hi)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn scaled(&self, c: f64) -> Self {
        VoronoiTestFunction {
            amplitude: self.amplitude * c,
            description: format!("{} x {c}", self.description),
            ..self.clone()
        }
    }

    /// Taylor jet of h at y, through order k.
    pub fn jet(&self, y: f64, k: usize) -> Jet {
        let mut j = bump_jet(y, self.lo, self.hi, k);
        j.0.iter_mut().for_each(|c| *c *= self.amplitude);
        j
    }

    /// Finite-difference derivative ratios through order 4 (bounded for a
    /// genuinely smooth weight).
    pub fn smoothness_ratios(&self) -> Vec<f64> {
        let f = |y: f64| bump_on(y, self.lo, self.hi);
        inert_ratios(&f, self.lo, self.hi, self.hi - self.lo, 4)
    }
}
