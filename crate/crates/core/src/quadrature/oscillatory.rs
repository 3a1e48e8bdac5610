//! Oscillatory integrals: stationary points, frequency-scaled panels and the
//! first/second derivative tests.

use super::gk::{integrate_panels_noisy, QuadratureResult, DEFAULT_MAX_PANELS};
use crate::{ComplexValue, NumError, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::sync::Arc;

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type ComplexFn = Arc<dyn Fn(f64) -> ComplexValue + Send + Sync>;

/// Scale parameters (Q, U, Y, Z, R) of the first-derivative test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scales {
    pub q_len: f64,
    pub u: f64,
    pub y: f64,
    pub z: f64,
    pub r: f64,
}

impl Scales {
    pub fn new(q_len: f64, u: f64, y: f64, z: f64, r: f64) -> Self {
        Scales { q_len, u, y, z, r }
    }
}

/// The integral of amplitude(x) e^{i phase(x)} over [a, b].
#[derive(Clone)]
pub struct OscillatoryIntegral {
    pub amplitude: ComplexFn,
    pub phase: RealFn,
    pub dphase: RealFn,
    pub d2phase: RealFn,
    pub a: f64,
    pub b: f64,
    pub scales: Scales,
}

impl std::fmt::Debug for OscillatoryIntegral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OscillatoryIntegral")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("scales", &self.scales)
            .finish()
    }
}

impl OscillatoryIntegral {
    pub fn new(
        amplitude: ComplexFn,
        phase: RealFn,
        dphase: RealFn,
        d2phase: RealFn,
        support: (f64, f64),
        scales: Scales,
    ) -> Result<Self> {
        let (a, b) = support;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(NumError::Domain(format!("support [{a}, {b}] is not an interval")));
        }
        Ok(OscillatoryIntegral { amplitude, phase, dphase, d2phase, a, b, scales })
    }

    /// Real amplitude convenience constructor.
    pub fn real_amplitude(
        amplitude: impl Fn(f64) -> f64 + Send + Sync + 'static,
        phase: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dphase: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2phase: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support: (f64, f64),
        scales: Scales,
    ) -> Result<Self> {
        Self::new(
            Arc::new(move |x| ComplexValue::new(amplitude(x), 0.0)),
            Arc::new(phase),
            Arc::new(dphase),
            Arc::new(d2phase),
            support,
            scales,
        )
    }

    pub fn integrand(&self, x: f64) -> ComplexValue {
        (self.amplitude)(x) * ComplexValue::from_polar(1.0, (self.phase)(x))
    }

    /// Checks the derivative callables against central differences at ten
    /// seeded points.
    pub fn check_derivatives(&self, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = self.b - self.a;
        let h = w * 1e-5;
        for _ in 0..10 {
            let x = self.a + h + (w - 2.0 * h) * rng.gen::<f64>();
            let p = |x: f64| (self.phase)(x);
            let d = |x: f64| (self.dphase)(x);
            let fd1 = (p(x + h) - p(x - h)) / (2.0 * h);
            let fd2 = (d(x + h) - d(x - h)) / (2.0 * h);
            let s1 = d(x).abs().max(p(x).abs() / w).max(1.0);
            let s2 = (self.d2phase)(x).abs().max(d(x).abs() / w).max(1.0);
            if (fd1 - d(x)).abs() > 1e-6 * s1 || (fd2 - (self.d2phase)(x)).abs() > 1e-6 * s2 {
                return Err(NumError::Domain(format!("phase derivatives inconsistent at x={x}")));
            }
        }
        Ok(())
    }
}

const GRID: usize = 4096;

fn bisect_root(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Simple roots of the phase derivative in the support, in increasing order.
pub fn locate_stationary_points(i: &OscillatoryIntegral) -> Result<Vec<f64>> {
    let d = |x: f64| (i.dphase)(x);
    let step = (i.b - i.a) / GRID as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut x0 = i.a;
    let mut f0 = d(x0);
    if f0 == 0.0 {
        roots.push(x0);
    }
    for k in 1..=GRID {
        let x1 = if k == GRID { i.b } else { i.a + step * k as f64 };
        let f1 = d(x1);
        if !f1.is_finite() {
            return Err(NumError::NonFinite("phase derivative"));
        }
        if f1 == 0.0 {
            roots.push(x1);
        } else if f0 != 0.0 && (f0 > 0.0) != (f1 > 0.0) {
            roots.push(bisect_root(&d, x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    for w in roots.windows(2) {
        if w[1] - w[0] < 1.5 * step {
            return Err(NumError::Domain(format!(
                "unresolved stationary-point cluster near {} and {}",
                w[0], w[1]
            )));
        }
    }
    Ok(roots)
}

/// Panels [x_k, x_{k+1}] from `from` towards `to`, each spanning about two
/// local oscillations.
fn frequency_panels(i: &OscillatoryIntegral, from: f64, to: f64) -> Vec<(f64, f64)> {
    let hmax = (i.b - i.a) / 8.0;
    let dir = if to > from { 1.0 } else { -1.0 };
    let mut out = Vec::new();
    let mut x = from;
    while (to - x) * dir > 0.0 {
        let w = (i.dphase)(x).abs();
        let mut h = if w > 0.0 { (4.0 * PI / w).min(hmax) } else { hmax };
        let floor = (i.b - i.a) * 1e-9;
        // shrink until the far end of the step also sees about two oscillations
        while h > floor && h * (i.dphase)(x + dir * h).abs() > 6.0 * PI {
            h *= 0.5;
        }
        h = h.max(floor);
        let next = if (to - x) * dir <= h * 1.05 { to } else { x + dir * h };
        out.push((x.min(next), x.max(next)));
        x = next;
    }
    out
}

/// Relative evaluation noise of e^{i phase}: eps times the largest |phase|
/// and the largest phase increment across the support.
pub fn phase_noise(i: &OscillatoryIntegral) -> f64 {
    let mut m: f64 = 1.0;
    for k in 0..=64 {
        let x = i.a + (i.b - i.a) * k as f64 / 64.0;
        m = m.max((i.phase)(x).abs()).max((i.dphase)(x).abs() * x.abs().max(i.b - i.a));
    }
    f64::EPSILON * m
}

/// Adaptive integration with stationary-point splitting and panels sized to
/// the local frequency of the phase.
pub fn integrate_oscillatory(i: &OscillatoryIntegral, tol: f64) -> Result<QuadratureResult> {
    let roots = locate_stationary_points(i)?;
    let y = if i.scales.y > 0.0 { i.scales.y } else { 1.0 };
    let radius = 4.0 * (tol / y).sqrt();
    // breakpoints: stationary windows, then frequency-scaled panels outward
    let mut panels: Vec<(f64, f64)> = Vec::new();
    let mut cursor = i.a;
    for &y0 in &roots {
        let lo = (y0 - radius).max(cursor);
        let hi = (y0 + radius).min(i.b);
        if lo > cursor {
            // walk away from the stationary point towards the previous breakpoint
            let mut left = frequency_panels(i, lo, cursor);
            left.reverse();
            panels.extend(left);
        }
        if hi > lo {
            panels.push((lo, hi));
        }
        cursor = hi;
    }
    if cursor < i.b {
        panels.extend(frequency_panels(i, cursor, i.b));
    }
    let f = |x: f64| i.integrand(x);
    let budget = DEFAULT_MAX_PANELS.max(4 * panels.len());
    integrate_panels_noisy(&f, &panels, tol, budget, phase_noise(i))
}

/// (b-a) Z (Y/(R^2 Q^2) + 1/(RQ) + 1/(RU))^A.
pub fn first_derivative_bound(i: &OscillatoryIntegral, a_exp: f64) -> Result<f64> {
    let s = i.scales;
    if !(s.r > 0.0) || a_exp < 0.0 {
        return Err(NumError::Domain("first-derivative bound needs R > 0 and A >= 0".into()));
    }
    let base = s.y / (s.r * s.r * s.q_len * s.q_len) + 1.0 / (s.r * s.q_len) + 1.0 / (s.r * s.u);
    Ok((i.b - i.a) * s.z * base.powf(a_exp))
}

/// V0 / sqrt(lambda0).
pub fn second_derivative_bound(v0: f64, lambda0: f64) -> Result<f64> {
    if !(lambda0 > 0.0) {
        return Err(NumError::Domain("lambda0 must be positive".into()));
    }
    Ok(v0 / lambda0.sqrt())
}

/// Leading stationary-phase term at the unique stationary point.
pub fn stationary_phase_main_term(i: &OscillatoryIntegral) -> Result<ComplexValue> {
    let roots = locate_stationary_points(i)?;
    if roots.len() != 1 {
        return Err(NumError::Domain(format!("expected one stationary point, found {}", roots.len())));
    }
    let y0 = roots[0];
    let p2 = (i.d2phase)(y0);
    let scale = (i.dphase)(i.a).abs().max((i.dphase)(i.b).abs()) / (i.b - i.a);
    if !(p2.abs() > 1e-12 * scale.max(1e-300)) {
        return Err(NumError::Domain(format!("degenerate stationary point at {y0}")));
    }
    let rot = ComplexValue::from_polar(1.0, (i.phase)(y0) + PI / 4.0 * p2.signum());
    Ok((i.amplitude)(y0) * rot * (2.0 * PI / p2.abs()).sqrt())
}

/// Draws a reproducible uniform sample in [lo, hi].
pub(crate) fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.gen::<f64>()
}
