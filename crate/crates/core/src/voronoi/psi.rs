//! The Mellin-Barnes transform Psi^+- of the twisted weight
//! phi(y) = (y/N)^{-it} V(y/N) e(2 sqrt(ny)/q), its small-B asymptotic and
//! the expansion of the stationary point tau*.
//!
//! With y = N u^2 and s = sigma + i tau the y-integral becomes
//! 2 N^{-s-it} phi_sigma(tau + t), where
//!
//!   phi_sigma(v) = int V(u^2) u^{-2 sigma - 1} e^{i(2 pi B u - 2 v log u)} du,
//!
//! B = 2 sqrt(nN)/q and V is the canonical bump on [1, 2], so u runs over
//! [1, sqrt 2] and phi_sigma concentrates on v in [pi B, sqrt(2) pi B].

use std::collections::HashMap;
use std::f64::consts::{E, PI, SQRT_2};
use std::sync::Mutex;

use super::jet::Jet;
use crate::quadrature::{bump_on, integrate_split, mellin_barnes_window};
use crate::special_fn::gamma_factor;
use crate::{check_finite, ComplexValue, NumError, Result};

/// The fixed factor standing in for N^epsilon in regime predicates.
pub const REGIME_FACTOR: f64 = 10.0;
/// Centre of the tau-support [pi, sqrt(2) pi] after tau -> B tau.
pub const TAU_CENTRE: f64 = PI * (1.0 + SQRT_2) / 2.0;
const INNER_TOL: f64 = 1e-11;
const OUTER_TOL: f64 = 1e-8;
const FIXED_POINT_TOL: f64 = 1e-12;
const FIXED_POINT_CAP: usize = 50;

/// Parameters of the twisted weight. `twist` = +1 gives e(+2 sqrt(ny)/q);
/// -1 is its conjugate, used for the conjugation symmetry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiParams {
    pub n_scale: f64,
    pub n: u64,
    pub q: u64,
    pub t: f64,
    pub twist: f64,
}

impl PsiParams {
    pub fn new(n_scale: f64, n: u64, q: u64, t: f64) -> Result<Self> {
        if !(n_scale > 0.0) || n == 0 || q == 0 || !t.is_finite() {
            return Err(NumError::Domain(format!("N = {n_scale}, n = {n}, q = {q}, t = {t}")));
        }
        Ok(PsiParams { n_scale, n, q, t, twist: 1.0 })
    }

    /// B = 2 sqrt(nN)/q.
    pub fn b(&self) -> f64 {
        2.0 * (self.n as f64 * self.n_scale).sqrt() / self.q as f64
    }

    /// t -> -t with the twist conjugated.
    pub fn conjugate(&self) -> Self {
        PsiParams { t: -self.t, twist: -self.twist, ..*self }
    }

    /// (T1, T2) = (t + mu, t - mu).
    pub fn spectral(&self, mu: f64) -> (f64, f64) {
        (self.t + mu, self.t - mu)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiPair {
    pub plus: ComplexValue,
    pub minus: ComplexValue,
}

/// Inner integral phi_sigma(v) for frequency B (signed by the twist).
pub fn phi_sigma(sigma: f64, v: f64, b: f64) -> Result<ComplexValue> {
    let f = |u: f64| {
        let w = bump_on(u * u, 1.0, 2.0) * u.powf(-2.0 * sigma - 1.0);
        ComplexValue::from_polar(w, 2.0 * PI * b * u - 2.0 * v * u.ln())
    };
    let pieces = (b.abs() * (SQRT_2 - 1.0)).ceil() as usize + 8;
    Ok(integrate_split(&f, 1.0, SQRT_2, INNER_TOL, pieces)?.value)
}

/// Psi^+- by double quadrature: the inner u-integral adaptively, the
/// outer line integral over a window around the support of phi_sigma,
/// widened until its edges are negligible.
pub fn psi_mellin(x: f64, p: &PsiParams, mu: f64, sigma: f64) -> Result<PsiPair> {
    if !(sigma > -1.0) {
        return Err(NumError::Domain(format!("sigma = {sigma} must exceed -1")));
    }
    if !(x > 0.0) || !(mu > 0.0) {
        return Err(NumError::Domain(format!("x = {x}, mu = {mu}")));
    }
    let b = p.b();
    if b < REGIME_FACTOR {
        return Err(NumError::Domain(format!("B = {b} below {REGIME_FACTOR}: no oscillation")));
    }
    let bt = b * p.twist;
    let lnx = (PI * PI * p.n_scale * x).ln();
    // both components share phi_sigma at the same abscissae
    let memo: Mutex<HashMap<u64, ComplexValue>> = Mutex::new(HashMap::new());
    let pair = |s: ComplexValue| -> Result<(ComplexValue, ComplexValue)> {
        let v = s.im + p.t;
        let cached = memo.lock().expect("memo lock").get(&v.to_bits()).copied();
        let phi = match cached {
            Some(phi) => phi,
            None => {
                let phi = phi_sigma(sigma, v, bt)?;
                memo.lock().expect("memo lock").insert(v.to_bits(), phi);
                phi
            }
        };
        let (gp, gm) = gamma_factor(s, mu)?;
        let w = 2.0 * (-s * lnx).exp() * phi;
        Ok((w * gp, w * gm))
    };
    // Support of phi_sigma in v = tau + t, mirrored for the conjugate twist.
    // One of gamma^+- is exponentially small on it, so the window is cut
    // where the larger component has decayed below the tolerance.
    let (v0, v1) = if p.twist > 0.0 { (PI * b, SQRT_2 * PI * b) } else { (-SQRT_2 * PI * b, -PI * b) };
    let mag = |v: f64| pair(ComplexValue::new(sigma, v - p.t)).map(|(a, c)| a.norm().max(c.norm()));
    let centre = 0.5 * (v0 + v1);
    let peak = (0..=64)
        .map(|k| mag(v0 + (v1 - v0) * k as f64 / 64.0))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(NumError::Budget("support detection failed: integrand vanishes on the support".into()));
    }
    let reach = |dir: f64| -> Result<f64> {
        let step = 0.05 * PI * b;
        let mut v = if dir < 0.0 { v0 } else { v1 };
        for _ in 0..200 {
            v += dir * step;
            if mag(v)? < 0.1 * OUTER_TOL * peak && mag(v + dir * step)? < 0.1 * OUTER_TOL * peak {
                return Ok(v + dir * step);
            }
        }
        Err(NumError::Budget(format!("support detection failed: no decay within {:.0} of {centre:.0}", 200.0 * step)))
    };
    let (lo, hi) = (reach(-1.0)? - p.t, reach(1.0)? - p.t);
    let nan = ComplexValue::new(f64::NAN, f64::NAN);
    let rp = mellin_barnes_window(&|s| pair(s).map(|v| v.0).unwrap_or(nan), sigma, lo, hi, OUTER_TOL, peak)?;
    let rm = mellin_barnes_window(&|s| pair(s).map(|v| v.1).unwrap_or(nan), sigma, lo, hi, OUTER_TOL, peak)?;
    Ok(PsiPair { plus: check_finite(rp.value, "psi_mellin")?, minus: check_finite(rm.value, "psi_mellin")? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    SmallB,
    MiddleB,
    LargeB,
}

/// Small if B <= |T2|/10, large if B >= 10 T1, middle otherwise.
pub fn psi_regime_classify(b: f64, t1: f64, t2: f64) -> Result<Regime> {
    if !(b > 0.0) || !(t1 > t2.abs()) || t2 == 0.0 {
        return Err(NumError::Domain(format!("need B > 0 and T1 > |T2| > 0, got B={b}, T1={t1}, T2={t2}")));
    }
    Ok(if b <= t2.abs() / REGIME_FACTOR {
        Regime::SmallB
    } else if b >= REGIME_FACTOR * t1 {
        Regime::LargeB
    } else {
        Regime::MiddleB
    })
}

/// The Nx that puts the exact stationary point tau* at the centre of the
/// tau-support: (T1 - B tau_c)|T2 - B tau_c| / (4 tau_c^2).
pub fn matched_nx(b: f64, t1: f64, t2: f64) -> f64 {
    let bt = b * TAU_CENTRE;
    (t1 - bt).abs() * (t2 - bt).abs() / (4.0 * TAU_CENTRE * TAU_CENTRE)
}

/// tau0, tau*, the tau_j series and g_j(B/T1, B/T2).
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseExpansion {
    pub b: f64,
    pub t1: f64,
    pub t2: f64,
    pub k: usize,
    pub tau0: f64,
    pub tau_star: f64,
    /// tau_j, j = 0..=K; each is homogeneous of degree j in (B/T1, B/T2).
    pub tau_series: Vec<f64>,
    pub g_coeffs: Vec<f64>,
    /// Relative residual of 4 N x tau^2 = T1|T2|(1 - B tau/T1)(1 - B tau/T2).
    pub residual: f64,
    pub iterations: usize,
}

impl PhaseExpansion {
    pub fn tau_partial_sum(&self, k: usize) -> f64 {
        self.tau_series[..=k.min(self.k)].iter().sum()
    }

    /// B sum_{j <= K} g_j tau0^{j+1}.
    pub fn phase_series(&self) -> f64 {
        self.b * self.g_coeffs.iter().enumerate().map(|(j, g)| g * self.tau0.powi(j as i32 + 1)).sum::<f64>()
    }
}

/// varrho_0(tau) exactly.
pub fn varrho0(tau: f64, b: f64, t1: f64, t2: f64, nx: f64) -> f64 {
    let bt = b * tau;
    -bt * (nx / (E * E)).ln() + (bt - t1) * ((t1 - bt) / (2.0 * E)).ln() + (bt - t2) * ((t2 - bt).abs() / (2.0 * E)).ln()
        - 2.0 * bt * tau.ln()
}

pub fn varrho0_second(tau: f64, b: f64, t1: f64, t2: f64) -> f64 {
    b * (1.0 / (tau - t1 / b) + 1.0 / (tau - t2 / b) - 2.0 / tau)
}

/// Solves tau = tau0 sqrt((1 - y1 tau)(1 - y2 tau)), y1 = B/T1, y2 = B/T2,
/// by fixed-point iteration from tau0, and expands tau* and
/// sum_j (y1^j + y2^j) tau*^{j+1}/(j+1) in powers of (y1, y2).
pub fn expand_stationary_point(b: f64, t1: f64, t2: f64, x: f64, n_scale: f64, k: usize) -> Result<PhaseExpansion> {
    if !(b >= 0.0) || !(t1 > t2.abs()) || t2 == 0.0 || !(x > 0.0) || !(n_scale > 0.0) {
        return Err(NumError::Domain(format!("B={b}, T1={t1}, T2={t2}, x={x}, N={n_scale}")));
    }
    let nx = n_scale * x;
    let tau0 = (t1 * t2.abs() / (4.0 * nx)).sqrt();
    let (y1, y2) = (b / t1, b / t2);
    let map = |tau: f64| -> Result<f64> {
        let r = (1.0 - y1 * tau) * (1.0 - y2 * tau);
        if !(r > 0.0) {
            return Err(NumError::Budget(format!("stationary point left the regime at tau = {tau}")));
        }
        Ok(tau0 * r.sqrt())
    };
    let mut tau = tau0;
    let mut step_prev = 0.0;
    let mut damp = 1.0;
    let mut iterations = 0;
    loop {
        if iterations == FIXED_POINT_CAP {
            return Err(NumError::Budget(format!("tau* iteration did not converge in {FIXED_POINT_CAP} steps")));
        }
        let step = map(tau)? - tau;
        if step * step_prev < 0.0 && step.abs() > 0.5 * step_prev.abs() {
            damp = 0.5;
        }
        tau += damp * step;
        step_prev = step;
        iterations += 1;
        if step.abs() <= FIXED_POINT_TOL * tau0 {
            break;
        }
    }
    let lhs = 4.0 * nx * tau * tau;
    let rhs = t1 * t2.abs() * (1.0 - y1 * tau) * (1.0 - y2 * tau);
    let residual = (lhs - rhs).abs() / rhs.abs();

    // series in a bookkeeping variable e with y_i -> e y_i
    let mut ser = Jet(vec![0.0; k + 1]);
    ser.0[0] = tau0;
    for _ in 0..=k {
        let mut f1 = ser.mul(&Jet(shifted(k, -y1)));
        f1.0[0] += 1.0;
        let mut f2 = ser.mul(&Jet(shifted(k, -y2)));
        f2.0[0] += 1.0;
        ser = f1.mul(&f2).sqrt();
        ser.0.iter_mut().for_each(|c| *c *= tau0);
    }
    // S(e) = sum_j e^j (y1^j + y2^j) tau(e)^{j+1} / (j+1)
    let mut s = Jet(vec![0.0; k + 1]);
    let mut pow = ser.clone();
    for j in 0..=k {
        let c = (y1.powi(j as i32) + y2.powi(j as i32)) / (j + 1) as f64;
        for i in 0..=k - j {
            s.0[i + j] += c * pow.0[i];
        }
        pow = pow.mul(&ser);
    }
    let g_coeffs = (0..=k).map(|j| s.0[j] / tau0.powi(j as i32 + 1)).collect();
    Ok(PhaseExpansion { b, t1, t2, k, tau0, tau_star: tau, tau_series: ser.0, g_coeffs, residual, iterations })
}

/// The series c * e (a jet in e with a single linear term).
fn shifted(k: usize, c: f64) -> Vec<f64> {
    let mut v = vec![0.0; k + 1];
    if k >= 1 {
        v[1] = c;
    }
    v
}

/// The amplitude V(tau*) of the small-B asymptotic together with the
/// expansion it was evaluated on. V is the stationary-phase amplitude of
/// the exact tau-integrand: with F(tau) the integrand after tau -> B tau,
/// F = B^{1/2} (Nx)^{1/2+it} V0 e^{i varrho0} and
/// V(tau*) = B^{1/2} V0(tau*) sqrt(2 pi/|varrho0''|) e^{+-i pi/4}.
pub fn v_natural(x: f64, p: &PsiParams, mu: f64, k: usize) -> Result<(PhaseExpansion, PsiPair)> {
    let (t1, t2) = p.spectral(mu);
    let b = p.b();
    if psi_regime_classify(b, t1, t2)? != Regime::SmallB {
        return Err(NumError::Domain(format!("regime violation: B = {b} exceeds |T2|/{REGIME_FACTOR}")));
    }
    if p.twist < 0.0 {
        return Err(NumError::Domain("asymptotic needs the e(+2 sqrt(ny)/q) twist".into()));
    }
    let nx = p.n_scale * x;
    let reference = matched_nx(b, t1, t2);
    if !(nx >= reference / 4.0 && nx <= 4.0 * reference) {
        return Err(NumError::Domain(format!(
            "regime violation: Nx = {nx:e} not within a factor 4 of the matched value {reference:e}"
        )));
    }
    let ex = expand_stationary_point(b, t1, t2, x, p.n_scale, k)?;
    let tau = ex.tau_star;
    let sigma = -0.5;
    let s = ComplexValue::new(sigma, b * tau - p.t);
    let (gp, gm) = gamma_factor(s, mu)?;
    let f = b / (2.0 * PI * PI) * (-s * (PI * PI * nx).ln()).exp() * phi_sigma(sigma, b * tau, b)?;
    let strip = (ComplexValue::new(0.5, p.t) * nx.ln()).exp() * ComplexValue::from_polar(1.0, varrho0(tau, b, t1, t2, nx));
    let d2 = varrho0_second(tau, b, t1, t2);
    let sp = (2.0 * PI / d2.abs()).sqrt() * ComplexValue::from_polar(1.0, PI / 4.0 * d2.signum());
    let v = |g: ComplexValue| f * g / strip * sp;
    Ok((ex, PsiPair { plus: check_finite(v(gp), "v_natural")?, minus: check_finite(v(gm), "v_natural")? }))
}

/// -(T1) log(T1/2e) - T2 log(|T2|/2e): the t, mu phase outside the integral.
pub fn main_log_phase(t1: f64, t2: f64) -> f64 {
    -t1 * (t1 / (2.0 * E)).ln() - t2 * (t2.abs() / (2.0 * E)).ln()
}

/// Small-B asymptotic
/// (Nx)^{1/2+it} V(tau*) e(-(T1/2pi) log(T1/2e) - (T2/2pi) log(|T2|/2e) + (B/2pi) sum g_j tau0^{j+1}),
/// with T1 = t + mu, T2 = t - mu.
pub fn psi_asymptotic(x: f64, p: &PsiParams, mu: f64, k: usize) -> Result<PsiPair> {
    let (ex, v) = v_natural(x, p, mu, k)?;
    let nx = p.n_scale * x;
    let outer = (ComplexValue::new(0.5, p.t) * nx.ln()).exp()
        * ComplexValue::from_polar(1.0, main_log_phase(ex.t1, ex.t2) + ex.phase_series());
    Ok(PsiPair {
        plus: check_finite(outer * v.plus, "psi_asymptotic")?,
        minus: check_finite(outer * v.minus, "psi_asymptotic")?,
    })
}

/// A shipped parameter point for the Psi trichotomy.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiDesk {
    pub name: &'static str,
    pub params: PsiParams,
    pub mu: f64,
    /// The product N x.
    pub nx: f64,
}

impl PsiDesk {
    pub fn x(&self) -> f64 {
        self.nx / self.params.n_scale
    }

    pub fn regime(&self) -> Result<Regime> {
        let (t1, t2) = self.params.spectral(self.mu);
        psi_regime_classify(self.params.b(), t1, t2)
    }
}

/// Desk points, one per regime.
///
/// small: T1 = 6000, T2 = 3000 and B = 2 sqrt(9 * 10^4)/2 = 300 = |T2|/10.
///   The stationary-phase error in tau is about 3/B, so B must be in the
///   hundreds for a few-percent match, and |T2| >= 10 B follows.
///   Nx is matched so that tau* sits at the centre of the tau-support.
/// middle: T1 = 400, T2 = 100, B = 200; Nx matched the same way, giving a
///   genuine stationary point.
/// large: T1 = 20, T2 = 10, B = 400 = 20 T1, Nx = T1 |T2|.
pub fn psi_desk_points() -> Vec<PsiDesk> {
    let mk = |name, n_scale, n, q, t1: f64, t2: f64, nx: Option<f64>| {
        let params = PsiParams::new(n_scale, n, q, (t1 + t2) / 2.0).expect("valid desk parameters");
        let nx = nx.unwrap_or_else(|| matched_nx(params.b(), t1, t2));
        PsiDesk { name, params, mu: (t1 - t2) / 2.0, nx }
    };
    vec![
        mk("small-B", 1e4, 9, 2, 6000.0, 3000.0, None),
        mk("middle-B", 1e4, 1, 1, 400.0, 100.0, None),
        mk("large-B", 1e4, 4, 1, 20.0, 10.0, Some(200.0)),
    ]
}

/// Series order used with the small-B desk point: at tau ~ 3.8 and
/// B/|T2| = 0.1 the g-series ratio is about 0.4, and 0.4^25 B < 1e-7.
pub const DESK_ORDER: usize = 24;
