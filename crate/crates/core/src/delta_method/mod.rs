//! The Duke-Friedlander-Iwaniec expansion of the Kronecker delta in the
//! Heath-Brown form, evaluated numerically and checked against delta(n).

mod weight;

use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{divisors, gcd, mobius, totient};
use crate::error::{NumError, Result};
use crate::quadrature::{integrate_oscillatory, integrate_panels, OscillatoryIntegral, Scales};
use crate::ComplexValue;

pub use weight::{defect, g_regular, h_minus_defect, h_weight, omega, omega_over_t, RegularGrid};

/// The exponent A used when a test needs a concrete value.
pub const A_EXPONENT: f64 = 3.0;
/// |zeta| beyond which g is treated as zero (|g| < 1e-13 there).
pub const ZETA_SPAN: f64 = 512.0;
/// (end, step) tiers of the g_reg grid; the step shrinks where the bump's
/// derivatives are largest so cubic interpolation stays below 1e-10.
const GRID_TIERS: [(f64, f64); 3] = [(4.0, 1.0 / 8192.0), (16.0, 1.0 / 1024.0), (ZETA_SPAN, 1.0 / 256.0)];
const ZETA_TOL: f64 = 1e-10;

/// c_q(n) by the Moebius formula over divisors of gcd(q, n).
pub fn ramanujan_sum(q: u64, n: i64) -> i64 {
    let g = gcd(q, n.unsigned_abs());
    divisors(g).into_iter().map(|d| mobius(q / d) * d as i64).sum()
}

/// The literal sum over reduced residues, in floating point.
pub fn ramanujan_sum_direct(q: u64, n: i64) -> f64 {
    let r = n.rem_euclid(q as i64) as u64;
    (1..=q)
        .filter(|&a| gcd(a, q) == 1)
        .map(|a| (2.0 * PI * ((a * r) % q) as f64 / q as f64).cos())
        .sum()
}

/// A built expansion at a fixed Q. Immutable after `build`.
#[derive(Clone, Debug)]
pub struct DeltaExpansion {
    pub q_param: f64,
    pub c_q: f64,
    grid: Arc<RegularGrid>,
    /// D(q/Q) for q = 1..=2Q (index q - 1).
    defects: Vec<f64>,
}

impl PartialEq for DeltaExpansion {
    fn eq(&self, other: &Self) -> bool {
        self.q_param.to_bits() == other.q_param.to_bits()
            && self.c_q.to_bits() == other.c_q.to_bits()
            && self.grid == other.grid
            && self.defects.iter().map(|d| d.to_bits()).eq(other.defects.iter().map(|d| d.to_bits()))
    }
}

/// Q / sum_d omega(d/Q): the closed form of the calibration constant.
pub fn calibration_closed_form(q_param: f64) -> f64 {
    let lo = (q_param / 2.0).ceil() as u64;
    let hi = q_param.floor() as u64;
    let s: f64 = (lo.max(1)..=hi).map(|d| omega(d as f64 / q_param)).sum();
    q_param / s
}

impl DeltaExpansion {
    /// Build the weight at scale Q >= 4 and calibrate c_Q so that the full
    /// expansion equals 1 at n = 0.
    pub fn build(q_param: f64) -> Result<Self> {
        if !(q_param >= 4.0) || !q_param.is_finite() {
            return Err(NumError::Domain(format!("Q = {q_param} (need Q >= 4)")));
        }
        let grid = Arc::new(RegularGrid::build(&GRID_TIERS));
        let qmax = (2.0 * q_param).floor() as u64;
        let defects = (1..=qmax).map(|q| defect(q as f64 / q_param)).collect();
        let mut e = DeltaExpansion { q_param, c_q: 1.0, grid, defects };
        let raw = e.expansion(0)?;
        let c = 1.0 / raw;
        if !((1.0 - 10.0 / q_param)..=(1.0 + 10.0 / q_param)).contains(&c) {
            return Err(NumError::Domain(format!("calibration failed: c_Q = {c} at Q = {q_param}")));
        }
        e.c_q = c;
        Ok(e)
    }

    pub fn grid_nodes(&self) -> usize {
        self.grid.nodes()
    }

    fn check_q(&self, q: u64) -> Result<()> {
        if q == 0 || q as usize > self.defects.len() {
            return Err(NumError::Domain(format!("q = {q} outside 1..=2Q")));
        }
        Ok(())
    }

    /// The density of g(q, .): c_Q g_reg(zeta). The transform of h(q/Q, .)
    /// also carries the atom returned by `atom`.
    pub fn g_function(&self, q: u64, zeta: f64) -> Result<f64> {
        self.check_q(q)?;
        let reg = self.grid.eval(zeta).ok_or_else(|| {
            NumError::Domain(format!("|zeta| = {} beyond the grid span {ZETA_SPAN}", zeta.abs()))
        })?;
        Ok(self.c_q * reg)
    }

    /// Mass of g(q, .) at zeta = 0: c_Q x D(x) with x = q/Q.
    pub fn atom(&self, q: u64) -> Result<f64> {
        self.check_q(q)?;
        let x = q as f64 / self.q_param;
        Ok(self.c_q * x * self.defects[q as usize - 1])
    }

    /// g(q, zeta) by direct quadrature of the transform of y -> h(q/Q, y) - D(q/Q);
    /// an oracle for `g_function`.
    pub fn g_direct(&self, q: u64, zeta: f64, tol: f64) -> Result<f64> {
        self.check_q(q)?;
        let x = q as f64 / self.q_param;
        // the tail is the Riemann-sum error of omega(t)/t at step ~ x t^2 / y
        let ymax = 400.0 * x;
        let f = move |y: f64| h_minus_defect(x, y);
        let v = if zeta == 0.0 {
            let panels = uniform_panels(0.0, ymax, 64);
            integrate_panels(&|y: f64| ComplexValue::new(f(y), 0.0), &panels, tol, 1 << 18)?.value.re
        } else {
            let k = 2.0 * PI * zeta / x;
            let i = OscillatoryIntegral::real_amplitude(
                f,
                move |y| k * y,
                move |_| k,
                |_| 0.0,
                (0.0, ymax),
                Scales::new(1.0, x, 1.0, 1.0 / x, k),
            )?;
            integrate_oscillatory(&i, tol)?.value.re
        };
        Ok(2.0 * self.c_q * v)
    }

    /// int g(q, zeta) e(t zeta) d zeta: the atom plus the density over
    /// |zeta| <= span.
    fn zeta_integral(&self, q: u64, t: f64) -> Result<f64> {
        let grid = Arc::clone(&self.grid);
        let x = q as f64 / self.q_param;
        let atom = self.atom(q)?;
        let c = self.c_q;
        let amp = move |z: f64| c * grid.eval(z).unwrap_or(0.0);
        if t == 0.0 {
            let panels = uniform_panels(-ZETA_SPAN, ZETA_SPAN, 2 * ZETA_SPAN as usize);
            let r = integrate_panels(&|z: f64| ComplexValue::new(amp(z), 0.0), &panels, ZETA_TOL, 1 << 20)?;
            return Ok(atom + r.value.re);
        }
        let k = 2.0 * PI * t;
        let i = OscillatoryIntegral::real_amplitude(
            amp,
            move |z| k * z,
            move |_| k,
            |_| 0.0,
            (-ZETA_SPAN, ZETA_SPAN),
            Scales::new(1.0, x, 1.0, 1.0, k.abs()),
        )?;
        Ok(atom + integrate_oscillatory(&i, ZETA_TOL)?.value.re)
    }

    /// Largest q contributing at n: Q for |n| <= Q^2/2, up to 2Q beyond.
    fn q_range(&self, n: i64) -> u64 {
        let q2 = self.q_param * self.q_param;
        let m = (2.0 * n.unsigned_abs() as f64 / q2).max(1.0);
        ((self.q_param * m).floor() as u64).min(self.defects.len() as u64)
    }

    fn expansion(&self, n: i64) -> Result<f64> {
        let mut s = 0.0;
        for q in 1..=self.q_range(n) {
            let c = ramanujan_sum(q, n);
            if c == 0 {
                continue;
            }
            let t = n as f64 / (q as f64 * self.q_param);
            s += c as f64 / q as f64 * self.zeta_integral(q, t)?;
        }
        Ok(s / self.q_param)
    }

    /// (1/Q) sum_q (1/q) c_q(n) int g(q, zeta) e(n zeta/(qQ)) d zeta.
    pub fn delta_eval(&self, n: i64) -> Result<f64> {
        let q2 = self.q_param * self.q_param;
        if n.unsigned_abs() as f64 > q2 {
            return Err(NumError::Domain(format!("|n| = {} exceeds Q^2 = {q2}", n.abs())));
        }
        self.expansion(n)
    }

    /// (Q/q)(q/Q + |zeta|)^A with A = 3.
    pub fn near_one_scale(&self, q: u64, zeta: f64) -> f64 {
        let x = q as f64 / self.q_param;
        (x + zeta.abs()).powf(A_EXPONENT) / x
    }

    /// Largest |g - 1| over q <= Q^{1-eps}, |zeta| <= q/Q.
    pub fn near_one_deviation(&self, eps: f64) -> Result<NearOne> {
        let qmax = (self.q_param.powf(1.0 - eps).floor() as u64).max(1);
        let mut out = NearOne { max_dev: 0.0, at_q: 1, at_zeta: 0.0, max_scale: 0.0 };
        for q in 1..=qmax {
            let zmax = q as f64 / self.q_param;
            for i in 0..=200 {
                let z = zmax * (i as f64 / 100.0 - 1.0);
                let dev = (self.g_function(q, z)? - 1.0).abs();
                out.max_scale = out.max_scale.max(self.near_one_scale(q, z));
                if dev > out.max_dev {
                    out.max_dev = dev;
                    out.at_q = q;
                    out.at_zeta = z;
                }
            }
        }
        Ok(out)
    }

    /// Least-squares slope of log|g(q, zeta)| against log zeta on `points`
    /// log-spaced nodes of [lo, hi].
    pub fn decay_slope(&self, q: u64, lo: f64, hi: f64, points: usize) -> Result<f64> {
        let mut xs = Vec::with_capacity(points);
        let mut ys = Vec::with_capacity(points);
        for i in 0..points {
            let z = lo * (hi / lo).powf(i as f64 / (points - 1) as f64);
            let g = self.g_function(q, z)?.abs();
            if g > 0.0 {
                xs.push(z.ln());
                ys.push(g.ln());
            }
        }
        Ok(least_squares_slope(&xs, &ys))
    }

    /// |dg/dzeta| by central difference, divided by the bound
    /// |zeta|^{-1} min(|zeta|^{-1}, Q/q) log Q.
    pub fn derivative_ratio(&self, q: u64, zeta: f64) -> Result<f64> {
        let h = 1e-5;
        let d = (self.g_function(q, zeta + h)? - self.g_function(q, zeta - h)?) / (2.0 * h);
        let z = zeta.abs();
        let bound = (1.0 / z) * (1.0 / z).min(self.q_param / q as f64) * self.q_param.ln();
        Ok(d.abs() / bound)
    }

    /// max over |n| <= nmax of |delta_eval(n) - delta(n)|.
    pub fn exactness(&self, nmax: i64) -> Result<Exactness> {
        let mut out = Exactness { nmax, max_residual: 0.0, worst_n: 0, residuals: Vec::new() };
        for n in -nmax..=nmax {
            let v = self.delta_eval(n)?;
            let r = (v - if n == 0 { 1.0 } else { 0.0 }).abs();
            if r > out.max_residual {
                out.max_residual = r;
                out.worst_n = n;
            }
            out.residuals.push((n, r));
        }
        Ok(out)
    }
}

fn uniform_panels(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / n as f64, a + (b - a) * (i + 1) as f64 / n as f64))
        .collect()
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, Serialize)]
pub struct NearOne {
    pub max_dev: f64,
    pub at_q: u64,
    pub at_zeta: f64,
    /// Largest value of (Q/q)(q/Q + |zeta|)^A over the region.
    pub max_scale: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Exactness {
    pub nmax: i64,
    pub max_residual: f64,
    pub worst_n: i64,
    pub residuals: Vec<(i64, f64)>,
}

/// Totient, exposed for callers summing c_q(0).
pub fn phi(q: u64) -> u64 {
    totient(q)
}
