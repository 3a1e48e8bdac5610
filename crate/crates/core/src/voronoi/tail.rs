//! Certified truncation of the dual Voronoi sum.
//!
//! With a0 = h y^{-nu/2}, k integrations by parts against
//! d/dy [y^{(nu+1)/2} J_{nu+1}(4 pi sqrt(xy))] = 2 pi sqrt(x) y^{nu/2} J_nu(..) give
//!
//!   int h J_nu dy = (-1)^k (2 pi sqrt(x))^{-k} int a0^{(k)} y^{(nu+k)/2} J_{nu+k} dy,
//!
//! and Landau's |J_m(z)| <= 0.7858 z^{-1/3} (all m >= 0) turns this into
//! |Phi_h(x)| <= C_k x^{-k/2-1/6}. Deligne's |lambda(n)| <= d(n) <= 2 sqrt(n)
//! then bounds the dual tail by an integral.

use std::f64::consts::PI;

use super::testfn::VoronoiTestFunction;
use super::jet::Jet;
use crate::quadrature::kronrod_nodes;

/// Landau's constant, rounded up.
pub const LANDAU: f64 = 0.7858;
/// Highest derivative order used.
pub const MAX_ORDER: usize = 60;
/// Smallest order used for the tail (needs k/2 + 1/6 > 3/2 with room).
pub const MIN_TAIL_ORDER: usize = 5;
const PANELS: usize = 240;
const SAFETY: f64 = 1.01;

/// The moments I_k = int |a0^{(k)}(y)| y^{(nu+k)/2-1/6} dy for k <= MAX_ORDER.
#[derive(Clone, Debug)]
pub struct TailCertificate {
    pub nu: f64,
    pub moments: Vec<f64>,
}

fn moments(tf: &VoronoiTestFunction, nu: f64, panels: usize) -> Vec<f64> {
    let (a, b) = tf.support();
    let mut out = vec![0.0; MAX_ORDER + 1];
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        for (y, w) in kronrod_nodes(a + p as f64 * h, a + (p + 1) as f64 * h) {
            let jet = tf.jet(y, MAX_ORDER).mul(&Jet::power_of_variable(y, -nu / 2.0, MAX_ORDER));
            let mut fact = 1.0;
            for (k, m) in out.iter_mut().enumerate() {
                if k > 0 {
                    fact *= k as f64;
                }
                *m += w * (jet.0[k] * fact).abs() * y.powf((nu + k as f64) / 2.0 - 1.0 / 6.0);
            }
        }
    }
    out
}

impl TailCertificate {
    /// Two composite Kronrod resolutions; the larger value, with a margin.
    pub fn holomorphic(tf: &VoronoiTestFunction, kappa: u32) -> Self {
        let nu = kappa as f64 - 1.0;
        let coarse = moments(tf, nu, PANELS);
        let fine = moments(tf, nu, 2 * PANELS);
        let moments = coarse.iter().zip(&fine).map(|(c, f)| c.max(*f) * SAFETY).collect();
        TailCertificate { nu, moments }
    }

    /// C_k with |Phi_h(x)| <= C_k x^{-k/2-1/6}.
    pub fn constant(&self, k: usize) -> f64 {
        2.0 * PI * (2.0 * PI).powi(-(k as i32)) * LANDAU * (4.0 * PI).powf(-1.0 / 3.0) * self.moments[k]
    }

    /// Pointwise bound on |Phi_h(x)|.
    pub fn phi_bound(&self, x: f64) -> f64 {
        (0..=MAX_ORDER)
            .map(|k| self.constant(k) * x.powf(-(k as f64) / 2.0 - 1.0 / 6.0))
            .fold(f64::INFINITY, f64::min)
    }

    fn tail_k(&self, k: usize, m: f64, n_scale: f64, q: f64) -> f64 {
        let p = k as f64 / 2.0 + 1.0 / 6.0;
        (n_scale / q) * self.constant(k) * (n_scale / (q * q)).powf(-p) * 2.0 * m.powf(1.5 - p) / (p - 1.5)
    }

    /// Bound on (N/q) sum_{n > M} |lambda(n) Phi_h(nN/q^2)|; decreasing in M.
    pub fn tail(&self, m: usize, n_scale: f64, q: u64) -> f64 {
        let m = (m as f64).max(1.0);
        (MIN_TAIL_ORDER..=MAX_ORDER)
            .map(|k| self.tail_k(k, m, n_scale, q as f64))
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest M whose tail bound is at most `budget`.
    pub fn dual_length(&self, budget: f64, n_scale: f64, q: u64) -> usize {
        let best = (MIN_TAIL_ORDER..=MAX_ORDER)
            .map(|k| {
                let p = k as f64 / 2.0 + 1.0 / 6.0;
                let unit = self.tail_k(k, 1.0, n_scale, q as f64);
                (unit / budget).powf(1.0 / (p - 1.5))
            })
            .fold(f64::INFINITY, f64::min);
        let mut m = best.ceil().max(1.0) as usize;
        // guard against rounding at the boundary
        while self.tail(m, n_scale, q) > budget {
            m += 1;
        }
        m
    }
}
