//! The Heath-Brown weight h(x, y) and the pieces of its Fourier transform.
//!
//! With omega the canonical bump moved to [1/2, 1] and normalized to unit
//! mass, h(x, y) = sum_r (omega(xr) - omega(|y|/(xr))) / (xr). In y it tends to
//! the constant D(x) = sum_r omega(xr)/(xr) - I/x (I = int omega(t)/t dt), so
//! its transform in the variable zeta = x u is an atom x D(x) at zeta = 0 plus
//! a density. Poisson summation gives the density in closed form,
//!
//!   g_reg(zeta) = 1 - (1/|zeta|) sum_{k>=1} omega(k/|zeta|),
//!
//! independent of x.

use std::sync::OnceLock;

use crate::quadrature::{bump, integrate_real};

fn bump_mass() -> f64 {
    static B: OnceLock<f64> = OnceLock::new();
    *B.get_or_init(|| integrate_real(&bump, 0.0, 1.0, 1e-15).expect("bump mass converges"))
}

/// Canonical bump on [1/2, 1] with unit integral.
pub fn omega(x: f64) -> f64 {
    2.0 * bump(2.0 * x - 1.0) / bump_mass()
}

/// I = int omega(t)/t dt.
pub fn omega_over_t() -> f64 {
    static I: OnceLock<f64> = OnceLock::new();
    *I.get_or_init(|| {
        integrate_real(&|t: f64| omega(t) / t, 0.5, 1.0, 1e-15).expect("converges")
    })
}

/// sum_{r >= 1} omega(x r) / (x r).
fn first_sum(x: f64) -> f64 {
    let hi = (1.0 / x).floor() as u64;
    let lo = ((0.5 / x).ceil() as u64).max(1);
    (lo..=hi).map(|r| omega(x * r as f64) / (x * r as f64)).sum()
}

/// sum_{r >= 1} omega(|y| / (x r)) / (x r).
fn second_sum(x: f64, y: f64) -> f64 {
    let y = y.abs();
    if y == 0.0 {
        return 0.0;
    }
    let lo = ((y / x).ceil() as u64).max(1);
    let hi = (2.0 * y / x).floor() as u64;
    (lo..=hi).map(|r| omega(y / (x * r as f64)) / (x * r as f64)).sum()
}

/// Heath-Brown's h(x, y).
pub fn h_weight(x: f64, y: f64) -> f64 {
    first_sum(x) - second_sum(x, y)
}

/// D(x) = sum_r omega(xr)/(xr) - I/x: the Riemann-sum defect of omega at step x.
pub fn defect(x: f64) -> f64 {
    first_sum(x) - omega_over_t() / x
}

/// h(x, y) - D(x) = I/x - sum_r omega(|y|/(xr))/(xr): integrable in y, with
/// transform g_reg(x u) and no atom.
pub fn h_minus_defect(x: f64, y: f64) -> f64 {
    omega_over_t() / x - second_sum(x, y)
}

/// The x-independent regular part of the transform, by Poisson summation.
pub fn g_regular(zeta: f64) -> f64 {
    let z = zeta.abs();
    if z <= 1.0 {
        return 1.0;
    }
    let lo = (z / 2.0).ceil() as u64;
    let hi = z.floor() as u64;
    1.0 - (lo..=hi).map(|k| omega(k as f64 / z)).sum::<f64>() / z
}

/// Piecewise-uniform grid of g_regular with four-point cubic interpolation.
/// Tiers are (end, step) pairs covering [0, span] left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularGrid {
    pub span: f64,
    tiers: Vec<Tier>,
}

#[derive(Clone, Debug, PartialEq)]
struct Tier {
    origin: f64,
    end: f64,
    step: f64,
    values: Vec<f64>,
}

fn lagrange4(v: &[f64], i: usize, t: f64) -> f64 {
    // nodes at -1, 0, 1, 2 relative to i, t in [0, 1)
    let (p0, p1, p2, p3) = (v[i - 1], v[i], v[i + 1], v[i + 2]);
    let a = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let b = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let c = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let d = (t + 1.0) * t * (t - 1.0) / 6.0;
    a * p0 + b * p1 + c * p2 + d * p3
}

impl RegularGrid {
    pub fn build(tiers: &[(f64, f64)]) -> Self {
        let mut origin = 0.0;
        let mut out = Vec::with_capacity(tiers.len());
        for &(end, step) in tiers {
            // one guard node on each side so every cell has four neighbours
            let n = ((end - origin) / step).round() as usize;
            let values = (0..=n + 2).map(|i| g_regular(origin + (i as f64 - 1.0) * step)).collect();
            out.push(Tier { origin, end, step, values });
            origin = end;
        }
        RegularGrid { span: origin, tiers: out }
    }

    /// Interpolated g_regular; None beyond the span.
    pub fn eval(&self, zeta: f64) -> Option<f64> {
        let z = zeta.abs();
        if z > self.span {
            return None;
        }
        let t = self.tiers.iter().find(|t| z < t.end).unwrap_or(self.tiers.last()?);
        let s = (z - t.origin) / t.step;
        let i = (s.floor() as usize).min(t.values.len() - 4);
        Some(lagrange4(&t.values, i + 1, s - i as f64))
    }

    pub fn nodes(&self) -> usize {
        self.tiers.iter().map(|t| t.values.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_has_unit_mass_and_support() {
        let m = integrate_real(&omega, 0.5, 1.0, 1e-14).unwrap();
        assert!((m - 1.0).abs() < 1e-13);
        assert_eq!(omega(0.5), 0.0);
        assert_eq!(omega(1.0), 0.0);
        assert!(omega(0.75) > 0.0);
    }

    #[test]
    fn h_vanishes_beyond_support() {
        // h(x, y) = 0 for x > max(1, 2|y|)
        assert_eq!(h_weight(1.2, 0.3), 0.0);
        assert_eq!(h_weight(2.5, -1.0), 0.0);
        assert!(h_weight(0.3, 0.0) > 0.0);
    }

    #[test]
    fn tail_tends_to_defect() {
        for &x in &[0.1, 0.35, 1.0] {
            assert!((h_weight(x, 0.3) - h_minus_defect(x, 0.3) - defect(x)).abs() < 1e-12);
            assert!(h_minus_defect(x, 500.0).abs() < 1e-6, "{x}");
        }
    }

    #[test]
    fn regular_part_is_one_below_one() {
        for &z in &[0.0, 0.3, 0.999, -0.5] {
            assert_eq!(g_regular(z), 1.0);
        }
        assert!((g_regular(2.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_interpolation_is_accurate() {
        let g = RegularGrid::build(&[(4.0, 1.0 / 8192.0), (16.0, 1.0 / 1024.0), (64.0, 1.0 / 256.0)]);
        let mut worst: f64 = 0.0;
        for i in 0..5000 {
            let z = 0.0123 + i as f64 * 0.01277;
            worst = worst.max((g.eval(z).unwrap() - g_regular(z)).abs());
        }
        assert!(worst < 5e-10, "{worst}");
        assert!(g.eval(64.5).is_none());
    }
}
