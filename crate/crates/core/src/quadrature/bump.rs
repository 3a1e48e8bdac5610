//! The canonical smooth bump used for every inert weight.

/// exp(1 + 1/((2x-1)^2 - 1)) on (0, 1), zero outside; peak value 1 at x = 1/2.
pub fn bump(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let u = 2.0 * x - 1.0;
    (1.0 + 1.0 / (u * u - 1.0)).exp()
}

/// Bump rescaled to (a, b).
pub fn bump_on(x: f64, a: f64, b: f64) -> f64 {
    bump((x - a) / (b - a))
}

/// Derivative of `bump`.
pub fn bump_deriv(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    let u = 2.0 * x - 1.0;
    let d = u * u - 1.0;
    bump(x) * (-4.0 * u / (d * d))
}

/// Total variation of the bump on any interval containing its support.
pub const BUMP_TOTAL_VARIATION: f64 = 2.0;

/// Largest |d^k/dx^k b(x)| * (b-a)^k / (k-th central difference) style check:
/// returns the max over a grid of |f^(k)| scaled by `scale^k`, k = 1..=order,
/// estimated by central differences.
pub fn inert_ratios(f: &dyn Fn(f64) -> f64, a: f64, b: f64, scale: f64, order: usize) -> Vec<f64> {
    let n = 400;
    let h = (b - a) * 1e-3;
    let binom = |k: usize, j: usize| -> f64 {
        (1..=j).fold(1.0, |acc, i| acc * (k + 1 - i) as f64 / i as f64)
    };
    (1..=order)
        .map(|k| {
            let mut best: f64 = 0.0;
            for i in 1..n {
                let x = a + (b - a) * i as f64 / n as f64;
                let mut d = 0.0;
                for j in 0..=k {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    d += sign * binom(k, j) * f(x + (k as f64 / 2.0 - j as f64) * h);
                }
                best = best.max((d / h.powi(k as i32)).abs() * scale.powi(k as i32));
            }
            best
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        assert!((bump(0.5) - 1.0).abs() < 1e-15);
        assert_eq!(bump(0.0), 0.0);
        assert_eq!(bump(1.0), 0.0);
        assert!((bump(0.3) - bump(0.7)).abs() < 1e-15);
        assert!(bump(1e-3) < 1e-100);
    }

    #[test]
    fn derivative_matches_difference() {
        for &x in &[0.2, 0.45, 0.8] {
            let h = 1e-6;
            let fd = (bump(x + h) - bump(x - h)) / (2.0 * h);
            assert!((fd - bump_deriv(x)).abs() < 1e-8);
        }
    }

    #[test]
    fn is_inert_on_unit_scale() {
        let r = inert_ratios(&bump, 0.0, 1.0, 1.0, 4);
        for (k, v) in r.iter().enumerate() {
            assert!(v.is_finite() && *v < 10f64.powi(2 * (k as i32 + 1)), "k={} v={v}", k + 1);
        }
    }
}
