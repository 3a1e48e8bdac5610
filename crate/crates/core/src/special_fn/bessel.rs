//! Bessel J of real order and the Maass kernel pair built from J_{2i mu}
//! and K_{2i mu}.

use super::dd::Dd;
use super::gamma::ln_gamma;
use crate::{ComplexValue, NumError, Result};
use std::f64::consts::PI;

/// Below this argument the ascending series is used.
pub const SERIES_LIMIT: f64 = 25.0;

/// Ascending series summed in double-double.
fn series(nu: f64, x: f64) -> Result<f64> {
    let lead = (nu * (x / 2.0).ln() - ln_gamma(ComplexValue::new(nu + 1.0, 0.0))?).exp();
    let lead = lead.re;
    let q = -(Dd::new(x) * Dd::new(x)) * Dd::new(0.25);
    let mut term = Dd::new(lead);
    let mut sum = term;
    let mut m = 0usize;
    loop {
        let mp = Dd::new((m + 1) as f64);
        term = term * q / (mp * (mp + Dd::new(nu)));
        sum = sum + term;
        m += 1;
        if (m as f64) > x && term.hi.abs() <= 1e-33 * sum.hi.abs().max(1e-300) {
            break;
        }
        if term.hi == 0.0 || m > 2000 {
            break;
        }
    }
    Ok(sum.to_f64())
}

/// Hankel coefficients a_k = prod_{j<=k} (mu4 - (2j-1)^2) / (k! 8^k) for
/// k = 0..=kmax, with mu4 = 4 nu^2 (real for real or imaginary order).
pub fn hankel_coefficients(mu4: f64, kmax: usize) -> Vec<f64> {
    let mut a = vec![1.0; kmax + 1];
    for k in 1..=kmax {
        let odd = (2 * k - 1) as f64;
        a[k] = a[k - 1] * (mu4 - odd * odd) / (k as f64 * 8.0);
    }
    a
}

/// The Hankel sums (P, Q) at x; `None` when the series stalls above 1e-17.
fn hankel_pq(mu4: f64, x: f64) -> Option<(f64, f64)> {
    let mut a = 1.0;
    let (mut p, mut q) = (1.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut k = 1usize;
    loop {
        let odd = (2 * k - 1) as f64;
        a *= (mu4 - odd * odd) / (k as f64 * 8.0 * x);
        let mag = a.abs();
        if mag < 1e-17 {
            break;
        }
        if mag > prev && k > 2 {
            return None;
        }
        prev = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        k += 1;
        if k > 400 {
            return None;
        }
    }
    Some((p, q))
}

fn hankel(nu: f64, x: f64) -> Option<f64> {
    let (p, q) = hankel_pq(4.0 * nu * nu, x)?;
    let chi = x - (nu / 2.0 + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin()))
}

/// M(x) with J_nu(x) = Re(M(x) e^{ix}) for large x; M varies slowly.
/// `None` when the asymptotic series does not reach double precision.
pub fn bessel_j_modulated(nu: f64, x: f64) -> Option<ComplexValue> {
    let (p, q) = hankel_pq(4.0 * nu * nu, x)?;
    let chi0 = (nu / 2.0 + 0.25) * PI;
    Some((2.0 / (PI * x)).sqrt() * ComplexValue::new(p, q) * ComplexValue::from_polar(1.0, -chi0))
}

/// Same for the Maass kernel -pi/sin(pi i mu) (J_{2i mu} - J_{-2i mu}),
/// which behaves like a J of order -1 with 4 nu^2 = -16 mu^2.
pub fn maass_plus_modulated(mu: f64, x: f64) -> Option<ComplexValue> {
    let (p, q) = hankel_pq(-16.0 * mu * mu, x)?;
    Some(2.0 * PI * (2.0 / (PI * x)).sqrt() * ComplexValue::new(p, q) * ComplexValue::from_polar(1.0, PI / 4.0))
}

/// J_order(x) for x > 0. Negative non-integer orders are accepted where the
/// series or Hankel branch applies.
pub fn bessel_j(order: f64, x: f64) -> Result<f64> {
    if !order.is_finite() || !x.is_finite() || x < 0.0 {
        return Err(NumError::Domain(format!("bessel_j({order}, {x})")));
    }
    if x == 0.0 {
        return Ok(if order == 0.0 { 1.0 } else { 0.0 });
    }
    if order < 0.0 && order.fract() == 0.0 {
        let n = -order;
        let v = bessel_j(n, x)?;
        return Ok(if (n as i64) % 2 == 0 { v } else { -v });
    }
    if x < SERIES_LIMIT || x < order {
        return series(order, x);
    }
    if let Some(v) = hankel(order, x) {
        return Ok(v);
    }
    if order < 0.0 {
        return Err(NumError::Domain(format!("bessel_j order {order} at x={x}")));
    }
    // forward recurrence from the fractional order, stable while k < x
    let nu0 = order.fract();
    let mut j0 = hankel(nu0, x).ok_or_else(|| NumError::Domain("hankel start".into()))?;
    let mut j1 = hankel(nu0 + 1.0, x).ok_or_else(|| NumError::Domain("hankel start".into()))?;
    let steps = (order - nu0).round() as usize;
    if steps == 0 {
        return Ok(j0);
    }
    for k in 1..steps {
        let nu = nu0 + k as f64;
        let j2 = 2.0 * nu / x * j1 - j0;
        j0 = j1;
        j1 = j2;
    }
    Ok(j1)
}

/// d/dx J_order(x) via (J_{v-1} - J_{v+1})/2.
pub fn bessel_j_deriv(order: f64, x: f64) -> Result<f64> {
    Ok(0.5 * (bessel_j(order - 1.0, x)? - bessel_j(order + 1.0, x)?))
}

fn tail_length(decay_rate: f64) -> f64 {
    // smallest s with decay_rate * (cosh(s) - 1) >= 45
    (1.0 + 45.0 / decay_rate).acosh() + 0.5
}

/// (-pi/sin(pi i mu) (J_{2i mu}(x) - J_{-2i mu}(x)), 4 cosh(pi mu) K_{2i mu}(x)).
///
/// Both components are integrals of the form int e^{(-/i) x cosh t} e^{2 i mu t} dt
/// taken along contours shifted into the complex t-plane, so neither the
/// exponentially large cosh(pi mu) nor the exponentially small K is formed.
pub fn bessel_combo_maass(mu: f64, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !(mu > 0.0) || !mu.is_finite() || !x.is_finite() {
        return Err(NumError::Domain(format!("bessel_combo_maass(mu={mu}, x={x})")));
    }
    Ok((j_combo(mu, x)?, k_combo(mu, x)?))
}

/// 4 int_0^inf cos(x cosh t) cos(2 mu t) dt on t = s + i alpha tanh(s).
fn j_combo(mu: f64, x: f64) -> Result<f64> {
    let alpha = (1.5 / mu).min(1.2);
    let f = |s: f64| {
        let th = s.tanh();
        let t = ComplexValue::new(s, alpha * th);
        let dt = ComplexValue::new(1.0, alpha * (1.0 - th * th));
        (ComplexValue::i() * (x * t.cosh() + 2.0 * mu * t)).exp() * dt
    };
    // |e^{i x cosh t}| = exp(-x sinh s sin(alpha tanh s))
    let mut s_max = 1.0f64;
    while x * s_max.sinh() * (alpha * s_max.tanh()).sin() < 45.0 {
        s_max += 0.25;
        if s_max > 80.0 {
            return Err(NumError::Budget("j_combo contour tail".into()));
        }
    }
    let pieces = ((x * s_max.cosh()) / 20.0).ceil().clamp(8.0, 20000.0) as usize;
    let r = crate::quadrature::integrate_split(&f, -s_max, s_max, 1e-14, pieces)?;
    Ok(2.0 * r.value.re)
}

/// 4 cosh(pi mu) int_0^inf e^{-x cosh t} cos(2 mu t) dt on Im t = beta.
fn k_combo(mu: f64, x: f64) -> Result<f64> {
    // past z = 2 mu the saddle of x cosh t - 2i mu t sits at t = i asin(2 mu / x);
    // a contour through it avoids the total cancellation a fixed shift leaves
    let beta = if x > 2.0 * mu { (2.0 * mu / x).asin() } else { PI / 2.0 - (1.5 / mu).min(PI / 2.0) };
    let (cb, sb) = (beta.cos(), beta.sin());
    let f = |s: f64| {
        let arg = 2.0 * mu * s - x * s.sinh() * sb;
        // e^{-x cos(beta)} is pulled out so the tolerance is relative
        ComplexValue::new((-x * (s.cosh() - 1.0) * cb).exp() * arg.cos(), 0.0)
    };
    let s_max = tail_length(x * cb);
    let pieces = ((x * sb * s_max.cosh() + 2.0 * mu * s_max) / 20.0).ceil().clamp(4.0, 20000.0) as usize;
    let r = crate::quadrature::integrate_split(&f, 0.0, s_max, 1e-15, pieces)?;
    // 4 cosh(pi mu) e^{-2 mu beta} e^{-x cos(beta)}
    let lead = -2.0 * mu * beta - x * cb;
    let pref = 2.0 * ((PI * mu + lead).exp() + (-PI * mu + lead).exp());
    Ok(pref * r.value.re)
}

/// K_{i r}(x) for real r >= 0 (plain cosine-transform integral, no shift);
/// used as an independent check at small order.
pub fn bessel_k_imag_order_direct(r: f64, x: f64) -> Result<f64> {
    let f = |t: f64| ComplexValue::new((-x * (t.cosh() - 1.0)).exp() * (r * t).cos(), 0.0);
    let t_max = tail_length(x);
    let pieces = ((r * t_max) / 10.0).ceil().clamp(4.0, 20000.0) as usize;
    Ok((-x).exp() * crate::quadrature::integrate_split(&f, 0.0, t_max, 1e-15, pieces)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j0_small_argument_limit() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!((bessel_j(0.0, 1e-8).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tabulated_values() {
        // J_0(1), J_1(10), J_0(30), J_11(1)
        let cases = [
            (0.0, 1.0, 0.765_197_686_557_966_6),
            (1.0, 10.0, 0.043_472_746_168_861_44),
            (0.0, 30.0, -0.086_367_983_581_040_2),
            (2.0, 100.0, -0.021_528_757_344_505_37),
        ];
        for (nu, x, v) in cases {
            let got = bessel_j(nu, x).unwrap();
            assert!((got - v).abs() <= 1e-9 * v.abs(), "J_{nu}({x}) = {got}, want {v}");
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for nu in [0.0, 0.5, 1.0, 3.0, 11.0, 15.0] {
            for x in [24.0, 26.0, 30.0] {
                let s = series(nu, x).unwrap();
                let b = bessel_j(nu, x).unwrap();
                assert!((s - b).abs() < 1e-12, "nu={nu} x={x} {s} {b}");
            }
        }
    }

    #[test]
    fn first_zero_of_j1() {
        let f = |x: f64| bessel_j(1.0, x).unwrap();
        let (mut lo, mut hi) = (3.8, 3.85);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if f(m) > 0.0 {
                lo = m;
            } else {
                hi = m;
            }
        }
        assert!((lo - 3.831_705_970_207_512).abs() < 1e-9);
        assert!(f(lo).abs() < 1e-6);
    }

    #[test]
    fn wronskian_one_third() {
        let nu = 1.0 / 3.0;
        for x in [0.5, 2.0, 7.0, 20.0, 40.0] {
            let w = bessel_j(nu, x).unwrap() * bessel_j_deriv(-nu, x).unwrap()
                - bessel_j(-nu, x).unwrap() * bessel_j_deriv(nu, x).unwrap();
            let want = -2.0 * (nu * PI).sin() / (PI * x);
            assert!(((w - want) / want).abs() < 1e-8, "x={x}");
        }
    }

    #[test]
    fn k0_at_one() {
        let v = bessel_k_imag_order_direct(0.0, 1.0).unwrap();
        assert!((v - 0.421_024_438_240_708_3).abs() < 1e-12);
        let (_, k) = bessel_combo_maass(1e-9, 1.0).unwrap();
        assert!((k / 4.0 - 0.421_024_438_240_708_3).abs() < 1e-10);
    }

    #[test]
    fn shifted_k_matches_direct_at_small_mu() {
        for (mu, x) in [(0.5, 0.3), (1.0, 2.0), (2.0, 5.0)] {
            let (_, k) = bessel_combo_maass(mu, x).unwrap();
            let d = 4.0 * (PI * mu).cosh() * bessel_k_imag_order_direct(2.0 * mu, x).unwrap();
            assert!(((k - d) / d).abs() < 1e-9, "mu={mu} x={x}: {k} vs {d}");
        }
    }

    #[test]
    fn modulated_forms_reproduce_kernels() {
        for &(nu, x) in &[(11.0, 150.0), (11.0, 900.0), (0.5, 40.0)] {
            let m = bessel_j_modulated(nu, x).unwrap();
            let j = (m * ComplexValue::from_polar(1.0, x)).re;
            assert!((j - bessel_j(nu, x).unwrap()).abs() < 1e-13, "{nu} {x}");
        }
        for &(mu, x) in &[(1.0, 120.0), (3.0, 400.0)] {
            let m = maass_plus_modulated(mu, x).unwrap();
            let k = (m * ComplexValue::from_polar(1.0, x)).re;
            let (plus, _) = bessel_combo_maass(mu, x).unwrap();
            assert!((k - plus).abs() < 1e-10 * plus.abs().max(0.1), "{mu} {x}: {k} {plus}");
        }
        let a = hankel_coefficients(4.0 * 121.0, 3);
        assert_eq!(a[0], 1.0);
        assert!((a[1] - 483.0 / 8.0).abs() < 1e-12);
    }
}
