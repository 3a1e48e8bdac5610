//! Complex log-gamma, the Stirling expansion of Gamma on vertical lines and
//! the Voronoi gamma factor built from it.

use super::bernoulli;
use crate::{check_finite, ComplexValue, NumError, Result};
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Radius beyond which the Stirling branch replaces Lanczos.
pub const STIRLING_SWITCH: f64 = 20.0;
/// Correction terms used by the Stirling branch of [`ln_gamma`].
pub const STIRLING_TERMS: usize = 12;

/// Truncation order of the vertical-line Stirling expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StirlingConfig {
    pub k2: usize,
}

impl StirlingConfig {
    pub fn new(k2: usize) -> Result<Self> {
        if k2 > bernoulli::MAX_INDEX / 2 {
            return Err(NumError::Domain(format!("K2={k2} exceeds Bernoulli table")));
        }
        Ok(StirlingConfig { k2 })
    }
}

impl Default for StirlingConfig {
    fn default() -> Self {
        StirlingConfig { k2: 8 }
    }
}

fn is_pole(z: ComplexValue) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

fn lanczos(z: ComplexValue) -> ComplexValue {
    let z = z - 1.0;
    let mut a = ComplexValue::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + a.ln()
}

/// Classical Stirling series for log Gamma with `terms` Bernoulli corrections.
pub fn ln_gamma_asymptotic(z: ComplexValue, terms: usize) -> ComplexValue {
    let mut acc = (z - 0.5) * z.ln() - z + LN_SQRT_2PI;
    let z2inv = 1.0 / (z * z);
    let mut zpow = 1.0 / z;
    for j in 1..=terms {
        let b = bernoulli::b2(j);
        acc += b / ((2 * j) as f64 * (2 * j - 1) as f64) * zpow;
        zpow *= z2inv;
    }
    acc
}

fn ln_gamma_right(z: ComplexValue) -> ComplexValue {
    if z.im.abs() >= STIRLING_SWITCH || z.norm() >= STIRLING_SWITCH {
        ln_gamma_asymptotic(z, STIRLING_TERMS)
    } else {
        lanczos(z)
    }
}

/// Principal branch of log Gamma(z).
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(NumError::NonFinite("ln_gamma argument"));
    }
    if is_pole(z) {
        return Err(NumError::Pole(format!("{z}")));
    }
    if z.re >= 0.5 {
        return check_finite(ln_gamma_right(z), "ln_gamma");
    }
    // shift right; summing individual logs keeps the principal branch
    let n = (0.5 - z.re).ceil() as usize;
    let mut shift = ComplexValue::new(0.0, 0.0);
    for k in 0..n {
        shift += (z + k as f64).ln();
    }
    check_finite(ln_gamma_right(z + n as f64) - shift, "ln_gamma")
}

pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    Ok(ln_gamma(z)?.exp())
}

/// Power series in w = 1/(i tau) of log Gamma(sigma + i tau) minus its
/// leading terms; index m holds the coefficient of w^m.
fn log_correction_series(sigma: f64, order: usize) -> Vec<f64> {
    // ln(1 + sigma w) = sum l_k w^k
    let l = |k: usize| -> f64 {
        if k == 0 {
            0.0
        } else {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * sigma.powi(k as i32) / k as f64
        }
    };
    let mut e = vec![0.0; order + 1];
    for (m, em) in e.iter_mut().enumerate().skip(1) {
        *em = l(m + 1) + (sigma - 0.5) * l(m);
    }
    // B_{2j}/(2j(2j-1)) w^{2j-1} (1 + sigma w)^{-(2j-1)}
    let mut j = 1;
    while 2 * j - 1 <= order {
        let b = bernoulli::b2(j) / ((2 * j) as f64 * (2 * j - 1) as f64);
        let n = 2 * j - 1;
        let mut binom = 1.0;
        for k in 0..=(order - n) {
            if k > 0 {
                binom *= -((n + k - 1) as f64) / k as f64;
            }
            e[n + k] += b * binom * sigma.powi(k as i32);
        }
        j += 1;
    }
    e
}

/// Coefficients c_1..c_K of the vertical-line Stirling expansion.
pub fn stirling_coefficients(sigma: f64, k2: usize) -> Vec<ComplexValue> {
    let e = log_correction_series(sigma, k2);
    // f = exp(e), f_n = (1/n) sum k e_k f_{n-k}
    let mut f = vec![0.0; k2 + 1];
    f[0] = 1.0;
    for n in 1..=k2 {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += k as f64 * e[k] * f[n - k];
        }
        f[n] = acc / n as f64;
    }
    // w^m = (-i)^m tau^{-m}
    let mut rot = ComplexValue::new(1.0, 0.0);
    let mut out = Vec::with_capacity(k2);
    for fm in f.iter().skip(1) {
        rot *= ComplexValue::new(0.0, -1.0);
        out.push(rot * *fm);
    }
    out
}

fn stirling_leading_log(sigma: f64, tau: f64) -> ComplexValue {
    let lt = tau.abs().ln();
    let ln_itau = ComplexValue::new(lt, PI / 2.0 * tau.signum());
    LN_SQRT_2PI + (sigma - 0.5) * ln_itau + ComplexValue::new(-PI * tau.abs() / 2.0, tau * (lt - 1.0))
}

fn stirling_log_unchecked(sigma: f64, tau: f64, k2: usize) -> ComplexValue {
    let c = stirling_coefficients(sigma, k2);
    let mut corr = ComplexValue::new(1.0, 0.0);
    let mut tp = 1.0;
    for cj in &c {
        tp /= tau;
        corr += cj * tp;
    }
    stirling_leading_log(sigma, tau) + corr.ln()
}

/// log of the truncated vertical-line Stirling form of Gamma(sigma + i tau).
pub fn ln_gamma_stirling(sigma: f64, tau: f64, cfg: StirlingConfig) -> Result<ComplexValue> {
    if !(tau.abs() >= 2.0) {
        return Err(NumError::Domain(format!("|tau|={} < 2", tau.abs())));
    }
    check_finite(stirling_log_unchecked(sigma, tau, cfg.k2), "ln_gamma_stirling")
}

/// sqrt(2 pi)(i tau)^{sigma-1/2} e^{-pi|tau|/2}(|tau|/e)^{i tau}(1 + sum c_j tau^{-j}).
pub fn gamma_stirling(sigma: f64, tau: f64, cfg: StirlingConfig) -> Result<ComplexValue> {
    Ok(ln_gamma_stirling(sigma, tau, cfg)?.exp())
}

/// The pair exactly as displayed: two products of Gamma ratios, added and
/// subtracted. Loses all relative accuracy in gamma^+ once |tau| exceeds mu
/// by more than a few units, because the two products cancel.
pub fn gamma_factor_display(s: ComplexValue, mu: f64) -> Result<(ComplexValue, ComplexValue)> {
    let (sigma, tau) = (s.re, s.im);
    let lg = |re: f64, im: f64| ln_gamma(ComplexValue::new(re, im));
    let mut p1 = ComplexValue::new(0.0, 0.0);
    let mut p2 = ComplexValue::new(0.0, 0.0);
    for sign in [1.0, -1.0] {
        let u = tau + sign * mu;
        p1 += lg((1.0 + sigma) / 2.0, u / 2.0)? - lg(-sigma / 2.0, -u / 2.0)?;
        p2 += lg((2.0 + sigma) / 2.0, u / 2.0)? - lg((1.0 - sigma) / 2.0, -u / 2.0)?;
    }
    let (a, b) = (p1.exp(), p2.exp());
    Ok((check_finite(a + b, "gamma_factor")?, check_finite(a - b, "gamma_factor")?))
}

/// log cos(pi s), stable for large |Im s|.
fn ln_cos_pi(s: ComplexValue) -> ComplexValue {
    let i = ComplexValue::i();
    // pick the dominant exponential
    let w = if s.im >= 0.0 { -i * PI * s } else { i * PI * s };
    let rest = (-2.0 * w).exp();
    w + ((1.0 + rest) / 2.0).ln()
}

fn ln_cosh_pi(mu: f64) -> f64 {
    let a = PI * mu.abs();
    a + ((1.0 + (-2.0 * a).exp()) / 2.0).ln()
}

/// Reflection and duplication reduce the display to
/// gamma^+ = 2^{-2s} cosh(pi mu) Gamma(1+s+i mu) Gamma(1+s-i mu) / pi and
/// gamma^- = -2^{-2s} cos(pi s) Gamma(1+s+i mu) Gamma(1+s-i mu) / pi.
fn gamma_factor_reduced(
    s: ComplexValue,
    mu: f64,
    lg: &dyn Fn(f64, f64) -> Result<ComplexValue>,
) -> Result<(ComplexValue, ComplexValue)> {
    let base = -2.0 * s * std::f64::consts::LN_2 - PI.ln() + lg(1.0 + s.re, s.im + mu)? + lg(1.0 + s.re, s.im - mu)?;
    let plus = (base + ln_cosh_pi(mu)).exp();
    let minus = -(base + ln_cos_pi(s)).exp();
    Ok((check_finite(plus, "gamma_factor")?, check_finite(minus, "gamma_factor")?))
}

/// The pair (gamma^+(s), gamma^-(s)) of the Mellin-Barnes Voronoi formula.
pub fn gamma_factor(s: ComplexValue, mu: f64) -> Result<(ComplexValue, ComplexValue)> {
    for sign in [1.0, -1.0] {
        for (re, im) in [
            ((1.0 + s.re) / 2.0, (s.im + sign * mu) / 2.0),
            (-s.re / 2.0, -(s.im + sign * mu) / 2.0),
            ((2.0 + s.re) / 2.0, (s.im + sign * mu) / 2.0),
            ((1.0 - s.re) / 2.0, -(s.im + sign * mu) / 2.0),
        ] {
            if is_pole(ComplexValue::new(re, im)) {
                return Err(NumError::Pole(format!("gamma factor at s={s}, mu={mu}")));
            }
        }
    }
    gamma_factor_reduced(s, mu, &|re, im| ln_gamma(ComplexValue::new(re, im)))
}

/// Same pair with each Gamma(1 + s +- i mu) replaced by its vertical-line
/// Stirling form.
pub fn gamma_factor_asymptotic(
    sigma: f64,
    tau: f64,
    mu: f64,
    cfg: StirlingConfig,
) -> Result<(ComplexValue, ComplexValue)> {
    if (tau + mu).abs() < 2.0 || (tau - mu).abs() < 2.0 {
        return Err(NumError::Domain(format!("|tau +- mu| < 2 at tau={tau}, mu={mu}")));
    }
    let k2 = cfg.k2;
    gamma_factor_reduced(ComplexValue::new(sigma, tau), mu, &|re, im| {
        Ok(stirling_log_unchecked(re, im, k2))
    })
}

/// Oscillatory phase sum_j u_j log(|u_j|/2e), u_j = tau +- mu, carried by
/// both gamma products.
pub fn gamma_factor_phase(tau: f64, mu: f64) -> f64 {
    [tau + mu, tau - mu]
        .iter()
        .map(|&u| u * (u.abs() / (2.0 * std::f64::consts::E)).ln())
        .sum()
}

/// (|tau+mu||tau-mu|)^{sigma+1/2}.
pub fn gamma_factor_envelope(sigma: f64, tau: f64, mu: f64) -> f64 {
    ((tau + mu).abs() * (tau - mu).abs()).powf(sigma + 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexValue {
        ComplexValue::new(re, im)
    }

    #[test]
    fn half_and_one() {
        let v = ln_gamma(c(0.5, 0.0)).unwrap();
        assert!((v.re - 0.5 * PI.ln()).abs() < 1e-14 && v.im.abs() < 1e-15);
        assert!(ln_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(ln_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn poles_are_errors() {
        for k in 0..5 {
            assert!(matches!(ln_gamma(c(-(k as f64), 0.0)), Err(NumError::Pole(_))));
        }
        assert!(ln_gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn factorials() {
        let mut f = 1.0f64;
        for n in 1..30 {
            f *= n as f64;
            let v = ln_gamma(c(n as f64 + 1.0, 0.0)).unwrap();
            assert!((v.re - f.ln()).abs() <= 1e-13 * f.ln().max(1.0), "n={n}");
        }
    }

    #[test]
    fn negative_real_axis() {
        // Gamma(-1/2) = -2 sqrt(pi)
        let v = ln_gamma(c(-0.5, 0.0)).unwrap().exp();
        assert!((v.re + 2.0 * PI.sqrt()).abs() < 1e-13 && v.im.abs() < 1e-13);
    }

    #[test]
    fn branch_overlap_agrees() {
        for k in 0..64 {
            let th = -PI / 2.0 + PI * k as f64 / 63.0;
            for r in [20.5, 22.0, 25.0] {
                let z = ComplexValue::from_polar(r, th) + 0.5;
                let a = lanczos(z);
                let b = ln_gamma_asymptotic(z, STIRLING_TERMS);
                assert!((a - b).norm() <= 1e-12 * b.norm(), "z={z} diff={}", (a - b).norm());
            }
        }
    }

    #[test]
    fn stirling_coefficients_sigma_half() {
        // Gamma(1/2 + i tau) expansion: c_1 = -i/24 * (-1)... check via exact value instead
        let cfg = StirlingConfig::new(8).unwrap();
        for &tau in &[20.0, 50.0, -37.0] {
            let exact = ln_gamma(c(0.5, tau)).unwrap();
            let approx = ln_gamma_stirling(0.5, tau, cfg).unwrap();
            let d = (exact - approx).exp() - 1.0;
            assert!(d.norm() < 1e-10, "tau={tau} d={}", d.norm());
        }
    }

    #[test]
    fn stirling_domain() {
        let cfg = StirlingConfig::default();
        assert!(matches!(gamma_stirling(0.5, 1.5, cfg), Err(NumError::Domain(_))));
        assert!(StirlingConfig::new(31).is_err());
    }

    #[test]
    fn stirling_edge_leading_term() {
        let cfg = StirlingConfig::new(0).unwrap();
        let a = gamma_stirling(0.5, 2.0, cfg).unwrap();
        let e = gamma(c(0.5, 2.0)).unwrap();
        assert!(((a - e) / e).norm() <= 0.25);
    }

    #[test]
    fn stirling_modulus_reflection() {
        let cfg = StirlingConfig::default();
        let a = gamma_stirling(0.0, -50.0, cfg).unwrap().norm();
        let b = gamma_stirling(0.0, 50.0, cfg).unwrap().norm();
        assert!((a / b - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gamma_factor_reflection() {
        let (p, m) = gamma_factor(c(0.3, 7.0), 4.0).unwrap();
        let (pc, mc) = gamma_factor(c(0.3, -7.0), 4.0).unwrap();
        assert!((pc - p.conj()).norm() < 1e-12 * p.norm());
        assert!((mc - m.conj()).norm() < 1e-12 * m.norm());
    }

    #[test]
    fn gamma_factor_paths_agree() {
        let cfg = StirlingConfig::new(12).unwrap();
        for mu in [5.0, 0.0] {
            let (p, m) = gamma_factor(c(-0.5, 200.0), mu).unwrap();
            let (pa, ma) = gamma_factor_asymptotic(-0.5, 200.0, mu, cfg).unwrap();
            assert!((p - pa).norm() < 1e-6 * p.norm(), "mu={mu}");
            assert!((m - ma).norm() < 1e-6 * m.norm(), "mu={mu}");
        }
    }

    #[test]
    fn gamma_factor_envelope_examples() {
        let cfg = StirlingConfig::default();
        // gamma^+ carries an extra e^{-pi(|tau|-mu)} once |tau| > mu, so only
        // the upper envelope applies to it
        let (p, m) = gamma_factor_asymptotic(-0.5, 100.0, 10.0, cfg).unwrap();
        assert!((0.1..=10.0).contains(&m.norm()));
        assert!(p.norm() <= 10.0);
        let (p, m) = gamma_factor(c(0.0, 100.0), 10.0).unwrap();
        let env = (110.0f64 * 90.0).sqrt();
        assert!((0.05..=20.0).contains(&(m.norm() / env)));
        assert!(p.norm() / env <= 20.0);
        let mu = 9.533695;
        for tau in [3.0, 30.0] {
            let (p, m) = gamma_factor(c(-0.5, tau), mu).unwrap();
            assert!(p.norm().max(m.norm()) <= 10.0 * gamma_factor_envelope(-0.5, tau, mu));
        }
        assert!(gamma_factor_asymptotic(-0.5, 11.0, 10.0, cfg).is_err());
    }
}
