//! Globally adaptive Gauss-Kronrod (7, 15) integration of complex integrands.

use crate::{ComplexValue, NumError, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod (node, weight) pairs mapped to [a, b], for fixed composite
/// rules over vector-valued integrands.
pub fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64); 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(c, WGK[7] * h); 15];
    for j in 0..7 {
        out[2 * j] = (c - h * XGK[j], WGK[j] * h);
        out[2 * j + 1] = (c + h * XGK[j], WGK[j] * h);
    }
    out
}

/// Default subdivision budget.
pub const DEFAULT_MAX_PANELS: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureResult {
    pub value: ComplexValue,
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    pub fn zero() -> Self {
        QuadratureResult { value: ComplexValue::new(0.0, 0.0), error_estimate: 0.0, evaluations: 0 }
    }

    pub fn accumulate(&mut self, other: &QuadratureResult) {
        self.value += other.value;
        self.error_estimate += other.error_estimate;
        self.evaluations += other.evaluations;
    }

    pub fn scaled(mut self, c: ComplexValue) -> Self {
        self.value *= c;
        self.error_estimate *= c.norm();
        self
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: ComplexValue,
    err: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// One 15-point Kronrod panel: (kronrod value, |K - G|, integral of |f|).
fn kronrod<F: Fn(f64) -> ComplexValue + ?Sized>(f: &F, a: f64, b: f64) -> Result<(ComplexValue, f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let f1 = f(c - h * x);
        let f2 = f(c + h * x);
        let s = f1 + f2;
        k += s * WGK[j];
        abs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    let k = k * h;
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(NumError::NonFinite("integrand"));
    }
    Ok((k, (k - g * h).norm(), abs * h.abs()))
}

/// Adaptive integration with an explicit panel budget.
pub fn integrate_adaptive_with<F: Fn(f64) -> ComplexValue + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<QuadratureResult> {
    if a == b && a.is_finite() {
        return Ok(QuadratureResult::zero());
    }
    integrate_panels(f, &[(a, b)], tol, max_panels)
}

/// Global adaptive integration over a union of initial panels; the
/// tolerance applies to the total, not to each panel.
pub fn integrate_panels<F: Fn(f64) -> ComplexValue + ?Sized>(
    f: &F,
    initial: &[(f64, f64)],
    tol: f64,
    max_panels: usize,
) -> Result<QuadratureResult> {
    integrate_panels_noisy(f, initial, tol, max_panels, f64::EPSILON)
}

/// As [`integrate_panels`], for integrands whose evaluation carries a known
/// relative noise level (e.g. eps * |phase| for e^{i phase}); panels whose
/// Kronrod/Gauss gap is below that level are not refined further.
pub fn integrate_panels_noisy<F: Fn(f64) -> ComplexValue + ?Sized>(
    f: &F,
    initial: &[(f64, f64)],
    tol: f64,
    max_panels: usize,
    noise_rel: f64,
) -> Result<QuadratureResult> {
    let noise = noise_rel.max(f64::EPSILON);
    if !(tol > 0.0) || initial.iter().any(|&(a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(NumError::Domain(format!("bad quadrature request tol={tol}")));
    }
    // panels whose Kronrod/Gauss gap is at the rounding level are frozen
    let roundoff = |e: f64, s: f64| e <= 100.0 * noise * s;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut total = ComplexValue::new(0.0, 0.0);
    let (mut err, mut abs) = (0.0, 0.0);
    let mut evals = 0usize;
    for &(a, b) in initial {
        if a == b {
            continue;
        }
        let (v, e, s) = kronrod(f, a, b)?;
        evals += 15;
        total += v;
        abs += s;
        if roundoff(e, s) {
            frozen.push(Panel { a, b, value: v, err: e, abs: s });
        } else {
            err += e;
            heap.push(Panel { a, b, value: v, err: e, abs: s });
        }
    }
    let mut panels = initial.len();
    let lo = initial.iter().map(|p| p.0.min(p.1)).fold(f64::INFINITY, f64::min);
    let hi = initial.iter().map(|p| p.0.max(p.1)).fold(f64::NEG_INFINITY, f64::max);
    loop {
        let target = (tol * total.norm()).max(tol).max(64.0 * noise * abs);
        if err <= target {
            break;
        }
        if panels >= max_panels {
            return Err(NumError::Budget(format!(
                "quadrature on [{lo}, {hi}] did not converge in {max_panels} panels (err {err:e}, target {target:e})"
            )));
        }
        let p = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a.min(p.b) || m >= p.a.max(p.b) {
            err -= p.err;
            frozen.push(p);
            continue;
        }
        let (v1, e1, s1) = kronrod(f, p.a, m)?;
        let (v2, e2, s2) = kronrod(f, m, p.b)?;
        evals += 30;
        panels += 1;
        total += v1 + v2 - p.value;
        err -= p.err;
        abs += s1 + s2 - p.abs;
        for q in [
            Panel { a: p.a, b: m, value: v1, err: e1, abs: s1 },
            Panel { a: m, b: p.b, value: v2, err: e2, abs: s2 },
        ] {
            if roundoff(q.err, q.abs) {
                frozen.push(q);
            } else {
                err += q.err;
                heap.push(q);
            }
        }
        if panels % 64 == 0 {
            // re-sum to shed accumulated rounding in the running totals
            total = heap.iter().chain(frozen.iter()).map(|q| q.value).sum();
            err = heap.iter().map(|q| q.err).sum();
        }
    }
    let total: ComplexValue = heap.iter().chain(frozen.iter()).map(|q| q.value).sum();
    let err: f64 = heap.iter().chain(frozen.iter()).map(|q| q.err).sum();
    Ok(QuadratureResult { value: total, error_estimate: err, evaluations: evals })
}

/// Adaptive Gauss-Kronrod integration of `f` over [a, b] with the default budget.
pub fn integrate_adaptive<F: Fn(f64) -> ComplexValue + ?Sized>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, a, b, tol, DEFAULT_MAX_PANELS)
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: Fn(f64) -> f64 + ?Sized>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    Ok(integrate_adaptive(&|x| ComplexValue::new(f(x), 0.0), a, b, tol)?.value.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> ComplexValue {
        move |x| ComplexValue::new(f(x), 0.0)
    }

    #[test]
    fn polynomial_exact_single_panel() {
        for deg in 0..=10 {
            let f = re(move |x: f64| (deg as f64 + 1.0) * x.powi(deg));
            let r = integrate_adaptive(&f, 0.0, 1.0, 1e-14).unwrap();
            assert!((r.value.re - 1.0).abs() < 1e-14, "deg={deg}");
            assert_eq!(r.evaluations, 15);
        }
    }

    #[test]
    fn trivial_examples() {
        let r = integrate_adaptive(&re(|x| x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value.re - 1.0 / 3.0).abs() < 1e-14);
        let r = integrate_adaptive(&re(f64::sin), 0.0, PI, 1e-12).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-12);
        let e50 = |x: f64| ComplexValue::from_polar(1.0, 2.0 * PI * 50.0 * x);
        let r = integrate_adaptive(&e50, 0.0, 1.0, 1e-13).unwrap();
        assert!(r.value.norm() < 1e-12);
        assert!(r.error_estimate >= 0.0);
    }

    #[test]
    fn budget_error() {
        let f = re(|x: f64| (1.0 / x).sin());
        let r = integrate_adaptive_with(&f, 1e-9, 1.0, 1e-14, 8);
        assert!(matches!(r, Err(NumError::Budget(_))));
    }

    #[test]
    fn reversed_interval() {
        let r = integrate_adaptive(&re(|x| x), 1.0, 0.0, 1e-12).unwrap();
        assert!((r.value.re + 0.5).abs() < 1e-14);
    }
}
