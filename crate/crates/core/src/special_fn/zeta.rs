//! Riemann zeta to the right of Re s = 0.8 by Euler-Maclaurin.

use super::bernoulli;
use crate::{check_finite, ComplexValue, NumError, Result};

/// Euler-Maclaurin with `n` direct terms and `m` Bernoulli corrections.
pub fn zeta_em(s: ComplexValue, n: usize, m: usize) -> ComplexValue {
    let mut sum = ComplexValue::new(0.0, 0.0);
    for k in 1..n {
        sum += (-s * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let ln_n = nf.ln();
    let n_s = (-s * ln_n).exp();
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // B_{2k}/(2k)! s(s+1)...(s+2k-2) N^{-s-2k+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut npow = n_s / nf;
    for k in 1..=m {
        sum += bernoulli::b2(k) / fact * rising * npow;
        let a = (2 * k - 1) as f64;
        rising *= (s + a) * (s + a + 1.0);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
        npow /= nf * nf;
    }
    sum
}

/// zeta(s) for Re s >= 0.8, s != 1.
pub fn zeta_line(s: ComplexValue) -> Result<ComplexValue> {
    if s.re < 0.8 || !s.re.is_finite() || !s.im.is_finite() {
        return Err(NumError::Domain(format!("zeta_line needs Re s >= 0.8, got {s}")));
    }
    if s == ComplexValue::new(1.0, 0.0) {
        return Err(NumError::Pole("zeta at s=1".into()));
    }
    let n = (s.norm().ceil() as usize).max(30);
    check_finite(zeta_em(s, n, 30), "zeta_line")
}
