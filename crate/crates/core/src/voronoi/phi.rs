//! The Bessel transforms Phi_h, Phi_h^+- and their Hankel-type expansions.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use super::testfn::VoronoiTestFunction;
use crate::quadrature::{integrate_adaptive, integrate_oscillatory, OscillatoryIntegral, Scales};
use crate::special_fn::{bessel_combo_maass, bessel_j, bessel_j_modulated, hankel_coefficients, maass_plus_modulated};
use crate::{check_finite, ComplexValue, NumError, Result};

/// Absolute quadrature tolerance per unit amplitude.
pub const PHI_TOL: f64 = 1e-15;

fn i_pow(k: i64) -> ComplexValue {
    match k.rem_euclid(4) {
        0 => ComplexValue::new(1.0, 0.0),
        1 => ComplexValue::new(0.0, 1.0),
        2 => ComplexValue::new(-1.0, 0.0),
        _ => ComplexValue::new(0.0, -1.0),
    }
}

fn check_x(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(NumError::Domain(format!("transform argument x = {x}")))
    }
}

/// int h(y) K(4 pi sqrt(xy)) dy for a real kernel K = Re(M(z) e^{iz}).
/// The modulated form is used when it converges on the whole support,
/// otherwise K is integrated directly.
fn kernel_integral(
    x: f64,
    tf: &VoronoiTestFunction,
    modulated: impl Fn(f64) -> Option<ComplexValue> + Send + Sync + 'static,
    direct: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    let (a, b) = tf.support();
    let tol = PHI_TOL * tf.amplitude.abs().max(f64::MIN_POSITIVE);
    let w = 4.0 * PI * x.sqrt();
    if modulated(w * a.sqrt()).is_some() {
        let t = tf.clone();
        let amp = move |y: f64| {
            let m = modulated(w * y.sqrt()).unwrap_or(ComplexValue::new(f64::NAN, 0.0));
            m * t.h(y)
        };
        let sx = x.sqrt();
        let i = OscillatoryIntegral::new(
            std::sync::Arc::new(amp),
            std::sync::Arc::new(move |y: f64| 4.0 * PI * (sx * y.sqrt())),
            std::sync::Arc::new(move |y: f64| 2.0 * PI * sx / y.sqrt()),
            std::sync::Arc::new(move |y: f64| -PI * sx * y.powf(-1.5)),
            (a, b),
            Scales::new(b - a, 1.0, w * b.sqrt(), tf.amplitude.abs(), 2.0 * PI * sx / b.sqrt()),
        )?;
        return Ok(integrate_oscillatory(&i, tol)?.value.re);
    }
    let f = |y: f64| ComplexValue::new(tf.h(y) * direct(w * y.sqrt()).unwrap_or(f64::NAN), 0.0);
    // the direct kernels are themselves quadratures good to ~1e-14, so asking
    // for less than that only refines noise
    let peak = (0..=64).map(|k| f(a + (b - a) * k as f64 / 64.0).norm()).fold(0.0, f64::max);
    let v = integrate_adaptive(&f, a, b, tol.max(1e-13 * peak * (b - a)))?.value.re;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumError::NonFinite("Bessel kernel"))
    }
}

/// Phi_h(x) = 2 pi i^kappa int h(y) J_{kappa-1}(4 pi sqrt(xy)) dy.
pub fn phi_holomorphic(x: f64, tf: &VoronoiTestFunction, kappa: u32) -> Result<ComplexValue> {
    check_x(x)?;
    let nu = kappa as f64 - 1.0;
    let r = kernel_integral(x, tf, move |z| bessel_j_modulated(nu, z), |z| bessel_j(nu, z))?;
    check_finite(2.0 * PI * i_pow(kappa as i64) * r, "phi_holomorphic")
}

/// (Phi_h^+(x), Phi_h^-(x)) for a Maass form with spectral parameter mu and
/// reflection sign epsilon.
pub fn phi_maass(x: f64, tf: &VoronoiTestFunction, mu: f64, epsilon: i8) -> Result<(ComplexValue, ComplexValue)> {
    check_x(x)?;
    if !(mu > 0.0) || (epsilon != 1 && epsilon != -1) {
        return Err(NumError::Domain(format!("mu = {mu}, epsilon = {epsilon}")));
    }
    let plus = kernel_integral(x, tf, move |z| maass_plus_modulated(mu, z), |z| Ok(bessel_combo_maass(mu, z)?.0))?;
    // the K-Bessel part is not oscillatory and decays exponentially in z
    let (a, b) = tf.support();
    let w = 4.0 * PI * x.sqrt();
    let f = |y: f64| ComplexValue::new(tf.h(y) * bessel_combo_maass(mu, w * y.sqrt()).map(|v| v.1).unwrap_or(f64::NAN), 0.0);
    let peak = (0..=64).map(|k| f(a + (b - a) * k as f64 / 64.0).norm()).fold(0.0, f64::max);
    let minus = integrate_adaptive(&f, a, b, (1e-13 * peak * (b - a)).max(f64::MIN_POSITIVE))?.value.re;
    Ok((
        check_finite(ComplexValue::new(plus, 0.0), "phi_maass")?,
        check_finite(ComplexValue::new(epsilon as f64 * minus, 0.0), "phi_maass")?,
    ))
}

/// Coefficient pairs (c_j, d_j) of the expansion
/// x^{-1/4} int h(y) y^{-1/4} sum_j (c_j e(2 sqrt(xy)) + d_j e(-2 sqrt(xy))) / (xy)^{j/2} dy.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticCoefficients {
    pub c: Vec<ComplexValue>,
    pub d: Vec<ComplexValue>,
}

impl AsymptoticCoefficients {
    /// Kernel with J = Re(M e^{iz}), M = pre * sqrt(2/(pi z)) (P + iQ) e^{-i chi0};
    /// everything follows from the Hankel coefficients a_k.
    fn from_hankel(pre: ComplexValue, chi0: f64, mu4: f64, jmax: usize) -> Self {
        let a = hankel_coefficients(mu4, jmax);
        let mut c = Vec::with_capacity(jmax + 1);
        let mut d = Vec::with_capacity(jmax + 1);
        for (k, &ak) in a.iter().enumerate() {
            let s = ak * FRAC_1_SQRT_2 / (4.0 * PI).powi(k as i32);
            c.push(pre * ComplexValue::from_polar(1.0, -chi0) * i_pow(k as i64) * s);
            d.push(pre * ComplexValue::from_polar(1.0, chi0) * i_pow(-(k as i64)) * s);
        }
        AsymptoticCoefficients { c, d }
    }

    /// Holomorphic weight kappa: the kernel is 2 pi i^kappa J_{kappa-1}.
    pub fn holomorphic(kappa: u32, jmax: usize) -> Self {
        let nu = kappa as f64 - 1.0;
        Self::from_hankel(i_pow(kappa as i64), (nu / 2.0 + 0.25) * PI, 4.0 * nu * nu, jmax)
    }

    /// The + kernel of a Maass form, which has 4 nu^2 = -16 mu^2 and phase
    /// offset -pi/4.
    pub fn maass_plus(mu: f64, jmax: usize) -> Self {
        Self::from_hankel(ComplexValue::new(1.0, 0.0), -PI / 4.0, -16.0 * mu * mu, jmax)
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }
}

/// The truncated expansion through order j_max.
pub fn phi_asymptotic(x: f64, tf: &VoronoiTestFunction, j_max: usize, coeffs: &AsymptoticCoefficients) -> Result<ComplexValue> {
    if !(x >= 10.0) || !x.is_finite() {
        return Err(NumError::Domain(format!("asymptotic expansion needs x >= 10, got {x}")));
    }
    if j_max >= coeffs.len() {
        return Err(NumError::Domain(format!("order {j_max} beyond {} tabulated coefficients", coeffs.len())));
    }
    let (a, b) = tf.support();
    let sx = x.sqrt();
    let mut total = ComplexValue::new(0.0, 0.0);
    for (sign, table) in [(1.0, &coeffs.c), (-1.0, &coeffs.d)] {
        let t = tf.clone();
        let cs: Vec<ComplexValue> = table[..=j_max].to_vec();
        let amp = move |y: f64| {
            let r = 1.0 / (x * y).sqrt();
            let mut s = ComplexValue::new(0.0, 0.0);
            let mut p = 1.0;
            for c in &cs {
                s += c * p;
                p *= r;
            }
            s * t.h(y) * y.powf(-0.25)
        };
        let i = OscillatoryIntegral::new(
            std::sync::Arc::new(amp),
            std::sync::Arc::new(move |y: f64| sign * 4.0 * PI * sx * y.sqrt()),
            std::sync::Arc::new(move |y: f64| sign * 2.0 * PI * sx / y.sqrt()),
            std::sync::Arc::new(move |y: f64| -sign * PI * sx * y.powf(-1.5)),
            (a, b),
            Scales::new(b - a, 1.0, 4.0 * PI * sx * b.sqrt(), 1.0, 2.0 * PI * sx / b.sqrt()),
        )?;
        total += integrate_oscillatory(&i, PHI_TOL * tf.amplitude.abs().max(f64::MIN_POSITIVE))?.value;
    }
    check_finite(total * x.powf(-0.25), "phi_asymptotic")
}

/// Many evaluations of R(x) = int h(y) J_nu(4 pi sqrt(xy)) dy for the dual
/// sum. In u = sqrt(y) the integrand 2u h(u^2) J_nu(w u) is smooth and
/// compactly supported, so the trapezoid rule converges faster than any
/// power once the node spacing resolves w plus a guard band for the
/// Fourier tail of the weight.
#[derive(Clone, Debug)]
pub struct DualKernel {
    tf: VoronoiTestFunction,
    nu: f64,
    pub guard: f64,
}

/// Extra angular frequency resolved beyond w; checked against the adaptive
/// transform in the tests.
pub const TRAPEZOID_GUARD: f64 = 2400.0;

impl DualKernel {
    pub fn holomorphic(tf: &VoronoiTestFunction, kappa: u32) -> Self {
        DualKernel { tf: tf.clone(), nu: kappa as f64 - 1.0, guard: TRAPEZOID_GUARD }
    }

    pub fn with_guard(mut self, guard: f64) -> Self {
        self.guard = guard;
        self
    }

    pub fn nodes(&self, x: f64) -> usize {
        let (a, b) = self.tf.support();
        let w = 4.0 * PI * x.sqrt();
        ((b.sqrt() - a.sqrt()) * (w + self.guard) / (2.0 * PI)).ceil() as usize + 1
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        let (a, b) = self.tf.support();
        let (ua, ub) = (a.sqrt(), b.sqrt());
        let w = 4.0 * PI * x.sqrt();
        let n = self.nodes(x);
        let du = (ub - ua) / n as f64;
        let mut s = 0.0;
        if bessel_j_modulated(self.nu, w * ua).is_some() {
            let rot = ComplexValue::from_polar(1.0, w * du);
            let mut e = ComplexValue::new(1.0, 0.0);
            for j in 1..n {
                let u = ua + j as f64 * du;
                if j % 128 == 1 {
                    e = ComplexValue::from_polar(1.0, w * u);
                } else {
                    e *= rot;
                }
                let m = bessel_j_modulated(self.nu, w * u).ok_or(NumError::Domain("Hankel branch".into()))?;
                s += 2.0 * u * self.tf.h(u * u) * (m * e).re;
            }
        } else {
            for j in 1..n {
                let u = ua + j as f64 * du;
                s += 2.0 * u * self.tf.h(u * u) * bessel_j(self.nu, w * u)?;
            }
        }
        let v = s * du;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumError::NonFinite("dual kernel"))
        }
    }
}
