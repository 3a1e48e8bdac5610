//! Measured checks of the exponential-integral lemmas on model families.

use super::bump::{bump_on, BUMP_TOTAL_VARIATION};
use super::oscillatory::{
    first_derivative_bound, integrate_oscillatory, second_derivative_bound, stationary_phase_main_term,
    uniform, OscillatoryIntegral, Scales,
};
use crate::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct ErrorFit {
    /// (Y, relative error of the main term)
    pub points: Vec<(f64, f64)>,
    /// max over points of rel_err * Y
    pub constant: f64,
}

/// The model family amplitude = bump on [1/2, 3/2], phase = Y (x + 1/x).
pub fn model_family(y: f64) -> Result<OscillatoryIntegral> {
    OscillatoryIntegral::real_amplitude(
        |x| bump_on(x, 0.5, 1.5),
        move |x| y * (x + 1.0 / x),
        move |x| y * (1.0 - 1.0 / (x * x)),
        move |x| 2.0 * y / (x * x * x),
        (0.5, 1.5),
        Scales::new(1.0, 1.0, y, 1.0, y),
    )
}

/// Relative main-term error against quadrature, scaled by Y.
pub fn stationary_phase_error_fit(ys: &[f64]) -> Result<ErrorFit> {
    let mut points = Vec::new();
    let mut constant: f64 = 0.0;
    for &y in ys {
        let i = model_family(y)?;
        let main = stationary_phase_main_term(&i)?;
        let quad = integrate_oscillatory(&i, 1e-11)?.value;
        let rel = (main - quad).norm() / main.norm();
        constant = constant.max(rel * y);
        points.push((y, rel));
    }
    Ok(ErrorFit { points, constant })
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeCase {
    pub q_len: f64,
    pub y: f64,
    pub z: f64,
    pub r: f64,
    pub measured: f64,
    pub first_bound: f64,
    pub second_bound: f64,
    pub first_ratio: f64,
    pub second_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DerivativeSuite {
    pub seed: u64,
    pub cases: Vec<DerivativeCase>,
    pub worst_first_ratio: f64,
    pub worst_second_ratio: f64,
}

/// Exponent used for the first-derivative bound in the randomized suite.
pub const SUITE_A: f64 = 1.0;

/// Randomized first/second derivative test suite: amplitude Z * bump on
/// [1, 1 + Q], phase R (x-1) + k Y ((x-1)/Q)^2 with k in [0.1, 1], so that
/// phase' >= R and phase'' = 2kY/Q^2.
pub fn derivative_test_suite(seed: u64, n: usize) -> Result<DerivativeSuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid_q = [0.5, 1.0, 2.0];
    let grid_z = [0.5, 1.0, 2.0];
    let grid_r = [10.0, 30.0, 100.0, 300.0];
    let grid_y = [1.0, 10.0, 100.0];
    let pick = |rng: &mut ChaCha8Rng, g: &[f64]| g[(uniform(rng, 0.0, g.len() as f64) as usize).min(g.len() - 1)];
    let mut cases = Vec::with_capacity(n);
    let (mut wf, mut ws): (f64, f64) = (0.0, 0.0);
    for _ in 0..n {
        let q = pick(&mut rng, &grid_q);
        let z = pick(&mut rng, &grid_z);
        let r = pick(&mut rng, &grid_r);
        let y = r * pick(&mut rng, &grid_y);
        let k = uniform(&mut rng, 0.1, 1.0);
        let a = 1.0;
        let i = OscillatoryIntegral::real_amplitude(
            move |x| z * bump_on(x, a, a + q),
            move |x| r * (x - a) + k * y * ((x - a) / q).powi(2),
            move |x| r + 2.0 * k * y * (x - a) / (q * q),
            move |_| 2.0 * k * y / (q * q),
            (a, a + q),
            Scales::new(q, q, y, z, r),
        )?;
        let measured = integrate_oscillatory(&i, 1e-12)?.value.norm();
        let first_bound = first_derivative_bound(&i, SUITE_A)?;
        let v0 = z * (BUMP_TOTAL_VARIATION + 1.0);
        let second_bound = second_derivative_bound(v0, 2.0 * k * y / (q * q))?;
        let case = DerivativeCase {
            q_len: q,
            y,
            z,
            r,
            measured,
            first_bound,
            second_bound,
            first_ratio: measured / first_bound,
            second_ratio: measured / second_bound,
        };
        wf = wf.max(case.first_ratio);
        ws = ws.max(case.second_ratio);
        cases.push(case);
    }
    Ok(DerivativeSuite { seed, cases, worst_first_ratio: wf, worst_second_ratio: ws })
}

/// |int bump(x) e(Y x) dx| over [0, 1] for each Y.
pub fn bump_fourier_decay(ys: &[f64]) -> Result<Vec<(f64, f64)>> {
    ys.iter()
        .map(|&y| {
            let w = 2.0 * std::f64::consts::PI * y;
            let i = OscillatoryIntegral::real_amplitude(
                |x| bump_on(x, 0.0, 1.0),
                move |x| w * x,
                move |_| w,
                |_| 0.0,
                (0.0, 1.0),
                Scales::new(1.0, 1.0, w, 1.0, w),
            )?;
            Ok((y, integrate_oscillatory(&i, 1e-16)?.value.norm()))
        })
        .collect()
}
