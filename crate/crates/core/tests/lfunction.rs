use std::f64::consts::PI;
use std::sync::OnceLock;

use oscillax::forms::{synthetic_maass, FormId, HolomorphicForm, Spectral};
use oscillax::lfunction::*;
use oscillax::{ComplexValue, NumError};

fn forms() -> &'static (HolomorphicForm, HolomorphicForm) {
    static F: OnceLock<(HolomorphicForm, HolomorphicForm)> = OnceLock::new();
    F.get_or_init(|| (FormId::Delta.expand(100_000).unwrap(), FormId::Weight16.expand(100_000).unwrap()))
}

fn ctx() -> &'static LSeriesContext {
    static C: OnceLock<LSeriesContext> = OnceLock::new();
    C.get_or_init(|| {
        let (f, g) = forms();
        LSeriesContext::new(f, g, 100_000).unwrap()
    })
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

#[test]
fn dirichlet_converges_at_three() {
    let (f, g) = forms();
    let s = c(3.0, 0.0);
    let full = dirichlet_eval(ctx(), s).unwrap();
    let mid = dirichlet_eval(&LSeriesContext::new(f, g, 10_000).unwrap(), s).unwrap();
    let short = dirichlet_eval(&LSeriesContext::new(f, g, 1_000).unwrap(), s).unwrap();
    assert!((full.value - mid.value).norm() <= 1e-10, "{} {}", full.value, mid.value);
    // the certificates cover the observed truncation error
    assert!((full.value - mid.value).norm() <= mid.certificate);
    assert!((full.value - short.value).norm() <= short.certificate);
    assert!(full.certificate <= 1e-6, "{}", full.certificate);
}

#[test]
fn dirichlet_is_real_on_the_real_axis() {
    let v = dirichlet_eval(ctx(), c(2.5, 0.0)).unwrap().value;
    assert!(v.im.abs() <= 1e-15 * v.re.abs());
}

#[test]
fn dirichlet_has_zeta_scale_magnitude() {
    let v = dirichlet_eval(ctx(), c(3.0, 0.0)).unwrap().value.norm();
    let zeta3 = 1.2020569031595942;
    assert!(v >= zeta3 / 2.0 && v <= 2.0 * zeta3, "{v}");
}

#[test]
fn dirichlet_preconditions() {
    let (f, g) = forms();
    assert!(matches!(dirichlet_eval(ctx(), c(1.1, 0.0)), Err(NumError::Domain(_))));
    assert!(matches!(LSeriesContext::new(f, g, 100_001), Err(NumError::Budget(_))));
    assert!(matches!(LSeriesContext::new(f, f, 100), Err(NumError::Domain(_))));
}

#[test]
fn gamma_reflection() {
    let kinds = [
        GammaKind::HolomorphicPair { k1: 16, k2: 12 },
        GammaKind::HolomorphicG { mu: 9.53, k: 12 },
        GammaKind::MaassG { mu_f: 9.53, mu_g: 12.17, delta: 1 },
    ];
    for k in kinds {
        for s in [c(0.5, 3.0), c(0.7, -11.0), c(2.0, 0.4)] {
            let a = k.ln_gamma(s.conj()).unwrap().exp().conj();
            let b = k.ln_gamma(s).unwrap().exp();
            assert!((a - b).norm() <= 1e-12 * b.norm(), "{k:?} {s}");
        }
    }
    assert!(gamma_rs(ctx(), c(0.5, 2.0)).unwrap().norm() > 0.0);
}

/// Slope in t of log|gamma(1/2 + it)| after dividing out the Stirling powers.
fn reduced_slope(k: GammaKind) -> f64 {
    let ts: Vec<f64> = (0..=20).map(|j| 10.0 + j as f64).collect();
    let ys: Vec<f64> = ts
        .iter()
        .map(|&t| {
            let s = c(0.5, t);
            let poly: f64 = match k {
                GammaKind::MaassG { .. } => k
                    .shifts()
                    .iter()
                    .map(|m| {
                        let z = (s + m) / 2.0;
                        (z.re - 0.5) * z.im.abs().ln()
                    })
                    .sum(),
                _ => k.shifts().iter().step_by(2).map(|m| (s.re + m.re - 0.5) * (t + m.im).abs().ln()).sum(),
            };
            k.ln_gamma(s).unwrap().re - poly
        })
        .collect();
    let n = ts.len() as f64;
    let mx = ts.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = ts.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = ts.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn gamma_decays_like_exp_minus_pi_t() {
    for k in [GammaKind::HolomorphicPair { k1: 16, k2: 12 }, GammaKind::MaassG { mu_f: 2.0, mu_g: 3.0, delta: 0 }] {
        let slope = reduced_slope(k);
        assert!((slope + PI).abs() <= 0.3, "{k:?}: {slope}");
    }
}

#[test]
fn afe_is_real_at_the_centre() {
    let v = afe_eval(ctx(), 0.0).unwrap().value;
    assert!(v.im.abs() <= 1e-12 * v.norm(), "{v}");
}

#[test]
fn afe_regression_value_at_five() {
    // pinned from a direct run; two smoothings agree with it below
    let v = afe_eval(ctx(), 5.0).unwrap();
    let pinned = c(1.7726323569534657, -0.6900227269501291);
    assert!((v.value - pinned).norm() <= 1e-9 * pinned.norm(), "{}", v.value);
    assert!(v.value.norm() > 0.1 && v.value.norm().is_finite());
}

#[test]
fn two_smoothings_agree() {
    for s in [c(0.5, 5.0), c(0.5, 2.0)] {
        let a = afe_eval_at(ctx(), s, Smoothing::PRIMARY).unwrap().value;
        let b = afe_eval_at(ctx(), s, Smoothing::ALTERNATE).unwrap().value;
        assert!((a - b).norm() <= 1e-4 * a.norm(), "{s}: {a} vs {b}");
    }
}

#[test]
fn dirichlet_and_afe_agree_at_two() {
    for s in [c(2.0, 0.0), c(2.0, 3.0), c(2.0, 7.0)] {
        let d = dirichlet_eval(ctx(), s).unwrap();
        let a = afe_eval_at(ctx(), s, Smoothing::ALTERNATE).unwrap();
        let gap = (d.value - a.value).norm();
        assert!(gap <= 1e-6 * d.value.norm(), "{s}: {gap}");
        assert!(gap <= d.certificate + a.certificate);
    }
}

#[test]
fn functional_equation_residual_suite() {
    let grid = residual_grid();
    assert!(functional_equation_residual(ctx(), grid[0]).unwrap() <= 1e-12);
    for s in grid {
        let r = functional_equation_residual(ctx(), s).unwrap();
        assert!(r <= 1e-4, "{s}: {r}");
    }
    assert!(functional_equation_residual(ctx(), c(0.5, 5.0)).unwrap() <= 1e-5);
    assert!(functional_equation_residual(ctx(), c(0.6, 3.0)).unwrap() <= 1e-4);
}

#[test]
fn smoothing_weight_shape() {
    let s = c(0.5, 0.0);
    let v = |y: f64| afe_weight(ctx(), s, y, Smoothing::PRIMARY).unwrap();
    // tends to 1 at the origin
    let gaps: Vec<f64> = [0.5, 0.1, 0.05].iter().map(|&y| (v(y) - 1.0).norm()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 0.1);
    // local log-log slopes keep steepening: faster than any fixed power
    let ys = [10.0, 20.0, 40.0, 80.0, 160.0, 320.0];
    let slopes: Vec<f64> = ys.windows(2).map(|w| (v(w[1]).norm() / v(w[0]).norm()).ln() / 2f64.ln()).collect();
    assert!(slopes.windows(2).all(|w| w[1] < w[0]), "{slopes:?}");
    assert!(slopes[0] < -1.0);
}

#[test]
fn afe_budget_precondition() {
    let (f, g) = forms();
    let small = LSeriesContext::new(f, g, 100).unwrap();
    assert!(matches!(afe_eval(&small, 16.0), Err(NumError::Budget(_))));
    assert!(matches!(afe_eval_at(ctx(), c(3.0, 0.0), Smoothing::PRIMARY), Err(NumError::Domain(_))));
}

#[test]
fn exponent_scan_report() {
    let r = exponent_scan(ctx(), &[2.0, 4.0, 8.0, 16.0]).unwrap();
    assert_eq!(r.rows.len(), 4);
    let slope = r.slope.unwrap();
    assert!(slope < 2.0, "{slope}");
    assert!(r.label.starts_with("non-probative"));
    let refs: Vec<f64> = r.references.iter().map(|l| l.exponent).collect();
    assert_eq!(refs, vec![0.9, 0.5]);
    let mut buf = Vec::new();
    r.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "t,re_L,im_L,abs_L,certified_error");
    assert_eq!(lines.count(), 4);
    assert_eq!(r.plot_data().len(), 4);
}

#[test]
fn maass_pairs_use_the_maass_gamma_factor() {
    let (f, _) = forms();
    let m = synthetic_maass(9.53, 0, 1, 5000, 7);
    let ctx = LSeriesContext::new(&m, f, 5000).unwrap();
    assert_eq!(ctx.kind, GammaKind::HolomorphicG { mu: 9.53, k: 12 });
    assert!(dirichlet_eval(&ctx, c(2.0, 1.0)).unwrap().value.norm().is_finite());
    let m2 = synthetic_maass(12.17, 1, -1, 5000, 8);
    let mm = LSeriesContext::new(&m, &m2, 5000).unwrap();
    assert!(matches!(mm.kind, GammaKind::MaassG { delta: 1, .. }));
    assert!(matches!(
        GammaKind::of(Spectral::Holomorphic { weight: 12 }, Spectral::Maass { mu: 1.0, parity: 0, epsilon: 1 }),
        GammaKind::HolomorphicG { .. }
    ));
}
