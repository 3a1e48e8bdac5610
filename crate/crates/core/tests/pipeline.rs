use std::f64::consts::PI;
use std::sync::OnceLock;

use oscillax::pipeline::*;
use oscillax::voronoi::{main_log_phase, psi_asymptotic, PsiParams, TAU_CENTRE};
use oscillax::{ComplexValue, NumError};

fn desk(name: &str) -> (Preset, Pipeline) {
    let p = preset(name).unwrap();
    let pipe = Pipeline::new(p.k_params).unwrap();
    (p, pipe)
}

fn h_desk() -> &'static (Preset, Pipeline) {
    static D: OnceLock<(Preset, Pipeline)> = OnceLock::new();
    D.get_or_init(|| {
        let p = preset("desk1").unwrap();
        let pipe = Pipeline::new(p.h_params).unwrap();
        (p, pipe)
    })
}

fn suite() -> &'static HReport {
    static R: OnceLock<HReport> = OnceLock::new();
    R.get_or_init(|| {
        let (p, pipe) = h_desk();
        h_property_suite(pipe, p.q, p.order, 20).unwrap()
    })
}

#[test]
fn k_integral_has_the_predicted_size() {
    let (p, pipe) = desk("desk1");
    let k = pipe.k_integral(p.k_m, p.k_n, p.q).unwrap();
    let r = k.norm() / pipe.k_modulus_scale(p.k_n, p.q);
    assert!((0.1..=10.0).contains(&r), "{r}");
}

#[test]
fn k_stationary_point_is_m_over_n() {
    let (p, pipe) = desk("desk1");
    for m in [p.k_m, p.k_m + 1234, p.k_m - 2000] {
        let u0 = pipe.k_stationary_point(m, p.k_n, p.q).unwrap();
        assert!((u0 - m as f64 / 1e4).abs() <= 1e-10, "m={m}: {u0}");
    }
}

#[test]
fn k_asymptotic_matches_and_improves() {
    let mut errs = Vec::new();
    for name in ["desk1", "desk2"] {
        let (p, pipe) = desk(name);
        let k = pipe.k_integral(p.k_m, p.k_n, p.q).unwrap();
        let a = pipe.k_asymptotic(p.k_m, p.k_n, p.q).unwrap();
        errs.push((k - a).norm() / k.norm());
    }
    assert!(errs[0] <= 3e-2, "{errs:?}");
    assert!(errs[1] < errs[0] / 3.0, "{errs:?}");
}

#[test]
fn k_is_negligible_outside_the_window() {
    let (p, pipe) = desk("desk1");
    let reference = pipe.k_integral(p.k_m, p.k_n, p.q).unwrap().norm();
    for m in [4 * p.k_m, p.k_m / 3] {
        let k = pipe.k_integral(m, p.k_n, p.q).unwrap().norm();
        assert!(k <= 1e-3 * reference, "m={m}: {k}");
    }
    // the stationary point leaves the support and the asymptotic refuses
    assert!(matches!(pipe.k_asymptotic(4 * p.k_m, p.k_n, p.q), Err(NumError::Domain(_))));
}

#[test]
fn k_phase_is_carried_by_the_exponential() {
    let (p, pipe) = desk("desk1");
    let f = |m: u64| {
        let k = pipe.k_integral(m, p.k_n, p.q).unwrap();
        k * ComplexValue::from_polar(1.0, -2.0 * PI * 2.0 * ((m * p.k_n) as f64).sqrt() / p.q as f64)
    };
    for m in [p.k_m, p.k_m + 500] {
        let d = (f(m + 1) / f(m)).arg().abs();
        assert!(d <= 1e-2, "m={m}: {d}");
    }
}

#[test]
fn k_preconditions() {
    let p = PipelineParams::new(1e4, 20.0, 40.0, 1.0, 100.0, 10.0).unwrap();
    let pipe = Pipeline::new(p).unwrap();
    // N Xi/(C Q) = 12.5 passes; a smaller Xi does not
    assert!(pipe.k_integral(10_000, 56, 16).is_ok());
    let p = PipelineParams::new(1e4, 20.0, 40.0, 0.5, 100.0, 10.0).unwrap();
    let pipe = Pipeline::new(p).unwrap();
    assert!(matches!(pipe.k_integral(10_000, 14, 16), Err(NumError::Domain(_))));
    assert!(matches!(pipe.k_integral(10_000, 14, 41), Err(NumError::Domain(_))));
}

#[test]
fn i_phase_factors_the_psi_asymptotic() {
    // a moderate t keeps t ln(Nx) small enough that dividing out the outer
    // factor does not lose digits
    let prm = PipelineParams::new(1e4, 20.0, 16.0, 8.0, 15000.0, 5000.0).unwrap();
    let pipe = Pipeline::new(prm).unwrap();
    let (q, order) = (16u64, 8usize);
    for &(xi, n) in &[(1.5, 1600u64), (1.1, 900), (2.2, 3000)] {
        let m = prm.m_of_xi(xi);
        let i = pipe.i_phase(m, n, q, order).unwrap();
        let x = m / (q * q) as f64;
        let psi = psi_asymptotic(x, &PsiParams::new(prm.n_scale, n, q, prm.t).unwrap(), prm.mu, order).unwrap();
        let nx = prm.n_scale * x;
        let outer = (ComplexValue::new(0.5, prm.t) * nx.ln()).exp()
            * ComplexValue::from_polar(1.0, main_log_phase(prm.t1(), prm.t2()));
        let back = psi.minus / outer;
        assert!((back - i.minus).norm() <= 1e-10 * i.minus.norm(), "{back} vs {}", i.minus);
    }
}

#[test]
fn i_phase_is_bounded_by_v() {
    let (p, pipe) = h_desk();
    let vmax = pipe.v_max(1600, p.q, p.order, Branch::Minus).unwrap();
    for xi in [0.8, 1.3, 1.9, 2.6] {
        let i = pipe.i_phase(p.h_params.m_of_xi(xi), 1600, p.q, p.order).unwrap();
        assert!(i.minus.norm() <= vmax * (1.0 + 1e-6));
    }
}

#[test]
fn i_phase_order_change_follows_the_remainder_scale() {
    // B = 500, |T2| = 10^4: B/|T2| = 0.05
    let prm = PipelineParams::new(1e4, 20.0, 16.0, 8.0, 15000.0, 5000.0).unwrap();
    let pipe = Pipeline::new(prm).unwrap();
    let m = prm.m_of_xi(XI_CENTRE);
    let tau0 = (prm.t1() * prm.t2() / (4.0 * prm.n_scale * m)).sqrt() * 16.0;
    for k in [2, 4, 6] {
        let a = pipe.i_phase(m, 1600, 16, k).unwrap().minus;
        let b = pipe.i_phase(m, 1600, 16, k + 2).unwrap().minus;
        let change = (b / a).arg().abs();
        let bound = 500.0 * (500.0 * tau0 / 1e4).powi(k as i32 + 1);
        assert!(change <= bound, "K={k}: {change} vs {bound}");
    }
}

#[test]
fn h_is_bounded() {
    let r = suite();
    assert!(r.boundedness_ratio <= 2.33, "{}", r.boundedness_ratio);
    assert!(omega_mass().unwrap() <= 2.33);
}

#[test]
fn h_diagonal_is_positive_and_real() {
    let (p, pipe) = h_desk();
    let h = pipe.h_integral(0.0, 1600, 1600, p.q, p.order, Branch::Minus).unwrap();
    assert!(h.re > 0.0);
    assert!(h.im.abs() <= 1e-12 * h.re);
}

#[test]
fn h_far_regime_is_negligible() {
    assert!(suite().far_max <= 1e-4, "{}", suite().far_max);
}

#[test]
fn h_decays_like_inverse_square_root() {
    let r = suite();
    assert_eq!(r.fit_points.len(), 20);
    let (lo, hi) = (r.fit_points[0].0, r.fit_points[19].0);
    assert!(hi / lo >= 9.5, "{lo} {hi}");
    assert!(r.fit_slope <= -0.45, "{}", r.fit_slope);
}

#[test]
fn h_localizes_at_fifty_thresholds() {
    let r = suite();
    assert!(r.localization_ratio_50 <= 1e-3, "{}", r.localization_ratio_50);
    assert!(r.baseline > 0.0);
}

#[test]
fn h_conjugate_symmetry() {
    let (p, pipe) = h_desk();
    for x in [3.0, -17.5] {
        let a = pipe.h_integral(-x, 1500, 1700, p.q, p.order, Branch::Minus).unwrap();
        let b = pipe.h_integral(x, 1700, 1500, p.q, p.order, Branch::Minus).unwrap();
        assert!((a - b.conj()).norm() <= 1e-10, "{a} vs {b}");
    }
}

#[test]
fn h_frequency_match() {
    // x* = (Q/(C Xi)) |n1 - n2| tau_c/(2 pi xi_c) to leading order
    let (p, pipe) = h_desk();
    let prm = p.h_params;
    for d in [40u64, 128, 300] {
        let x = pipe.h_stationary_frequency(1600, 1600 + d, p.q, p.order).unwrap().abs();
        let predicted = prm.q_param / (prm.c * prm.xi) * d as f64 * TAU_CENTRE / (2.0 * PI * XI_CENTRE);
        assert!((x / predicted - 1.0).abs() <= 0.2, "d={d}: {x} vs {predicted}");
    }
}

#[test]
fn h_phase_corrections_are_small() {
    let (p, pipe) = h_desk();
    for n2 in [1472u64, 1728, 2400] {
        let db = (PsiParams::new(1e4, n2, p.q, 0.0).unwrap().b() - 500.0).abs();
        for xi in [0.8, 1.5, 2.5] {
            let c = pipe.h_correction_phase(xi, 1600, n2, p.q, p.order).unwrap().abs();
            assert!(c <= 0.1 * db, "n2={n2} xi={xi}: {c} vs {db}");
        }
    }
}

#[test]
fn h_window_and_sample_guards() {
    let (p, pipe) = h_desk();
    assert!(matches!(pipe.h_integral(0.0, 300, 1600, p.q, p.order, Branch::Minus), Err(NumError::Domain(_))));
    assert!(matches!(h_property_suite(pipe, p.q, p.order, 2), Err(NumError::Domain(_))));
}
