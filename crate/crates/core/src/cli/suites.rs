//! The verification suites behind the CLI and the acceptance harness. Each
//! returns an [`Outcome`]; numerical errors are recorded, never thrown.

use std::collections::BTreeMap;

use crate::delta_method::DeltaExpansion;
use crate::error::{NumError, Result};
use crate::forms::{cache, FormId, HolomorphicForm};
use crate::lfunction::{
    afe_eval_at, dirichlet_eval, exponent_scan, functional_equation_residual, residual_grid, LSeriesContext, Smoothing,
    NON_PROBATIVE,
};
use crate::pipeline::{h_property_suite, preset, presets, Pipeline};
use crate::quadrature::suites::{derivative_test_suite, stationary_phase_error_fit};
use crate::special_fn::{gamma_factor, gamma_factor_envelope, ln_gamma, ln_gamma_stirling, StirlingConfig};
use crate::voronoi::{
    expand_stationary_point, phi_asymptotic, phi_holomorphic, psi_asymptotic, psi_desk_points, psi_mellin,
    voronoi_verify, AsymptoticCoefficients, VoronoiTestFunction, DEFAULT_TAIL_TOL, DESK_ORDER,
};
use crate::ComplexValue;

use super::report::{Check, Outcome};

pub const DEFAULT_SEED: u64 = 20240917;
/// Coefficient table length used by the identity and L-value suites.
pub const TABLE: usize = 100_000;

/// Named thresholds; defaults mirror the acceptance criteria.
#[derive(Clone, Debug, PartialEq)]
pub struct Thresholds(BTreeMap<String, f64>);

impl Default for Thresholds {
    fn default() -> Self {
        let d = [
            ("delta.max_residual", 1e-6),
            ("delta.decay_slope", -2.5),
            ("delta.near_one", 0.1),
            ("voronoi.rel_gap", 1e-6),
            ("voronoi.expansion_constant", 5.0),
            ("quadrature.stationary_constant", 5.0),
            ("quadrature.derivative_ratio", 10.0),
            ("gamma.stirling_rel", 1e-10),
            ("gamma.envelope_constant", 10.0),
            ("psi.small_b_rel", 3e-2),
            ("psi.bound_constant", 10.0),
            ("psi.tau_remainder", 5.0),
            ("k.rel", 3e-2),
            ("h.bound", 2.33),
            ("h.slope", -0.45),
            ("h.far", 1e-4),
            ("h.localization", 1e-3),
            ("l.residual", 1e-4),
            ("l.agreement", 1e-6),
            ("l.scan_slope", 2.0),
        ];
        Thresholds(d.iter().map(|&(k, v)| (k.to_string(), v)).collect())
    }
}

impl Thresholds {
    pub fn get(&self, name: &str) -> f64 {
        *self.0.get(name).unwrap_or_else(|| panic!("threshold `{name}` is not defined"))
    }

    /// Override one threshold; unknown names are a config error.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match self.0.get_mut(name) {
            Some(v) if value.is_finite() => {
                *v = value;
                Ok(())
            }
            Some(_) => Err(NumError::Config(format!("threshold `{name}` must be finite"))),
            None => Err(NumError::Config(format!("unknown threshold `{name}`"))),
        }
    }

    pub fn as_map(&self) -> &BTreeMap<String, f64> {
        &self.0
    }
}

fn record<T>(out: &mut Outcome, what: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            out.errors.push(format!("{what}: {e}"));
            None
        }
    }
}

/// Both built-in forms to `m` coefficients, through the cache directory when set.
pub fn load_forms(m: usize) -> Result<(HolomorphicForm, HolomorphicForm)> {
    let dir = cache::default_cache_dir();
    Ok((cache::load_or_build(FormId::Delta, m, dir.as_deref())?, cache::load_or_build(FormId::Weight16, m, dir.as_deref())?))
}

/// Delta-method exactness over |n| <= min(50, Q^2/2).
pub fn delta_exactness(th: &Thresholds, q_param: f64) -> Outcome {
    let mut out = Outcome::default();
    let Some(e) = record(&mut out, "build", DeltaExpansion::build(q_param)) else { return out };
    let nmax = 50.min((q_param * q_param / 2.0).floor() as i64);
    if let Some(x) = record(&mut out, "exactness", e.exactness(nmax)) {
        out.push(Check::at_most("delta.max_residual", x.max_residual, th.get("delta.max_residual")));
        out.put("max_residual", x.max_residual);
        out.put("worst_n", x.worst_n);
        out.put("nmax", nmax);
    }
    out.put("c_q", e.c_q);
    out
}

/// Decay slope of |g(q, zeta)| on [1, 8] and the near-1 deviation.
pub fn delta_g_properties(th: &Thresholds, q_param: f64) -> Outcome {
    let mut out = Outcome::default();
    let Some(e) = record(&mut out, "build", DeltaExpansion::build(q_param)) else { return out };
    let mut slopes = BTreeMap::new();
    for q in [1u64, 3, 10].into_iter().filter(|&q| q as f64 <= 2.0 * q_param) {
        if let Some(s) = record(&mut out, "decay slope", e.decay_slope(q, 1.0, 8.0, 64)) {
            out.push(Check::at_most(format!("delta.decay_slope[q={q}]"), s, th.get("delta.decay_slope")));
            slopes.insert(q.to_string(), s);
        }
    }
    out.put("decay_slopes", slopes);
    if let Some(n) = record(&mut out, "near one", e.near_one_deviation(0.1)) {
        out.push(Check::at_most("delta.near_one", n.max_dev, th.get("delta.near_one")));
        out.put("near_one", n);
    }
    out
}

/// Voronoi identity at the given (q, N) points, a = 1.
pub fn voronoi_identity(th: &Thresholds, forms: &[&HolomorphicForm], points: &[(u64, f64)]) -> Outcome {
    let mut out = Outcome::default();
    let mut rows = Vec::new();
    for f in forms {
        for &(q, n) in points {
            let Some(tf) = record(&mut out, "test function", VoronoiTestFunction::canonical(n)) else { continue };
            if let Some(r) = record(&mut out, &format!("{} q={q} N={n}", f.id), voronoi_verify(f, &tf, 1, q, None, DEFAULT_TAIL_TOL)) {
                out.push(Check::at_most(format!("voronoi.rel_gap[{},q={q},N={n}]", f.id), r.rel_gap, th.get("voronoi.rel_gap")));
                rows.push(serde_json::json!({
                    "form": f.id, "q": q, "N": n, "rel_gap": r.rel_gap, "m_dual": r.m_dual, "tail_bound": r.tail_bound,
                }));
            }
        }
    }
    out.put("identity", rows);
    out
}

pub fn voronoi_default_grid() -> Vec<(u64, f64)> {
    let mut g = Vec::new();
    for q in [1, 3, 5] {
        for n in [50.0, 100.0, 200.0] {
            g.push((q, n));
        }
    }
    g
}

/// One constant C with |phi - phi_J| <= C x^{-J/2-3/4} over x in {1e2, 1e3, 1e4}, J <= 2.
pub fn voronoi_expansion(th: &Thresholds) -> Outcome {
    let mut out = Outcome::default();
    let Some(tf) = record(&mut out, "test function", VoronoiTestFunction::canonical(1.0)) else { return out };
    let c = AsymptoticCoefficients::holomorphic(12, 2);
    let mut worst: f64 = 0.0;
    for &x in &[1e2, 1e3, 1e4] {
        let Some(exact) = record(&mut out, "phi", phi_holomorphic(x, &tf, 12)) else { continue };
        for j in 0..=2 {
            if let Some(a) = record(&mut out, "phi asymptotic", phi_asymptotic(x, &tf, j, &c)) {
                worst = worst.max((a - exact).norm() / x.powf(-(j as f64) / 2.0 - 0.75));
            }
        }
    }
    out.push(Check::at_most("voronoi.expansion_constant", worst, th.get("voronoi.expansion_constant")));
    out
}

/// Stationary-phase constant and the seeded derivative-test suite.
pub fn quadrature_lemmas(th: &Thresholds, seed: u64) -> Outcome {
    let mut out = Outcome::default();
    if let Some(f) = record(&mut out, "stationary phase", stationary_phase_error_fit(&[1e2, 1e3, 1e4])) {
        out.push(Check::at_most("quadrature.stationary_constant", f.constant, th.get("quadrature.stationary_constant")));
        out.put("stationary_phase_errors", f.points);
    }
    if let Some(s) = record(&mut out, "derivative suite", derivative_test_suite(seed, 50)) {
        let t = th.get("quadrature.derivative_ratio");
        out.push(Check::at_most("quadrature.derivative_ratio[first]", s.worst_first_ratio, t));
        out.push(Check::at_most("quadrature.derivative_ratio[second]", s.worst_second_ratio, t));
        out.put("derivative_cases", s.cases.len());
    }
    out
}

/// Stirling with K2 = 8 against exact log Gamma at |tau| >= 20, and the gamma-factor envelope.
pub fn gamma_machinery(th: &Thresholds) -> Outcome {
    let mut out = Outcome::default();
    let Some(cfg) = record(&mut out, "stirling config", StirlingConfig::new(8)) else { return out };
    let mut worst: f64 = 0.0;
    for sigma in [-0.5, 0.0, 0.5, 1.0] {
        for tau in [20.0, -20.0, 35.0, 50.0, -100.0, 300.0, 1000.0] {
            let a = record(&mut out, "stirling", ln_gamma_stirling(sigma, tau, cfg));
            let b = record(&mut out, "ln_gamma", ln_gamma(ComplexValue::new(sigma, tau)));
            if let (Some(a), Some(b)) = (a, b) {
                worst = worst.max(((a - b).exp() - 1.0).norm());
            }
        }
    }
    out.push(Check::at_most("gamma.stirling_rel", worst, th.get("gamma.stirling_rel")));
    let mu = 9.533695;
    let mut env: f64 = 0.0;
    for sigma in [-0.5, 0.0, 0.5] {
        for k in 0..=20 {
            let tau = 2.0 * mu * 50f64.powf(k as f64 / 20.0);
            if let Some((p, m)) = record(&mut out, "gamma factor", gamma_factor(ComplexValue::new(sigma, tau), mu)) {
                let e = gamma_factor_envelope(sigma, tau, mu);
                env = env.max(p.norm() / e).max(m.norm() / e);
            }
        }
    }
    out.push(Check::at_most("gamma.envelope_constant", env, th.get("gamma.envelope_constant")));
    out
}

/// Psi trichotomy at the shipped desk points, the tau* series and g0.
pub fn psi_trichotomy(th: &Thresholds) -> Outcome {
    let mut out = Outcome::default();
    let desks = psi_desk_points();
    let small = &desks[0];
    let m = record(&mut out, "psi_mellin small", psi_mellin(small.x(), &small.params, small.mu, -0.5));
    let a = record(&mut out, "psi_asymptotic small", psi_asymptotic(small.x(), &small.params, small.mu, DESK_ORDER));
    if let (Some(m), Some(a)) = (m, a) {
        let scale = m.plus.norm().max(m.minus.norm());
        let err = (m.plus - a.plus).norm().max((m.minus - a.minus).norm()) / scale;
        out.push(Check::at_most("psi.small_b_rel", err, th.get("psi.small_b_rel")));
    }
    let mid = &desks[1];
    if let Some(m) = record(&mut out, "psi_mellin middle", psi_mellin(mid.x(), &mid.params, mid.mu, -0.5)) {
        let (t1, _) = mid.params.spectral(mid.mu);
        let c = m.plus.norm().max(m.minus.norm()) / ((mid.params.b() * mid.nx.min(t1)).sqrt() + mid.nx.sqrt());
        out.push(Check::at_most("psi.bound_constant[middle]", c, th.get("psi.bound_constant")));
    }
    let large = &desks[2];
    if let Some(m) = record(&mut out, "psi_mellin large", psi_mellin(large.x(), &large.params, large.mu, -0.5)) {
        let c = m.plus.norm().max(m.minus.norm()) / large.nx.sqrt();
        out.push(Check::at_most("psi.bound_constant[large]", c, th.get("psi.bound_constant")));
    }
    // tau0 = 1: Nx = T1 |T2| / 4 with T1 = 2 T2
    let (t1, t2) = (2000.0, 1000.0);
    let mut worst: f64 = 0.0;
    let mut g0_ok = true;
    for &r in &[0.02, 0.05, 0.1] {
        for &k in &[2usize, 4, 6] {
            if let Some(e) = record(&mut out, "tau* expansion", expand_stationary_point(r * t2, t1, t2, t1 * t2 / 4.0 / 1e4, 1e4, k)) {
                worst = worst.max((e.tau_star - e.tau_partial_sum(k)).abs() / r.powi(k as i32 + 1));
                g0_ok &= e.g_coeffs[0] == 2.0;
            }
        }
    }
    out.push(Check::at_most("psi.tau_remainder", worst, th.get("psi.tau_remainder")));
    out.push(Check::equal("psi.g0_is_two", if g0_ok { 1.0 } else { 0.0 }, 1.0));
    out
}

/// K asymptotic at desk1, and its improvement at desk2.
pub fn k_asymptotic(th: &Thresholds) -> Outcome {
    let mut out = Outcome::default();
    let mut errs = Vec::new();
    for p in presets() {
        let Some(pipe) = record(&mut out, p.name, Pipeline::new(p.k_params)) else { continue };
        let k = record(&mut out, "k_integral", pipe.k_integral(p.k_m, p.k_n, p.q));
        let a = record(&mut out, "k_asymptotic", pipe.k_asymptotic(p.k_m, p.k_n, p.q));
        if let (Some(k), Some(a)) = (k, a) {
            errs.push((p.name, (k - a).norm() / k.norm()));
        }
    }
    if let [(_, e1), (_, e2)] = errs[..] {
        out.push(Check::at_most("k.rel[desk1]", e1, th.get("k.rel")));
        out.push(Check::at_most("k.improvement_ratio", e2 / e1, 1.0));
    }
    out.put("k_rel_errors", errs);
    out
}

/// The H property suite at one preset.
pub fn h_suite(th: &Thresholds, preset_name: &str) -> Outcome {
    let mut out = Outcome::default();
    let Some(p) = record(&mut out, "preset", preset(preset_name)) else { return out };
    let Some(pipe) = record(&mut out, "pipeline", Pipeline::new(p.h_params)) else { return out };
    if let Some(r) = record(&mut out, "h suite", h_property_suite(&pipe, p.q, p.order, 20)) {
        out.push(Check::at_most("h.bound", r.boundedness_ratio, th.get("h.bound")));
        out.push(Check::at_most("h.slope", r.fit_slope, th.get("h.slope")));
        out.push(Check::at_most("h.far", r.far_max, th.get("h.far")));
        out.push(Check::at_most("h.localization", r.localization_ratio, th.get("h.localization")));
        out.put("h_localization_at_50", r.localization_ratio_50);
        out.put("h_report", r);
    }
    out
}

/// Residual grid, Dirichlet against AFE at Re s = 2, and a short scan.
pub fn l_values(th: &Thresholds, ctx: &LSeriesContext, check_residual: bool) -> Outcome {
    let mut out = Outcome::default();
    if check_residual {
        let mut rows = Vec::new();
        for s in residual_grid() {
            if let Some(r) = record(&mut out, &format!("residual at {s}"), functional_equation_residual(ctx, s)) {
                out.push(Check::at_most(format!("l.residual[{s}]"), r, th.get("l.residual")));
                rows.push((s.re, s.im, r));
            }
        }
        out.put("residuals", rows);
    }
    for s in [ComplexValue::new(2.0, 0.0), ComplexValue::new(2.0, 3.0), ComplexValue::new(2.0, 7.0)] {
        let d = record(&mut out, "dirichlet", dirichlet_eval(ctx, s));
        let a = record(&mut out, "afe", afe_eval_at(ctx, s, Smoothing::ALTERNATE));
        if let (Some(d), Some(a)) = (d, a) {
            out.push(Check::at_most(format!("l.agreement[{s}]"), (d.value - a.value).norm() / d.value.norm(), th.get("l.agreement")));
        }
    }
    if let Some(r) = record(&mut out, "scan", exponent_scan(ctx, &[2.0, 4.0, 8.0, 16.0])) {
        let slope = r.slope.unwrap_or(f64::NAN);
        out.push(Check::at_most("l.scan_slope", slope, th.get("l.scan_slope")));
        out.push(Check::equal("l.scan_labelled", if r.label == NON_PROBATIVE { 1.0 } else { 0.0 }, 1.0));
        out.put("check_scan", r);
    }
    out
}

/// 691 congruence, exact Hecke recursion at every p^{k+1} in the table, Deligne at p <= 1e5.
pub fn form_engine(forms: &[&HolomorphicForm]) -> Outcome {
    let mut out = Outcome::default();
    for f in forms {
        if f.weight == 12 {
            if let Some(v) = record(&mut out, "691", f.congruence_691_failures(100)) {
                out.push(Check::equal("forms.congruence_691_failures", v.len() as f64, 0.0));
            }
        }
        let mut nonzero = 0usize;
        let m = f.table_size() as u64;
        for p in crate::arith::primes_up_to(m as usize) {
            let mut k = 0u32;
            while p.checked_pow(k + 1).is_some_and(|x| x <= m) {
                match f.hecke_residual_exact(p, k) {
                    Ok(r) if r == num_bigint::BigInt::from(0) => {}
                    Ok(_) => nonzero += 1,
                    Err(e) => out.errors.push(format!("hecke {p}^{k}: {e}")),
                }
                k += 1;
            }
        }
        out.push(Check::equal(format!("forms.hecke_nonzero[{}]", f.id), nonzero as f64, 0.0));
        if let Some(r) = record(&mut out, "deligne", f.deligne_check(m.min(100_000))) {
            out.push(Check::equal(format!("forms.deligne_violations[{}]", f.id), r.violations.len() as f64, 0.0));
            out.put(&format!("deligne_primes_{}", f.id), r.primes_checked);
        }
    }
    out
}
