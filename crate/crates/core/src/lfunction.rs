//! Rankin-Selberg L-values L(s, f x g) = zeta(2s) sum lambda_f(n) lambda_g(n) n^{-s}.
//!
//! Two evaluation paths: the Dirichlet series (Re s >= 1.2) with a tail
//! certificate, and a smoothed approximate functional equation valid for all
//! s. With Lambda(s) = gamma(s) L(s) = Lambda(1 - s) and G(u) = exp(alpha u^2),
//!
//!   L(s) = (1/2 pi i) int_(sigma_u) G(u)/u [ gamma(s+u)/gamma(s) X^u D(s+u)
//!                                        + gamma(1-s+u)/gamma(s) X^{-u} D(1-s+u) ] du
//!
//! where D is the full Dirichlet series, zeta(2s) folded into its
//! coefficients b(n) = sum_{m^2 | n} lambda_f lambda_g(n/m^2). The contour sits
//! where D converges absolutely; the inner sums are cut at a length chosen
//! from a bound on the smoothing weight.
//!
//! Coefficient envelopes: |lambda_f lambda_g(n)| <= s^2 d(n)^2 n^{2 theta} with
//! theta = 0 for holomorphic forms, 7/64 per Maass factor, s the ingestion
//! slack. Since d(n)^2 <= d_4(n) and sum_{n<=x} d_4(n) <= x (1 + ln x)^3, partial
//! summation gives explicit tails.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::forms::{Eigenform, Spectral, BOUND_SLACK, THETA};
use crate::special_fn::{ln_gamma, zeta_line};
use crate::{check_finite, ComplexValue, NumError, Result};

pub const DEFAULT_SIGMA_U: f64 = 3.0;
pub const DEFAULT_TAU_CUT: f64 = 40.0;
/// Trapezoid step on the contour.
const NODE_STEP: f64 = 1.0 / 16.0;
/// Nodes whose weight is below this fraction of the largest are dropped (and charged to the certificate).
const PRUNE: f64 = 1e-24;
const TAIL_TARGET: f64 = 1e-13;
/// Tail bounds above this make the AFE refuse; below it the bound is
/// reported as the certificate (it is loose by the d_4 envelope, often 10^4).
const TAIL_LIMIT: f64 = 1e-3;
const CUT_LIMIT: f64 = 1e-10;
pub const NON_PROBATIVE: &str =
    "non-probative: desk-scale t is far from the asymptotic regime; the fitted slope says nothing about the exponent";

const ZETA2: f64 = PI * PI / 6.0;

/// Archimedean data of the pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GammaKind {
    /// Both holomorphic, weights k1 >= k2: (2 pi)^{-2s} Gamma(s + (k1+k2)/2 - 1) Gamma(s + (k1-k2)/2).
    HolomorphicPair { k1: u32, k2: u32 },
    /// f Maass with spectral parameter mu, g holomorphic of weight k.
    HolomorphicG { mu: f64, k: u32 },
    /// Both Maass; delta = 0 when the parities agree, else 1.
    MaassG { mu_f: f64, mu_g: f64, delta: u8 },
}

impl GammaKind {
    pub fn of(f: Spectral, g: Spectral) -> Self {
        match (f, g) {
            (Spectral::Holomorphic { weight: a }, Spectral::Holomorphic { weight: b }) => {
                GammaKind::HolomorphicPair { k1: a.max(b), k2: a.min(b) }
            }
            (Spectral::Maass { mu, .. }, Spectral::Holomorphic { weight })
            | (Spectral::Holomorphic { weight }, Spectral::Maass { mu, .. }) => GammaKind::HolomorphicG { mu, k: weight },
            (Spectral::Maass { mu: mu_f, parity: pf, .. }, Spectral::Maass { mu: mu_g, parity: pg, .. }) => {
                GammaKind::MaassG { mu_f, mu_g, delta: u8::from(pf != pg) }
            }
        }
    }

    /// log gamma(s, f x g), principal branches summed.
    pub fn ln_gamma(&self, s: ComplexValue) -> Result<ComplexValue> {
        let i = ComplexValue::i();
        match *self {
            GammaKind::HolomorphicPair { k1, k2 } => {
                let a = (k1 + k2) as f64 / 2.0 - 1.0;
                let b = (k1 - k2) as f64 / 2.0;
                Ok(-2.0 * s * (2.0 * PI).ln() + ln_gamma(s + a)? + ln_gamma(s + b)?)
            }
            GammaKind::HolomorphicG { mu, k } => {
                let a = (k as f64 - 1.0) / 2.0;
                Ok(-2.0 * s * (2.0 * PI).ln() + ln_gamma(s + a + i * mu)? + ln_gamma(s + a - i * mu)?)
            }
            GammaKind::MaassG { mu_f, mu_g, delta } => {
                let d = delta as f64;
                let mut acc = -2.0 * s * PI.ln();
                for m in [mu_f + mu_g, mu_f - mu_g, -(mu_f + mu_g), -(mu_f - mu_g)] {
                    acc += ln_gamma((s + d + i * m) / 2.0)?;
                }
                Ok(acc)
            }
        }
    }

    /// Shifts mu_j with gamma(s) ~ prod_j Gamma_R(s + mu_j).
    pub fn shifts(&self) -> Vec<ComplexValue> {
        let c = |re: f64, im: f64| ComplexValue::new(re, im);
        match *self {
            GammaKind::HolomorphicPair { k1, k2 } => {
                let a = (k1 + k2) as f64 / 2.0 - 1.0;
                let b = (k1 - k2) as f64 / 2.0;
                vec![c(a, 0.0), c(a + 1.0, 0.0), c(b, 0.0), c(b + 1.0, 0.0)]
            }
            GammaKind::HolomorphicG { mu, k } => {
                let a = (k as f64 - 1.0) / 2.0;
                vec![c(a, mu), c(a + 1.0, mu), c(a, -mu), c(a + 1.0, -mu)]
            }
            GammaKind::MaassG { mu_f, mu_g, delta } => {
                let d = delta as f64;
                [mu_f + mu_g, mu_f - mu_g, -(mu_f + mu_g), -(mu_f - mu_g)].iter().map(|&m| c(d, m)).collect()
            }
        }
    }

    /// Smallest real shift; gamma(w) is pole-free for Re w > -min_shift.
    fn min_shift(&self) -> f64 {
        self.shifts().iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }
}

/// Smoothing G(u) = exp(alpha u^2) and balance X between the two sums.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Smoothing {
    pub alpha: f64,
    pub balance: f64,
}

impl Smoothing {
    pub const PRIMARY: Smoothing = Smoothing { alpha: 1.0, balance: 1.0 };
    /// Independent second choice used to make the functional-equation check non-tautological.
    pub const ALTERNATE: Smoothing = Smoothing { alpha: 0.5, balance: 1.5 };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AfeContour {
    pub sigma_u: f64,
    pub tau_cut: f64,
}

impl Default for AfeContour {
    fn default() -> Self {
        AfeContour { sigma_u: DEFAULT_SIGMA_U, tau_cut: DEFAULT_TAU_CUT }
    }
}

/// A value with an error certificate and the number of coefficients used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Certified {
    pub value: ComplexValue,
    pub certificate: f64,
    pub terms: usize,
}

/// Immutable evaluation context for one pair (f, g).
#[derive(Clone, Debug)]
pub struct LSeriesContext {
    pub f_label: String,
    pub g_label: String,
    pub kind: GammaKind,
    pub coeff_budget: usize,
    pub contour: AfeContour,
    /// Sum of the Ramanujan-defect exponents of the two forms.
    theta: f64,
    /// Square of the envelope slack.
    slack: f64,
    /// lambda_f(n) lambda_g(n), index 0 unused.
    c: Vec<f64>,
    /// Coefficients of zeta(2s) sum c(n) n^{-s}.
    b: Vec<f64>,
}

fn theta_of(s: Spectral) -> (f64, f64) {
    match s {
        Spectral::Holomorphic { .. } => (0.0, 1.0),
        Spectral::Maass { .. } => (THETA, BOUND_SLACK),
    }
}

impl LSeriesContext {
    /// Tabulate lambda_f lambda_g up to `coeff_budget`. The pair must be distinct:
    /// L(s, f x f-bar) has a pole at s = 1 that the formulas here do not carry.
    pub fn new(f: &dyn Eigenform, g: &dyn Eigenform, coeff_budget: usize) -> Result<Self> {
        if f.label() == g.label() && f.spectral() == g.spectral() {
            return Err(NumError::Domain(format!(
                "pole-free evaluation needs f != g (both are `{}`)",
                f.label()
            )));
        }
        let table = f.table_len().min(g.table_len());
        if coeff_budget == 0 || coeff_budget > table {
            return Err(NumError::Budget(format!("coefficient budget {coeff_budget} exceeds tables of length {table}")));
        }
        let mut c = vec![0.0; coeff_budget + 1];
        for n in 1..=coeff_budget {
            c[n] = f.lambda(n as u64)? * g.lambda(n as u64)?;
        }
        let mut b = c.clone();
        let mut m = 2;
        while m * m <= coeff_budget {
            let sq = m * m;
            for k in 1..=coeff_budget / sq {
                b[k * sq] += c[k];
            }
            m += 1;
        }
        let (tf, sf) = theta_of(f.spectral());
        let (tg, sg) = theta_of(g.spectral());
        Ok(LSeriesContext {
            f_label: f.label().to_string(),
            g_label: g.label().to_string(),
            kind: GammaKind::of(f.spectral(), g.spectral()),
            coeff_budget,
            contour: AfeContour::default(),
            theta: tf + tg,
            slack: (sf * sg).powi(2).max(1.0),
            c,
            b,
        })
    }

    pub fn with_contour(mut self, contour: AfeContour) -> Result<Self> {
        if !(contour.sigma_u > 0.0 && contour.tau_cut > 0.0 && contour.tau_cut.is_finite()) {
            return Err(NumError::Config(format!("bad AFE contour {contour:?}")));
        }
        self.contour = contour;
        Ok(self)
    }

    /// sum_j log(|s + mu_j| + 3) at s = 1/2 + it, exponentiated.
    pub fn analytic_conductor(&self, t: f64) -> f64 {
        let s = ComplexValue::new(0.5, t);
        self.kind.shifts().iter().map(|m| (s + m).norm() + 3.0).product()
    }

    pub fn coefficient_product(&self, n: usize) -> Option<f64> {
        self.c.get(n).copied().filter(|_| n > 0)
    }
}

pub fn gamma_rs(ctx: &LSeriesContext, s: ComplexValue) -> Result<ComplexValue> {
    check_finite(ctx.kind.ln_gamma(s)?.exp(), "gamma_rs")
}

/// Bound on sum_{n > N} a(n) n^{-sigma} when sum_{n <= x} a(n) <= x (1 + ln x)^3.
fn d4_tail(n: f64, sigma: f64) -> f64 {
    let a = sigma - 1.0;
    if a <= 0.0 {
        return f64::INFINITY;
    }
    let l = 1.0 + n.ln();
    sigma * n.powf(-a) * (l.powi(3) / a + 3.0 * l * l / (a * a) + 6.0 * l / a.powi(3) + 6.0 / a.powi(4))
}

/// L(s) by the Dirichlet series over the whole budget, Re s >= 1.2.
pub fn dirichlet_eval(ctx: &LSeriesContext, s: ComplexValue) -> Result<Certified> {
    if !(s.re >= 1.2) || !s.im.is_finite() {
        return Err(NumError::Domain(format!("Dirichlet series needs Re s >= 1.2, got {s}")));
    }
    let sigma_eff = s.re - 2.0 * ctx.theta;
    if sigma_eff <= 1.0 {
        return Err(NumError::Budget(format!("tail certificate diverges at Re s = {} for this pair", s.re)));
    }
    let mut sum = ComplexValue::new(0.0, 0.0);
    // small terms first
    for n in (1..=ctx.coeff_budget).rev() {
        sum += ctx.c[n] * (-s * (n as f64).ln()).exp();
    }
    let z2 = zeta_line(2.0 * s)?;
    let tail = z2.norm() * ctx.slack * d4_tail(ctx.coeff_budget as f64, sigma_eff);
    let rounding = 1e3 * f64::EPSILON * z2.norm() * ctx.c.iter().skip(1).enumerate()
        .map(|(k, c)| c.abs() * ((k + 1) as f64).powf(-s.re)).sum::<f64>();
    Ok(Certified { value: check_finite(z2 * sum, "dirichlet_eval")?, certificate: tail + rounding, terms: ctx.coeff_budget })
}

/// One of the two AFE integrals: weights G(u)/u gamma(w+u)/gamma(s) X^{+-u} on the contour.
struct Branch {
    w: ComplexValue,
    ln_x: f64,
    /// weights at v_j = j h, j = -J..=J
    weights: Vec<ComplexValue>,
}

fn ln_weight(ctx: &LSeriesContext, sm: Smoothing, w: ComplexValue, ln_x: f64, lg_s: ComplexValue, u: ComplexValue) -> Result<ComplexValue> {
    Ok(sm.alpha * u * u + ctx.kind.ln_gamma(w + u)? - lg_s + u * ln_x - u.ln())
}

/// log of (1/2 pi) int |G(c+iv)/(c+iv)| |gamma(w+c+iv)/gamma(s)| dv.
fn ln_envelope(ctx: &LSeriesContext, sm: Smoothing, w: ComplexValue, lg_s: ComplexValue, c: f64) -> Result<f64> {
    let h = 0.125;
    let m = (ctx.contour.tau_cut / h).ceil() as i64;
    let mut logs = Vec::with_capacity(2 * m as usize + 1);
    for j in -m..=m {
        let u = ComplexValue::new(c, j as f64 * h);
        logs.push(ln_weight(ctx, sm, w, 0.0, lg_s, u)?.re);
    }
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = logs.iter().map(|l| (l - top).exp()).sum();
    Ok(top + (s * h / (2.0 * PI)).ln())
}

impl Branch {
    /// Bound on the contribution of n > N, by dyadic blocks with the contour
    /// shifted to the best Re u = c per block.
    fn tail(&self, ctx: &LSeriesContext, envelopes: &[(f64, f64)], n: usize) -> f64 {
        let mut total = 0.0;
        let mut m = n as f64;
        for _ in 0..200 {
            let hi = 2.0 * m;
            let best = envelopes
                .iter()
                .map(|&(c, ln_a)| {
                    let e = 2.0 * ctx.theta - self.w.re - c;
                    let ln_pow = (e * m.ln()).max(e * hi.ln());
                    ln_a + c * self.ln_x + ln_pow + (ZETA2 * ctx.slack * hi * (1.0 + hi.ln()).powi(3)).ln()
                })
                .fold(f64::INFINITY, f64::min);
            let block = best.exp();
            total += block;
            if block < 1e-40 * total.max(1e-300) || block == 0.0 {
                break;
            }
            m = hi;
        }
        total
    }
}

/// L(s) by the approximate functional equation with the given smoothing.
pub fn afe_eval_at(ctx: &LSeriesContext, s: ComplexValue, sm: Smoothing) -> Result<Certified> {
    if !(sm.alpha > 0.0 && sm.balance > 0.0) {
        return Err(NumError::Config(format!("bad smoothing {sm:?}")));
    }
    let need = 3.0 * ctx.analytic_conductor(s.im).sqrt();
    if (ctx.coeff_budget as f64) < need {
        return Err(NumError::Budget(format!(
            "AFE at t = {} needs at least {need:.0} coefficients, budget is {}",
            s.im, ctx.coeff_budget
        )));
    }
    let sigma_u = ctx.contour.sigma_u;
    for w in [s, 1.0 - s] {
        if w.re + sigma_u + ctx.kind.min_shift() <= 0.0 || w.re + sigma_u - 2.0 * ctx.theta <= 1.0 {
            return Err(NumError::Domain(format!("contour Re u = {sigma_u} too far left for s = {s}")));
        }
    }
    let lg_s = ctx.kind.ln_gamma(s)?;
    let h = NODE_STEP;
    let big_j = (ctx.contour.tau_cut / h).round() as i64;
    let ln_x = sm.balance.ln();
    let mut branches = Vec::new();
    for (w, lx) in [(s, ln_x), (1.0 - s, -ln_x)] {
        let mut weights = Vec::with_capacity(2 * big_j as usize + 1);
        for j in -big_j..=big_j {
            let u = ComplexValue::new(sigma_u, j as f64 * h);
            weights.push(ln_weight(ctx, sm, w, lx, lg_s, u)?.exp());
        }
        branches.push(Branch { w, ln_x: lx, weights });
    }

    // shift range for the tail bounds: c > 0, absolute convergence and gamma(w + c) pole-free
    let mut envelopes = Vec::new();
    for br in &branches {
        let c_min = 0.25f64
            .max(2.0 * ctx.theta + 1.0 - br.w.re + 0.25)
            .max(-br.w.re - ctx.kind.min_shift() + 0.25);
        let mut env = Vec::new();
        let mut c = c_min;
        while c <= 24.0 {
            env.push((c, ln_envelope(ctx, sm, br.w, lg_s, c)?));
            c += 0.5;
        }
        envelopes.push(env);
    }
    let tail_at = |n: usize| -> f64 { branches.iter().zip(&envelopes).map(|(br, env)| br.tail(ctx, env, n)).sum() };
    let mut length = 32usize.min(ctx.coeff_budget);
    while tail_at(length) > TAIL_TARGET && length < ctx.coeff_budget {
        length = (2 * length).min(ctx.coeff_budget);
    }
    let tail_total = tail_at(length);
    if tail_total > TAIL_LIMIT {
        return Err(NumError::Budget(format!(
            "AFE tail bound {tail_total:e} at length {length}; raise the coefficient budget"
        )));
    }

    let mut value = ComplexValue::new(0.0, 0.0);
    let mut coarse = ComplexValue::new(0.0, 0.0);
    let mut rounding = 0.0;
    let mut dropped = 0.0;
    let mut cut = 0.0;
    for br in &branches {
        let wmax = br.weights.iter().map(|z| z.norm()).fold(0.0, f64::max);
        // keep |j| <= keep
        let keep = (0..=big_j)
            .rev()
            .find(|&j| {
                let a = br.weights[(big_j + j) as usize].norm();
                let b = br.weights[(big_j - j) as usize].norm();
                a.max(b) >= PRUNE * wmax
            })
            .unwrap_or(0);
        let re_shift = br.w + sigma_u;
        // absolute sum over n <= length and its tail
        let mut d_abs = 0.0;
        let width = keep as usize;
        let mut plus = vec![ComplexValue::new(0.0, 0.0); width + 1];
        let mut minus = vec![ComplexValue::new(0.0, 0.0); width + 1];
        for n in (1..=length).rev() {
            let bn = ctx.b[n];
            if bn == 0.0 {
                continue;
            }
            let ln_n = (n as f64).ln();
            let a = bn * (-re_shift * ln_n).exp();
            d_abs += a.norm();
            let z = ComplexValue::from_polar(1.0, -h * ln_n);
            let mut p = a;
            let mut q = a;
            plus[0] += a;
            minus[0] += a;
            for k in 1..=width {
                p *= z;
                q *= z.conj();
                plus[k] += p;
                minus[k] += q;
            }
        }
        d_abs += ctx.slack * ZETA2 * d4_tail(length as f64, re_shift.re - 2.0 * ctx.theta);
        for j in -keep..=keep {
            let wt = br.weights[(big_j + j) as usize];
            let d = if j >= 0 { plus[j as usize] } else { minus[(-j) as usize] };
            let term = wt * d * (h / (2.0 * PI));
            value += term;
            if j % 2 == 0 {
                coarse += 2.0 * term;
            }
            rounding += wt.norm() * d_abs * h / (2.0 * PI);
        }
        for j in (keep + 1)..=big_j {
            dropped += (br.weights[(big_j + j) as usize].norm() + br.weights[(big_j - j) as usize].norm()) * d_abs * h / (2.0 * PI);
        }
        // beyond the cut: the Gaussian factor dominates any polynomial gamma growth
        let edge = br.weights[0].norm().max(br.weights[2 * big_j as usize].norm());
        cut += 2.0 * edge * d_abs / (2.0 * PI * 2.0 * sm.alpha * ctx.contour.tau_cut);
    }
    if cut > CUT_LIMIT {
        return Err(NumError::Budget(format!("contour truncation at |Im u| = {} leaves {cut:e}", ctx.contour.tau_cut)));
    }
    let certificate = tail_total + (value - coarse).norm() + 64.0 * f64::EPSILON * rounding + dropped + cut;
    Ok(Certified { value: check_finite(value, "afe_eval")?, certificate, terms: length })
}

/// L(1/2 + it) by the AFE with the primary smoothing.
pub fn afe_eval(ctx: &LSeriesContext, t: f64) -> Result<Certified> {
    afe_eval_at(ctx, ComplexValue::new(0.5, t), Smoothing::PRIMARY)
}

/// The smoothing weight V_s(y) = (1/2 pi i) int y^{-u} G(u)/u gamma(s+u)/gamma(s) du on the contour.
pub fn afe_weight(ctx: &LSeriesContext, s: ComplexValue, y: f64, sm: Smoothing) -> Result<ComplexValue> {
    if !(y > 0.0) {
        return Err(NumError::Domain(format!("V_s(y) needs y > 0, got {y}")));
    }
    let lg_s = ctx.kind.ln_gamma(s)?;
    let h = NODE_STEP;
    let big_j = (ctx.contour.tau_cut / h).round() as i64;
    let mut acc = ComplexValue::new(0.0, 0.0);
    for j in -big_j..=big_j {
        let u = ComplexValue::new(ctx.contour.sigma_u, j as f64 * h);
        acc += ln_weight(ctx, sm, s, -y.ln(), lg_s, u)?.exp();
    }
    check_finite(acc * h / (2.0 * PI), "afe_weight")
}

/// |Lambda(s) - Lambda(1-s)| / (|Lambda(s)| + |Lambda(1-s)|), the two sides
/// computed with different smoothings so that agreement tests the functional
/// equation rather than the algebra of one AFE.
pub fn functional_equation_residual(ctx: &LSeriesContext, s: ComplexValue) -> Result<f64> {
    let a = afe_eval_at(ctx, s, Smoothing::PRIMARY)?;
    let b = afe_eval_at(ctx, 1.0 - s, Smoothing::ALTERNATE)?;
    let la = ctx.kind.ln_gamma(s)?;
    let lb = ctx.kind.ln_gamma(1.0 - s)?;
    // scale out the larger gamma modulus before comparing
    let top = la.re.max(lb.re);
    let lam_a = a.value * (la - top).exp();
    let lam_b = b.value * (lb - top).exp();
    let den = lam_a.norm() + lam_b.norm();
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok((lam_a - lam_b).norm() / den)
}

/// The five points of the functional-equation residual suite.
pub fn residual_grid() -> [ComplexValue; 5] {
    [
        ComplexValue::new(0.5, 0.0),
        ComplexValue::new(0.5, 5.0),
        ComplexValue::new(0.6, 3.0),
        ComplexValue::new(0.3, 8.0),
        ComplexValue::new(0.75, 12.0),
    ]
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub t: f64,
    pub re_l: f64,
    pub im_l: f64,
    pub abs_l: f64,
    pub certified_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReferenceLine {
    pub name: &'static str,
    pub exponent: f64,
    pub meaning: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub f: String,
    pub g: String,
    pub rows: Vec<ScanRow>,
    /// Least-squares slope of log|L| against log t over rows with t >= 1.
    pub slope: Option<f64>,
    pub fit_rows: usize,
    pub references: Vec<ReferenceLine>,
    pub label: &'static str,
}

pub fn reference_lines() -> Vec<ReferenceLine> {
    vec![
        ReferenceLine { name: "subconvex", exponent: 0.9, meaning: "proven exponent of T1 = t + mu_f in the t and mu_f aspects" },
        ReferenceLine { name: "convexity", exponent: 0.5, meaning: "convexity exponent of T1 when |t - mu_f| = O(1), up to t^eps" },
    ]
}

/// |L(1/2 + it)| over the grid with a log-log slope; the label says what the slope is not.
pub fn exponent_scan(ctx: &LSeriesContext, t_grid: &[f64]) -> Result<ScanReport> {
    let rows = t_grid
        .par_iter()
        .map(|&t| {
            let v = afe_eval(ctx, t)?;
            Ok(ScanRow { t, re_l: v.value.re, im_l: v.value.im, abs_l: v.value.norm(), certified_error: v.certificate })
        })
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| r.t >= 1.0 && r.abs_l > 0.0).map(|r| (r.t.ln(), r.abs_l.ln())).collect();
    let slope = if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        (sxx > 0.0).then(|| sxy / sxx)
    } else {
        None
    };
    Ok(ScanReport {
        f: ctx.f_label.clone(),
        g: ctx.g_label.clone(),
        fit_rows: pts.len(),
        rows,
        slope,
        references: reference_lines(),
        label: NON_PROBATIVE,
    })
}

impl ScanReport {
    /// Columns t, re_L, im_L, abs_L, certified_error.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| NumError::Io(e.to_string());
        out.write_record(["t", "re_L", "im_L", "abs_L", "certified_error"]).map_err(io)?;
        for r in &self.rows {
            out.write_record([r.t, r.re_l, r.im_l, r.abs_l, r.certified_error].map(|x| format!("{x:e}"))).map_err(io)?;
        }
        out.flush().map_err(|e| NumError::Io(e.to_string()))
    }

    /// (t, |L|) pairs for external plotting.
    pub fn plot_data(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.t, r.abs_l)).collect()
    }
}

/// "start:end:count", both ends included.
pub fn parse_t_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || NumError::Config(format!("t grid `{spec}` is not start:end:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let b: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if n == 0 || !a.is_finite() || !b.is_finite() || b < a || (n == 1 && a != b) {
        return Err(bad());
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    Ok((0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d4_tail_matches_a_direct_integral() {
        let direct = crate::quadrature::integrate_real(
            &|y: f64| 2.5 * (-(1.5) * y).exp() * (1.0 + y).powi(3),
            (1000f64).ln(),
            60.0,
            1e-13,
        )
        .unwrap();
        assert!((d4_tail(1000.0, 2.5) / direct - 1.0).abs() < 1e-9);
        assert!(d4_tail(10.0, 1.0).is_infinite());
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_t_grid("0:16:8").unwrap().len(), 8);
        assert_eq!(parse_t_grid("2:2:1").unwrap(), vec![2.0]);
        let g = parse_t_grid("0:1:3").unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0]);
        assert!(parse_t_grid("3:1:4").is_err());
        assert!(parse_t_grid("1:2").is_err());
    }

    #[test]
    fn gamma_kinds() {
        let k = GammaKind::of(Spectral::Holomorphic { weight: 12 }, Spectral::Holomorphic { weight: 16 });
        assert_eq!(k, GammaKind::HolomorphicPair { k1: 16, k2: 12 });
        let m = GammaKind::of(
            Spectral::Maass { mu: 9.5, parity: 0, epsilon: 1 },
            Spectral::Maass { mu: 12.1, parity: 1, epsilon: -1 },
        );
        assert_eq!(m, GammaKind::MaassG { mu_f: 9.5, mu_g: 12.1, delta: 1 });
        assert_eq!(k.min_shift(), 2.0);
    }
}
