//! Composite integrals of the large-modulus analysis: K(m, n, q, Xi) and its
//! stationary-phase form, the phase factor i(m, n, q), and the correlation
//! integral H(x) with its property suite.
//!
//! Cutoffs are canonical bumps: W on (1, 2) for zeta/Xi, U on (1/2, 5/2) for
//! the n-stationary point x0 = nQ^2/(N zeta^2), omega on (2/3, 3) for xi.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::delta_method::DeltaExpansion;
use crate::quadrature::{
    bump_on, integrate_oscillatory, integrate_panels_noisy, integrate_real, locate_stationary_points,
    stationary_phase_main_term, OscillatoryIntegral, Scales,
};
use crate::voronoi::{v_natural, PsiPair, PsiParams, TAU_CENTRE};
use crate::{check_finite, ComplexValue, NumError, Result};

/// N^eps, realized as a constant (the same 10 as the Voronoi regime factor).
pub const EPS_POWER: f64 = 10.0;
pub const W_SUPPORT: (f64, f64) = (1.0, 2.0);
pub const U_SUPPORT: (f64, f64) = (0.5, 2.5);
pub const OMEGA_SUPPORT: (f64, f64) = (2.0 / 3.0, 3.0);
/// The xi at which tau0 = TAU_CENTRE when q = C.
pub const XI_CENTRE: f64 = 1.5;
const K_TOL: f64 = 1e-10;
const H_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PipelineParams {
    pub n_scale: f64,
    pub q_param: f64,
    /// Dyadic modulus scale, q ~ C.
    pub c: f64,
    /// Dyadic zeta scale.
    pub xi: f64,
    pub t: f64,
    pub mu: f64,
}

impl PipelineParams {
    pub fn new(n_scale: f64, q_param: f64, c: f64, xi: f64, t: f64, mu: f64) -> Result<Self> {
        let all = [n_scale, q_param, c, xi, t, mu];
        if all.iter().any(|v| !v.is_finite()) || n_scale <= 0.0 || q_param <= 0.0 || c <= 0.0 || xi <= 0.0 {
            return Err(NumError::Domain(format!("pipeline parameters must be finite and positive: {all:?}")));
        }
        if q_param >= n_scale.sqrt() {
            return Err(NumError::Domain(format!("Q = {q_param} must be below N^(1/2) = {}", n_scale.sqrt())));
        }
        if xi > 8.0 {
            return Err(NumError::Domain(format!("Xi = {xi} exceeds 8")));
        }
        if c > 2.0 * q_param {
            return Err(NumError::Domain(format!("C = {c} exceeds 2Q")));
        }
        Ok(PipelineParams { n_scale, q_param, c, xi, t, mu })
    }

    pub fn t1(&self) -> f64 {
        self.t + self.mu
    }

    pub fn t2(&self) -> f64 {
        self.t - self.mu
    }

    /// n ~ N Xi^2 / Q^2.
    pub fn n_centre(&self) -> f64 {
        self.n_scale * self.xi * self.xi / (self.q_param * self.q_param)
    }

    /// N Xi / (C Q), the size of B.
    pub fn zeta_range(&self) -> f64 {
        self.n_scale * self.xi / (self.c * self.q_param)
    }

    /// m as a function of the Poisson variable xi. The tau-support of V sits
    /// at [pi, pi sqrt 2], so m ~ C^2 T1 |T2| / N carries the explicit factor
    /// 1/(4 tau_c^2 xi_c).
    pub fn m_of_xi(&self, xi: f64) -> f64 {
        xi * self.c * self.c * self.t1() * self.t2().abs()
            / (4.0 * TAU_CENTRE * TAU_CENTRE * XI_CENTRE * self.n_scale)
    }

    /// x beyond which H is negligible.
    pub fn far_threshold(&self) -> f64 {
        EPS_POWER * self.zeta_range()
    }

    /// |n1 - n2| beyond which H(0) is negligible.
    pub fn localization_threshold(&self) -> f64 {
        2.0 * EPS_POWER * self.c * self.xi / self.q_param
    }
}

/// Which of the two components of i carries the transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn pick(self, p: &PsiPair) -> ComplexValue {
        match self {
            Branch::Plus => p.plus,
            Branch::Minus => p.minus,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Pipeline {
    pub params: PipelineParams,
    delta: Arc<DeltaExpansion>,
}

fn twopi_e(x: f64) -> ComplexValue {
    ComplexValue::from_polar(1.0, 2.0 * PI * x)
}

impl Pipeline {
    pub fn new(params: PipelineParams) -> Result<Self> {
        let delta = Arc::new(DeltaExpansion::build(params.q_param)?);
        Ok(Pipeline { params, delta })
    }

    fn check_k(&self, n: u64, q: u64) -> Result<()> {
        let p = &self.params;
        if n == 0 || q == 0 {
            return Err(NumError::Domain("n and q must be positive".into()));
        }
        if q as f64 > 2.0 * p.q_param {
            return Err(NumError::Domain(format!("q = {q} beyond 2Q")));
        }
        if p.zeta_range() < EPS_POWER {
            return Err(NumError::Domain(format!(
                "zeta range violated: N Xi/(C Q) = {} < {EPS_POWER}",
                p.zeta_range()
            )));
        }
        Ok(())
    }

    /// Direct quadrature of
    /// int g(q, z) W(z/Xi) U(nQ^2/(N z^2)) e(nQ/(q z) + m z/(q Q)) dz.
    pub fn k_integral(&self, m: u64, n: u64, q: u64) -> Result<ComplexValue> {
        self.check_k(n, q)?;
        let p = self.params;
        let (nf, mf, qf, qq) = (n as f64, m as f64, q as f64, p.q_param);
        // zeta-support from W and from U
        let lo = (p.xi * W_SUPPORT.0).max((nf * qq * qq / (U_SUPPORT.1 * p.n_scale)).sqrt());
        let hi = (p.xi * W_SUPPORT.1).min((nf * qq * qq / (U_SUPPORT.0 * p.n_scale)).sqrt());
        if lo >= hi {
            return Ok(ComplexValue::new(0.0, 0.0));
        }
        let delta = self.delta.clone();
        let amp = move |z: f64| {
            let g = delta.g_function(q, z).unwrap_or(f64::NAN);
            g * bump_on(z / p.xi, W_SUPPORT.0, W_SUPPORT.1)
                * bump_on(nf * qq * qq / (p.n_scale * z * z), U_SUPPORT.0, U_SUPPORT.1)
        };
        let a = nf * qq / qf;
        let b = mf / (qf * qq);
        let y = 2.0 * PI * a / lo;
        let i = OscillatoryIntegral::real_amplitude(
            amp,
            move |z| 2.0 * PI * (a / z + b * z),
            move |z| 2.0 * PI * (b - a / (z * z)),
            move |z| 4.0 * PI * a / (z * z * z),
            (lo, hi),
            Scales::new(p.xi, p.xi, y, 1.0, y / p.xi),
        )?;
        check_finite(integrate_oscillatory(&i, K_TOL)?.value, "k_integral")
    }

    /// The K integral after z -> u = nQ^2/(N z^2): the amplitude
    /// (n^{1/2} Q/N^{1/2}) u^{-3/2} U(u) g(q, z(u)) W(z(u)/Xi)/2 against
    /// the phase varpi(u) = (2 pi (nN)^{1/2}/q)((m/N) u^{-1/2} + u^{1/2}).
    pub fn k_reduced(&self, m: u64, n: u64, q: u64) -> Result<OscillatoryIntegral> {
        self.check_k(n, q)?;
        let p = self.params;
        let (nf, qf, qq) = (n as f64, q as f64, p.q_param);
        let r = nf * qq * qq / p.n_scale;
        let lo = U_SUPPORT.0.max(r / (p.xi * p.xi * W_SUPPORT.1 * W_SUPPORT.1));
        let hi = U_SUPPORT.1.min(r / (p.xi * p.xi * W_SUPPORT.0 * W_SUPPORT.0));
        if lo >= hi {
            return Err(NumError::Domain(format!("n = {n}: U and W supports do not overlap")));
        }
        let delta = self.delta.clone();
        let pre = (nf / p.n_scale).sqrt() * qq / 2.0;
        let amp = move |u: f64| {
            let z = (r / u).sqrt();
            let g = delta.g_function(q, z).unwrap_or(f64::NAN);
            pre * u.powf(-1.5) * bump_on(u, U_SUPPORT.0, U_SUPPORT.1) * g * bump_on(z / p.xi, W_SUPPORT.0, W_SUPPORT.1)
        };
        let y = 2.0 * PI * (nf * p.n_scale).sqrt() / qf;
        let x0 = m as f64 / p.n_scale;
        OscillatoryIntegral::real_amplitude(
            amp,
            move |u| y * (x0 / u.sqrt() + u.sqrt()),
            move |u| y / 2.0 * (u.powf(-0.5) - x0 * u.powf(-1.5)),
            move |u| y / 4.0 * (3.0 * x0 * u.powf(-2.5) - u.powf(-1.5)),
            (lo, hi),
            Scales::new(1.0, 1.0, y, 1.0, y),
        )
    }

    /// The stationary point of varpi; m/N in exact arithmetic.
    pub fn k_stationary_point(&self, m: u64, n: u64, q: u64) -> Result<f64> {
        let i = self.k_reduced(m, n, q)?;
        match locate_stationary_points(&i)?.as_slice() {
            [u0] => Ok(*u0),
            r => Err(NumError::Domain(format!("regime violation: {} stationary points for m = {m}", r.len()))),
        }
    }

    /// Leading stationary-phase term of the reduced integral.
    pub fn k_asymptotic(&self, m: u64, n: u64, q: u64) -> Result<ComplexValue> {
        let i = self.k_reduced(m, n, q)?;
        stationary_phase_main_term(&i).map_err(|e| match e {
            NumError::Domain(s) => NumError::Domain(format!("regime violation: {s}")),
            e => e,
        })
    }

    /// n^{1/4} q^{1/2} Q / N^{3/4}.
    pub fn k_modulus_scale(&self, n: u64, q: u64) -> f64 {
        (n as f64).powf(0.25) * (q as f64).sqrt() * self.params.q_param / self.params.n_scale.powf(0.75)
    }

    /// F(m/N) = K e(-2 sqrt(mn)/q) / (n^{1/4} q^{1/2} Q / N^{3/4}), from the
    /// asymptotic.
    pub fn k_inert(&self, m: u64, n: u64, q: u64) -> Result<ComplexValue> {
        let k = self.k_asymptotic(m, n, q)?;
        let phase = 2.0 * ((m as f64) * (n as f64)).sqrt() / q as f64;
        Ok(k * twopi_e(-phase) / self.k_modulus_scale(n, q))
    }

    fn psi_params(&self, n: u64, q: u64) -> Result<PsiParams> {
        PsiParams::new(self.params.n_scale, n, q, self.params.t)
    }

    /// i(m, n, q) = V(tau*) e((B/2pi) sum_{j<=K} g_j tau0^{j+1}), both
    /// components. The j = 0 term is the e(2 tau0 (nN)^{1/2}/(pi q)) factor.
    pub fn i_phase(&self, m: f64, n: u64, q: u64, k: usize) -> Result<PsiPair> {
        let p = self.psi_params(n, q)?;
        let x = m / (q as f64 * q as f64);
        let (ex, v) = v_natural(x, &p, self.params.mu, k)?;
        let rot = ComplexValue::from_polar(1.0, ex.phase_series());
        Ok(PsiPair { plus: v.plus * rot, minus: v.minus * rot })
    }

    /// V alone, and the real phase (B) sum g_j tau0^{j+1} in radians.
    pub fn i_parts(&self, m: f64, n: u64, q: u64, k: usize) -> Result<(PsiPair, f64)> {
        let p = self.psi_params(n, q)?;
        let (ex, v) = v_natural(m / (q as f64 * q as f64), &p, self.params.mu, k)?;
        Ok((v, ex.phase_series()))
    }

    /// The component with the larger |V| at the centre of the xi-window.
    pub fn dominant_branch(&self, n: u64, q: u64, k: usize) -> Result<Branch> {
        let (v, _) = self.i_parts(self.params.m_of_xi(XI_CENTRE), n, q, k)?;
        Ok(if v.plus.norm() >= v.minus.norm() { Branch::Plus } else { Branch::Minus })
    }

    fn check_h(&self, n: u64) -> Result<()> {
        let c = self.params.n_centre();
        let nf = n as f64;
        if !(nf >= c / 4.0 && nf <= 4.0 * c) {
            return Err(NumError::Domain(format!("n = {n} outside the window [{}, {}]", c / 4.0, 4.0 * c)));
        }
        Ok(())
    }

    /// Tabulates i(m(xi), n, q) over the omega window.
    pub fn i_kernel(&self, n: u64, q: u64, k: usize, branch: Branch) -> Result<IKernel> {
        self.check_h(n)?;
        IKernel::build(|xi| {
            let (v, ph) = self.i_parts(self.params.m_of_xi(xi), n, q, k)?;
            Ok((branch.pick(&v), ph))
        })
    }

    /// H(x) = int omega(xi) i(m(xi), n1, q) conj(i(m(xi), n2, q)) e(-x xi) dxi.
    pub fn h_integral(&self, x: f64, n1: u64, n2: u64, q: u64, k: usize, branch: Branch) -> Result<ComplexValue> {
        let k1 = self.i_kernel(n1, q, k, branch)?;
        let k2 = if n2 == n1 { k1.clone() } else { self.i_kernel(n2, q, k, branch)? };
        h_from_kernels(x, &k1, &k2)
    }

    /// max |V| over the xi-window for one n.
    pub fn v_max(&self, n: u64, q: u64, k: usize, branch: Branch) -> Result<f64> {
        Ok(self.i_kernel(n, q, k, branch)?.v_max())
    }

    /// x at which the H phase is stationary at xi = XI_CENTRE:
    /// (d/dxi)(phase(n1) - phase(n2))/(2 pi).
    pub fn h_stationary_frequency(&self, n1: u64, n2: u64, q: u64, k: usize) -> Result<f64> {
        let ph = |xi: f64| -> Result<f64> {
            let m = self.params.m_of_xi(xi);
            Ok(self.i_parts(m, n1, q, k)?.1 - self.i_parts(m, n2, q, k)?.1)
        };
        let h = 1e-4;
        Ok((ph(XI_CENTRE + h)? - ph(XI_CENTRE - h)?) / (2.0 * h) / (2.0 * PI))
    }

    /// sum_{j=1}^{K} (B g_j(B) - B' g_j(B')) tau0^{j+1} at xi, in radians.
    pub fn h_correction_phase(&self, xi: f64, n1: u64, n2: u64, q: u64, k: usize) -> Result<f64> {
        let m = self.params.m_of_xi(xi);
        let x = m / (q as f64 * q as f64);
        let one = |n: u64| -> Result<f64> {
            let p = self.psi_params(n, q)?;
            let (t1, t2) = p.spectral(self.params.mu);
            let ex = crate::voronoi::expand_stationary_point(p.b(), t1, t2, x, p.n_scale, k)?;
            Ok(ex.phase_series() - ex.b * ex.g_coeffs[0] * ex.tau0)
        };
        Ok(one(n1)? - one(n2)?)
    }
}

const KERNEL_PIECES: usize = 96;
const KERNEL_DEGREE: usize = 20;

/// Piecewise Chebyshev-Lobatto interpolant of (V, phase) on the omega
/// window: V is inert and the phase is a smooth power of xi, so both are
/// resolved by a few hundred nodes and H needs no further V evaluations.
#[derive(Clone, Debug)]
pub struct IKernel {
    lo: f64,
    hi: f64,
    v: Vec<ComplexValue>,
    phase: Vec<f64>,
}

fn lobatto(j: usize) -> f64 {
    -(PI * j as f64 / KERNEL_DEGREE as f64).cos()
}

impl IKernel {
    pub fn build(f: impl Fn(f64) -> Result<(ComplexValue, f64)> + Sync) -> Result<Self> {
        let (lo, hi) = OMEGA_SUPPORT;
        let h = (hi - lo) / KERNEL_PIECES as f64;
        let nodes: Vec<f64> = (0..KERNEL_PIECES)
            .flat_map(|p| (0..=KERNEL_DEGREE).map(move |j| lo + h * (p as f64 + 0.5 * (1.0 + lobatto(j)))))
            .collect();
        let vals: Vec<(ComplexValue, f64)> = nodes.par_iter().map(|&xi| f(xi)).collect::<Result<_>>()?;
        let (v, phase) = vals.into_iter().unzip();
        Ok(IKernel { lo, hi, v, phase })
    }

    /// (V, phase) at xi in the window.
    pub fn eval(&self, xi: f64) -> (ComplexValue, f64) {
        let h = (self.hi - self.lo) / KERNEL_PIECES as f64;
        let s = ((xi - self.lo) / h).clamp(0.0, KERNEL_PIECES as f64);
        let p = (s.floor() as usize).min(KERNEL_PIECES - 1);
        let t = 2.0 * (s - p as f64) - 1.0;
        let base = p * (KERNEL_DEGREE + 1);
        let (mut num_v, mut num_p, mut den) = (ComplexValue::new(0.0, 0.0), 0.0, 0.0);
        for j in 0..=KERNEL_DEGREE {
            let d = t - lobatto(j);
            if d == 0.0 {
                return (self.v[base + j], self.phase[base + j]);
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let w = if j == 0 || j == KERNEL_DEGREE { 0.5 * sign } else { sign } / d;
            num_v += w * self.v[base + j];
            num_p += w * self.phase[base + j];
            den += w;
        }
        (num_v / den, num_p / den)
    }

    pub fn v_max(&self) -> f64 {
        self.v.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    fn phase_max(&self) -> f64 {
        self.phase.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// H(x) from two tabulated kernels.
pub fn h_from_kernels(x: f64, k1: &IKernel, k2: &IKernel) -> Result<ComplexValue> {
    let (a, b) = OMEGA_SUPPORT;
    let total_phase = |xi: f64| k1.eval(xi).1 - k2.eval(xi).1 - 2.0 * PI * x * xi;
    // panels of about half an oscillation of the full phase
    let mut variation = 0.0;
    let mut prev = total_phase(a);
    for j in 1..=512 {
        let cur = total_phase(a + (b - a) * j as f64 / 512.0);
        variation += (cur - prev).abs();
        prev = cur;
    }
    let pieces = 8 + (variation / PI).ceil() as usize;
    let panels: Vec<(f64, f64)> = (0..pieces)
        .map(|j| (a + (b - a) * j as f64 / pieces as f64, a + (b - a) * (j + 1) as f64 / pieces as f64))
        .collect();
    let f = |xi: f64| {
        let w = bump_on(xi, a, b);
        if w == 0.0 {
            return ComplexValue::new(0.0, 0.0);
        }
        let (v1, p1) = k1.eval(xi);
        let (v2, p2) = k2.eval(xi);
        w * v1 * v2.conj() * ComplexValue::from_polar(1.0, p1 - p2 - 2.0 * PI * x * xi)
    };
    let noise = f64::EPSILON * (k1.phase_max() + k2.phase_max() + 2.0 * PI * x.abs() * b);
    let r = integrate_panels_noisy(&f, &panels, H_TOL, 1 << 16, noise)?;
    check_finite(r.value, "h_integral")
}

/// A shipped parameter point: a K-integral point and an H-suite point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preset {
    pub name: &'static str,
    pub k_params: PipelineParams,
    pub h_params: PipelineParams,
    /// Modulus used with both parameter sets.
    pub q: u64,
    /// K point: m = N, and n with zeta0 = Q (n/m)^{1/2} inside the W window.
    pub k_m: u64,
    pub k_n: u64,
    pub order: usize,
}

/// desk1: N = 10^4, Q = 20, q = C = 16.
///   K (Xi = 1): Q < N^{1/2} = 100 and N Xi/(C Q) = 31.25 >= 10. With m = N
///   and n = 56, zeta0 = 20 (56/10^4)^{1/2} = 1.497 lies in (1, 2) and the
///   large parameter (nN)^{1/2}/q is 46.8.
///   H (Xi = 8): n ~ N Xi^2/Q^2 = 1600, so B = 2 (nN)^{1/2}/q runs over
///   250..1000 on the factor-4 window. The x^{-1/2} law is a stationary-phase
///   statement and needs x >~ 30, i.e. |B - B'| in the hundreds, which Xi = 1
///   (B ~ 60) cannot give. T2 = 10^6 keeps B/|T2| <= 10^{-3}, so the j >= 1
///   phase corrections are far below |B - B'|/10.
/// desk2: desk1 with N and Q scaled by 100 and 10, which multiplies
///   (nN)^{1/2}/q by 10 and keeps n, zeta0 and x0.
pub fn presets() -> Vec<Preset> {
    let mk = |name, n_scale: f64, q_param: f64| Preset {
        name,
        k_params: PipelineParams::new(n_scale, q_param, 16.0, 1.0, 2e6, 1e6).expect("valid preset"),
        h_params: PipelineParams::new(n_scale, q_param, 16.0, 8.0, 2e6, 1e6).expect("valid preset"),
        q: 16,
        k_m: n_scale as u64,
        k_n: 56,
        order: 8,
    };
    vec![mk("desk1", 1e4, 20.0), mk("desk2", 1e6, 200.0)]
}

pub fn preset(name: &str) -> Result<Preset> {
    presets()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| NumError::Config(format!("unknown preset {name:?}")))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HReport {
    pub params: PipelineParams,
    pub q: u64,
    pub branch: Branch,
    pub fit_slope: f64,
    /// (x, |H(x)|), each x the stationary frequency of its pair.
    pub fit_points: Vec<(f64, f64)>,
    pub fit_pairs: Vec<(u64, u64)>,
    /// max |H(0; n1, n2)| / H(0; n1, n1) over n1 = N Xi^2/Q^2 and
    /// |n1 - n2| >= 20 C Xi/Q.
    pub localization_ratio: f64,
    pub localization_pairs: Vec<(u64, u64)>,
    /// The same ratio at |n1 - n2| = 50 C Xi/Q.
    pub localization_ratio_50: f64,
    pub baseline: f64,
    /// max |H(x)| / max|V|^2 over every evaluated point.
    pub boundedness_ratio: f64,
    /// max |H(x)| for |x| >= the far threshold.
    pub far_max: f64,
    pub v_max: f64,
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        let dx = x.ln() - mx;
        (a + dx * (y.ln() - my), b + dx * dx)
    });
    num / den
}

struct KernelCache<'a> {
    pipe: &'a Pipeline,
    q: u64,
    k: usize,
    branch: Branch,
    map: std::collections::HashMap<u64, Arc<IKernel>>,
}

impl KernelCache<'_> {
    fn get(&mut self, n: u64) -> Result<Arc<IKernel>> {
        if let Some(k) = self.map.get(&n) {
            return Ok(k.clone());
        }
        let kern = Arc::new(self.pipe.i_kernel(n, self.q, self.k, self.branch)?);
        self.map.insert(n, kern.clone());
        Ok(kern)
    }

    fn h(&mut self, x: f64, n1: u64, n2: u64) -> Result<ComplexValue> {
        let (a, b) = (self.get(n1)?, self.get(n2)?);
        h_from_kernels(x, &a, &b)
    }
}

/// The H property suite.
///
/// Decay: the base is the bottom of the n-window, so that B' - B spans the
/// widest range; for `sample_size` targets log-spaced over one decade of x
/// ending at the largest stationary frequency, n2 is the admissible value
/// whose stationary frequency is closest, and x is that frequency.
/// Localization: base n1 = N Xi^2/Q^2, pairs at 1, 1.5, 2 and 3 times the
/// threshold on both sides.
pub fn h_property_suite(pipe: &Pipeline, q: u64, k: usize, sample_size: usize) -> Result<HReport> {
    if sample_size < 3 {
        return Err(NumError::Domain(format!("insufficient sample: {sample_size} points (need >= 3)")));
    }
    let p = pipe.params;
    let n_lo = (p.n_centre() / 4.0).ceil() as u64;
    let n_hi = (4.0 * p.n_centre()).floor() as u64;
    let n_mid = p.n_centre().round() as u64;
    let branch = pipe.dominant_branch(n_mid, q, k)?;
    let mut cache = KernelCache { pipe, q, k, branch, map: Default::default() };

    // stationary frequency is monotone in n2: bisect for each target
    let freq = |n2: u64| pipe.h_stationary_frequency(n_lo, n2, q, k);
    let x_top = freq(n_hi)?.abs();
    let mut chosen: Vec<(u64, f64)> = Vec::new();
    for j in 0..sample_size {
        let target = x_top / 10.0 * 10f64.powf(j as f64 / (sample_size - 1) as f64);
        let (mut lo, mut hi) = (n_lo + 1, n_hi);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if freq(mid)?.abs() < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (flo, fhi) = (freq(lo)?, freq(hi)?);
        let best = if (flo.abs().ln() - target.ln()).abs() <= (fhi.abs().ln() - target.ln()).abs() { (lo, flo) } else { (hi, fhi) };
        if !chosen.iter().any(|c| c.0 == best.0) {
            chosen.push(best);
        }
    }
    if chosen.len() < 3 {
        return Err(NumError::Domain(format!("insufficient sample: {} distinct pairs", chosen.len())));
    }
    let mut fit_points = Vec::new();
    let mut fit_pairs = Vec::new();
    for &(n2, x) in &chosen {
        fit_points.push((x.abs(), cache.h(x, n_lo, n2)?.norm()));
        fit_pairs.push((n_lo, n2));
    }
    let fit_slope = least_squares_slope(&fit_points);

    let baseline = cache.h(0.0, n_mid, n_mid)?.re;
    let thr = p.localization_threshold();
    let mut localization_pairs = Vec::new();
    for f in [1.0, 1.5, 2.0, 3.0] {
        let d = (f * thr).ceil() as u64;
        for n2 in [n_mid + d, n_mid.saturating_sub(d)] {
            if n2 >= n_lo && n2 <= n_hi && n2 != n_mid {
                localization_pairs.push((n_mid, n2));
            }
        }
    }
    if localization_pairs.is_empty() {
        return Err(NumError::Domain("insufficient sample: no pair beyond the localization threshold".into()));
    }
    let mut loc = Vec::new();
    for &(a, b) in &localization_pairs {
        loc.push(cache.h(0.0, a, b)?.norm());
    }
    let localization_ratio = loc.iter().fold(0.0f64, |m, v| m.max(*v)) / baseline;
    let d50 = (50.0 * thr).ceil() as u64;
    let n50 = if n_mid + d50 <= n_hi { n_mid + d50 } else { n_mid.saturating_sub(d50).max(n_lo) };
    let h50 = cache.h(0.0, n_mid, n50)?.norm();
    let localization_ratio_50 = h50 / baseline;

    let far_x = p.far_threshold();
    let n_off = chosen[0].0;
    let mut far = Vec::new();
    for (x, a, b) in [(far_x, n_mid, n_mid), (-far_x, n_mid, n_mid), (far_x, n_lo, n_off), (-3.0 * far_x, n_lo, n_off)] {
        far.push(cache.h(x, a, b)?.norm());
    }
    let far_max = far.iter().fold(0.0f64, |m, v| m.max(*v));

    let v_max = cache.map.values().fold(0.0f64, |m, k| m.max(k.v_max()));
    let hmax = fit_points
        .iter()
        .map(|p| p.1)
        .chain(loc.iter().copied())
        .chain(far.iter().copied())
        .chain([baseline, h50])
        .fold(0.0, f64::max);
    Ok(HReport {
        params: p,
        q,
        branch,
        fit_slope,
        fit_points,
        fit_pairs,
        localization_ratio,
        localization_pairs,
        localization_ratio_50,
        baseline,
        boundedness_ratio: hmax / (v_max * v_max),
        far_max,
        v_max,
    })
}

/// int omega over its support.
pub fn omega_mass() -> Result<f64> {
    integrate_real(&|x| bump_on(x, OMEGA_SUPPORT.0, OMEGA_SUPPORT.1), OMEGA_SUPPORT.0, OMEGA_SUPPORT.1, 1e-13)
}
