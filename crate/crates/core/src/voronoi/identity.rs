//! Both sides of the holomorphic Voronoi identity, with a certified dual tail.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::phi::DualKernel;
use super::tail::TailCertificate;
use super::testfn::VoronoiTestFunction;
use crate::arith::{gcd, inv_mod};
use crate::forms::HolomorphicForm;
use crate::{ComplexValue, NumError, Result};

/// Default ceiling on the certified tail, relative to |LHS|.
pub const DEFAULT_TAIL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct VoronoiCheck {
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub rel_gap: f64,
    /// Certified bound on the omitted dual terms.
    pub tail_bound: f64,
    pub m_dual: usize,
    pub a_bar: u64,
}

fn e(x: f64) -> ComplexValue {
    ComplexValue::from_polar(1.0, 2.0 * PI * x)
}

/// a/q reduced to [0, 1) exactly, then e(.) of it.
fn additive_char(a: i64, n: u64, q: u64) -> ComplexValue {
    let r = ((a as i128 * n as i128).rem_euclid(q as i128)) as f64;
    e(r / q as f64)
}

fn table(form: &HolomorphicForm, n: usize) -> Result<()> {
    if n > form.table_size() {
        return Err(NumError::Data(format!(
            "{}: need lambda(n) up to {n}, table has {}",
            form.id,
            form.table_size()
        )));
    }
    Ok(())
}

/// sum_n lambda(n) e(an/q) h(n/N).
pub fn voronoi_lhs(form: &HolomorphicForm, tf: &VoronoiTestFunction, a: i64, q: u64) -> Result<ComplexValue> {
    let (lo, hi) = tf.support();
    let n0 = ((lo * tf.n_scale).floor() as u64).max(1);
    let n1 = (hi * tf.n_scale).ceil() as u64;
    table(form, n1 as usize)?;
    Ok((n0..=n1).map(|n| form.lambda[n as usize] * additive_char(a, n, q) * tf.h(n as f64 / tf.n_scale)).sum())
}

/// (N/q) sum_{n <= M} lambda(n) e(-a_bar n/q) Phi_h(nN/q^2).
pub fn voronoi_dual_sum(form: &HolomorphicForm, tf: &VoronoiTestFunction, a_bar: i64, q: u64, m_dual: usize) -> Result<ComplexValue> {
    table(form, m_dual)?;
    let kernel = DualKernel::holomorphic(tf, form.weight);
    let scale = tf.n_scale / (q * q) as f64;
    let terms: Result<Vec<ComplexValue>> = (1..m_dual + 1)
        .into_par_iter()
        .with_min_len(64)
        .map(|n| Ok(form.lambda[n] * additive_char(-a_bar, n as u64, q) * kernel.eval(n as f64 * scale)?))
        .collect();
    let s: ComplexValue = terms?.iter().sum();
    let ik = match form.weight % 4 {
        0 => ComplexValue::new(1.0, 0.0),
        1 => ComplexValue::new(0.0, 1.0),
        2 => ComplexValue::new(-1.0, 0.0),
        _ => ComplexValue::new(0.0, -1.0),
    };
    Ok(s * ik * 2.0 * PI * tf.n_scale / q as f64)
}

/// Evaluates both sides. With `m_dual = None` the dual length is the
/// shortest one whose certified tail is below tail_tol * |LHS|; an explicit
/// length whose tail exceeds that budget is an error.
pub fn voronoi_verify(
    form: &HolomorphicForm,
    tf: &VoronoiTestFunction,
    a: i64,
    q: u64,
    m_dual: Option<usize>,
    tail_tol: f64,
) -> Result<VoronoiCheck> {
    if q == 0 {
        return Err(NumError::Domain("q must be positive".into()));
    }
    if gcd(a.unsigned_abs(), q) != 1 {
        return Err(NumError::Domain(format!("gcd({a}, {q}) != 1")));
    }
    if !(tail_tol > 0.0) {
        return Err(NumError::Domain(format!("tail tolerance {tail_tol}")));
    }
    let a_bar = inv_mod(a.rem_euclid(q as i64) as u64, q).ok_or_else(|| NumError::Domain("no inverse".into()))?;
    let lhs = voronoi_lhs(form, tf, a, q)?;
    let budget = tail_tol * lhs.norm();
    if !(budget > 0.0) {
        return Err(NumError::Domain("left side vanishes; relative gap undefined".into()));
    }
    let cert = TailCertificate::holomorphic(tf, form.weight);
    let m = match m_dual {
        Some(m) => m,
        None => cert.dual_length(budget, tf.n_scale, q),
    };
    let tail_bound = cert.tail(m, tf.n_scale, q);
    if tail_bound > budget {
        return Err(NumError::Budget(format!(
            "certified dual tail {tail_bound:e} at M = {m} exceeds {budget:e}"
        )));
    }
    let rhs = voronoi_dual_sum(form, tf, a_bar as i64, q, m)?;
    Ok(VoronoiCheck { lhs, rhs, rel_gap: (lhs - rhs).norm() / lhs.norm(), tail_bound, m_dual: m, a_bar })
}
