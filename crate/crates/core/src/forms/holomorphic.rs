//! Level-one holomorphic eigenforms from exact q-expansions.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::ntt::{Crt, Field};
use super::{Eigenform, Spectral};
use crate::arith::{gcd, primes_up_to, sigma};
use crate::error::{NumError, Result};

pub const MAX_TABLE: usize = 1_000_000;
pub const DEFAULT_TABLE: usize = 100_000;

/// A Hecke-normalized eigenform with integer coefficients a(1..=M).
#[derive(Clone, Debug)]
pub struct HolomorphicForm {
    pub id: String,
    pub weight: u32,
    /// a[0] is unused and zero.
    pub a: Vec<BigInt>,
    /// lambda[n] = a(n) / n^{(weight-1)/2}; empty until normalized.
    pub lambda: Vec<f64>,
}

/// Which built-in form to expand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormId {
    /// Ramanujan's Delta, weight 12.
    Delta,
    /// E4 * Delta, the weight 16 cusp eigenform.
    Weight16,
}

impl FormId {
    pub fn name(self) -> &'static str {
        match self {
            FormId::Delta => "delta",
            FormId::Weight16 => "e4delta",
        }
    }

    pub fn weight(self) -> u32 {
        match self {
            FormId::Delta => 12,
            FormId::Weight16 => 16,
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "delta" | "Delta" => Ok(FormId::Delta),
            "e4delta" | "weight16" => Ok(FormId::Weight16),
            _ => Err(NumError::Config(format!("unknown form `{s}` (expected delta or e4delta)"))),
        }
    }

    pub fn expand(self, m: usize) -> Result<HolomorphicForm> {
        match self {
            FormId::Delta => delta_qexp(m),
            FormId::Weight16 => eigenform_weight16(m),
        }
    }
}

/// prod (1 - q^m) = sum_k (-1)^k q^{k(3k-1)/2}, as residues.
fn pentagonal(f: &Field, len: usize) -> Vec<u32> {
    let mut s = vec![0u32; len];
    s[0] = 1;
    let mut k: i64 = 1;
    loop {
        let mut any = false;
        for e in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
            if (e as usize) < len {
                s[e as usize] = f.from_i64(if k % 2 == 0 { 1 } else { -1 });
                any = true;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    s
}

/// prod (1 - q^m)^24 truncated to len terms.
fn eta24(f: &Field, len: usize) -> Result<Vec<u32>> {
    f.pow_series(&pentagonal(f, len), 24, len)
}

/// E4 = 1 + 240 sum sigma_3(n) q^n.
fn e4(f: &Field, len: usize) -> Vec<u32> {
    let mut s = vec![0u32; len];
    for d in 1..len {
        let dm = (d as u64 % f.p as u64) as u32;
        let d3 = f.mul(f.mul(dm, dm), dm);
        let mut m = d;
        while m < len {
            s[m] = f.add(s[m], d3);
            m += d;
        }
    }
    for x in s.iter_mut() {
        *x = f.mul(*x, 240);
    }
    s[0] = 1;
    s
}

fn check_table(m: usize) -> Result<()> {
    if m == 0 || m > MAX_TABLE {
        return Err(NumError::Domain(format!("table size {m} outside 1..={MAX_TABLE}")));
    }
    Ok(())
}

/// Expand a form whose q-expansion is q * series(field), lifting through CRT.
fn expand<S>(id: &str, weight: u32, m: usize, series: S) -> Result<HolomorphicForm>
where
    S: Fn(&Field, usize) -> Result<Vec<u32>>,
{
    check_table(m)?;
    // |a(n)| <= d(n) n^{(k-1)/2} < 2 n^{k/2}; the check prime guards the lift
    let bits = weight as f64 / 2.0 * (m as f64).log2() + 4.0;
    let crt = Crt::new(Crt::primes_for_bits(bits))?;
    let residues: Vec<Vec<u32>> =
        crt.fields().iter().map(|f| series(f, m)).collect::<Result<_>>()?;
    let mut a = Vec::with_capacity(m + 1);
    a.push(BigInt::zero());
    let mut r = vec![0u32; residues.len()];
    for n in 1..=m {
        for (i, s) in residues.iter().enumerate() {
            r[i] = s[n - 1];
        }
        a.push(crt.lift(&r)?);
    }
    Ok(normalize(HolomorphicForm { id: id.to_string(), weight, a, lambda: Vec::new() }))
}

/// Ramanujan's Delta to M terms: q prod (1 - q^m)^24.
pub fn delta_qexp(m: usize) -> Result<HolomorphicForm> {
    expand(FormId::Delta.name(), 12, m, eta24)
}

/// E4 * Delta to M terms.
pub fn eigenform_weight16(m: usize) -> Result<HolomorphicForm> {
    expand(FormId::Weight16.name(), 16, m, |f, len| f.mul_series(&e4(f, len), &eta24(f, len)?, len))
}

/// Populate lambda(n) = a(n) / n^{(k-1)/2}.
pub fn normalize(mut form: HolomorphicForm) -> HolomorphicForm {
    let e = (form.weight as f64 - 1.0) / 2.0;
    form.lambda = form
        .a
        .iter()
        .enumerate()
        .map(|(n, a)| if n == 0 { 0.0 } else { big_to_f64(a) / (n as f64).powf(e) })
        .collect();
    form
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

impl HolomorphicForm {
    pub fn table_size(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficient(&self, n: u64) -> Result<&BigInt> {
        if n == 0 {
            return Err(NumError::Domain("coefficients start at n = 1".into()));
        }
        self.a.get(n as usize).ok_or_else(|| {
            NumError::Data(format!("table exhausted: n = {n} beyond M = {}", self.table_size()))
        })
    }

    /// a(p^{k+1}) - a(p) a(p^k) + p^{w-1} a(p^{k-1}) for weight w; zero for an eigenform.
    pub fn hecke_residual_exact(&self, p: u64, k: u32) -> Result<BigInt> {
        let pk = |j: u32| p.checked_pow(j).ok_or_else(|| NumError::Domain("p^k overflows".into()));
        let next = self.coefficient(pk(k + 1)?)?;
        let cur = self.coefficient(pk(k)?)?;
        let ap = self.coefficient(p)?;
        let prev = if k == 0 { BigInt::zero() } else { self.coefficient(pk(k - 1)?)?.clone() };
        Ok(next - ap * cur + BigInt::from(p).pow(self.weight - 1) * prev)
    }

    /// Primes p <= pmax where a(p)^2 > 4 p^{k-1}, checked in exact arithmetic,
    /// along with the largest |lambda(p)| / 2 seen.
    pub fn deligne_check(&self, pmax: u64) -> Result<DeligneReport> {
        if pmax as usize > self.table_size() {
            return Err(NumError::Data(format!("table exhausted: {pmax} > {}", self.table_size())));
        }
        let mut report = DeligneReport { primes_checked: 0, max_ratio: 0.0, violations: Vec::new() };
        for p in primes_up_to(pmax as usize) {
            let a = &self.a[p as usize];
            let bound = BigInt::from(4) * BigInt::from(p).pow(self.weight - 1);
            if a * a > bound {
                report.violations.push(p);
            }
            report.primes_checked += 1;
            report.max_ratio = report.max_ratio.max(self.lambda[p as usize].abs() / 2.0);
        }
        Ok(report)
    }

    /// Coprime pairs (m, n), both <= bound, with a(mn) != a(m) a(n).
    pub fn multiplicativity_failures(&self, bound: u64) -> Result<Vec<(u64, u64)>> {
        if (bound * bound) as usize > self.table_size() {
            return Err(NumError::Data(format!("table exhausted: {bound}^2 > {}", self.table_size())));
        }
        let mut out = Vec::new();
        for m in 1..=bound {
            for n in m..=bound {
                if gcd(m, n) == 1 && self.a[(m * n) as usize] != &self.a[m as usize] * &self.a[n as usize] {
                    out.push((m, n));
                }
            }
        }
        Ok(out)
    }

    /// n <= nmax where a(n) - sigma_11(n) is not divisible by 691.
    pub fn congruence_691_failures(&self, nmax: u64) -> Result<Vec<u64>> {
        if self.weight != 12 {
            return Err(NumError::Domain("the 691 congruence is for weight 12".into()));
        }
        let mut out = Vec::new();
        for n in 1..=nmax {
            let d = self.coefficient(n)? - BigInt::from(sigma(n, 11));
            if !(d % 691i32).is_zero() {
                out.push(n);
            }
        }
        Ok(out)
    }

    /// Largest |a(n)| in bits, for diagnostics.
    pub fn max_bits(&self) -> u64 {
        self.a.iter().map(|x| x.abs().bits()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug)]
pub struct DeligneReport {
    pub primes_checked: usize,
    pub max_ratio: f64,
    pub violations: Vec<u64>,
}

impl Eigenform for HolomorphicForm {
    fn spectral(&self) -> Spectral {
        Spectral::Holomorphic { weight: self.weight }
    }

    fn table_len(&self) -> usize {
        self.table_size()
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        self.coefficient(n)?;
        Ok(self.lambda[n as usize])
    }

    fn label(&self) -> &str {
        &self.id
    }
}

/// Float Hecke residual |lambda(p^{k+1}) - lambda(p) lambda(p^k) + lambda(p^{k-1})|.
pub fn hecke_check(form: &dyn Eigenform, p: u64, k: u32) -> Result<f64> {
    let pk = |j: u32| p.checked_pow(j).ok_or_else(|| NumError::Domain("p^k overflows".into()));
    let prev = if k == 0 { 0.0 } else { form.lambda(pk(k - 1)?)? };
    Ok((form.lambda(pk(k + 1)?)? - form.lambda(p)? * form.lambda(pk(k)?)? + prev).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_values() {
        let d = delta_qexp(10).unwrap();
        let tau: Vec<i64> = d.a[1..].iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(tau, vec![1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]);
        let g = eigenform_weight16(4).unwrap();
        assert_eq!(g.a[2], BigInt::from(216));
        assert_eq!(g.a[3], BigInt::from(-3348));
    }

    #[test]
    fn table_bounds() {
        assert!(delta_qexp(0).is_err());
        assert!(delta_qexp(MAX_TABLE + 1).is_err());
        let d = delta_qexp(5).unwrap();
        assert!(d.coefficient(6).is_err());
        assert!(d.lambda(0).is_err());
    }
}
