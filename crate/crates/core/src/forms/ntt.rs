//! Truncated power series modulo word-size primes, multiplied by NTT, and
//! the CRT lift back to wide integers.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{factorize, inv_mod};
use crate::error::{NumError, Result};

/// Primes below 2^31 with 2^22 | p - 1.
pub const NTT_PRIMES: [u32; 10] = [
    2130706433, 2113929217, 2088763393, 2025848833, 2013265921, 1866465281, 1811939329,
    1790967809, 1711276033, 1572864001,
];
const MAX_LOG_LEN: u32 = 22;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn primitive_root(p: u32) -> u32 {
    let p = p as u64;
    let qs: Vec<u64> = factorize(p - 1).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| qs.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
        .expect("prime has a primitive root") as u32
}

/// Modular arithmetic context for one prime.
#[derive(Clone, Copy, Debug)]
pub struct Field {
    pub p: u32,
    root: u32,
}

impl Field {
    pub fn new(p: u32) -> Self {
        Field { p, root: primitive_root(p) }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.p as u64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        (if s >= self.p as u64 { s - self.p as u64 } else { s }) as u32
    }

    /// Reduce a signed integer.
    pub fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    fn ntt(&self, a: &mut [u32], invert: bool) {
        let n = a.len();
        let p = self.p as u64;
        let mut j = 0;
        for i in 1..n {
            let mut bit = n >> 1;
            while j & bit != 0 {
                j ^= bit;
                bit >>= 1;
            }
            j ^= bit;
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let mut w = pow_mod(self.root as u64, (p - 1) / len as u64, p);
            if invert {
                w = pow_mod(w, p - 2, p);
            }
            let half = len / 2;
            let mut tw = Vec::with_capacity(half);
            let mut c = 1u64;
            for _ in 0..half {
                tw.push(c);
                c = c * w % p;
            }
            for chunk in a.chunks_mut(len) {
                let (lo, hi) = chunk.split_at_mut(half);
                for k in 0..half {
                    let u = lo[k] as u64;
                    let v = hi[k] as u64 * tw[k] % p;
                    lo[k] = ((u + v) % p) as u32;
                    hi[k] = ((u + p - v) % p) as u32;
                }
            }
            len <<= 1;
        }
        if invert {
            let ninv = pow_mod(n as u64, p - 2, p);
            for x in a.iter_mut() {
                *x = (*x as u64 * ninv % p) as u32;
            }
        }
    }

    /// Product of two series truncated to `len` terms.
    pub fn mul_series(&self, a: &[u32], b: &[u32], len: usize) -> Result<Vec<u32>> {
        let la = a.len().min(len);
        let lb = b.len().min(len);
        if la == 0 || lb == 0 {
            return Ok(vec![0; len]);
        }
        let size = (la + lb - 1).next_power_of_two();
        if size > 1 << MAX_LOG_LEN {
            return Err(NumError::Budget(format!("series length {len} exceeds NTT size")));
        }
        let mut fa = vec![0u32; size];
        let mut fb = vec![0u32; size];
        fa[..la].copy_from_slice(&a[..la]);
        fb[..lb].copy_from_slice(&b[..lb]);
        self.ntt(&mut fa, false);
        self.ntt(&mut fb, false);
        for (x, y) in fa.iter_mut().zip(&fb) {
            *x = self.mul(*x, *y);
        }
        self.ntt(&mut fa, true);
        fa.truncate(len);
        fa.resize(len, 0);
        Ok(fa)
    }

    /// a^e truncated to `len` terms, by repeated squaring.
    pub fn pow_series(&self, a: &[u32], mut e: u32, len: usize) -> Result<Vec<u32>> {
        let mut result = vec![0u32; len];
        result[0] = 1;
        let mut base = a[..a.len().min(len)].to_vec();
        base.resize(len, 0);
        let mut first = true;
        while e > 0 {
            if e & 1 == 1 {
                result = if first { base.clone() } else { self.mul_series(&result, &base, len)? };
                first = false;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_series(&base, &base, len)?;
            }
        }
        Ok(result)
    }
}

/// Lift residues to the unique integer of least absolute value, using the
/// last field only as a consistency check.
pub struct Crt {
    fields: Vec<Field>,
    // inverse of p_0 ... p_{i-1} modulo p_i
    inv_prefix: Vec<u64>,
    modulus: BigInt,
    half: BigInt,
}

impl Crt {
    /// `k` reconstruction primes plus one check prime.
    pub fn new(k: usize) -> Result<Self> {
        if k + 1 > NTT_PRIMES.len() {
            return Err(NumError::Budget(format!("{k} CRT primes requested")));
        }
        let fields: Vec<Field> = NTT_PRIMES[..=k].iter().map(|&p| Field::new(p)).collect();
        let mut inv_prefix = vec![1u64];
        for i in 1..k {
            let pi = fields[i].p as u64;
            let prod = fields[..i].iter().fold(1u64, |acc, f| acc * (f.p as u64 % pi) % pi);
            inv_prefix.push(inv_mod(prod, pi).expect("distinct primes"));
        }
        let modulus = fields[..k].iter().fold(BigInt::from(1), |acc, f| acc * f.p);
        let half = &modulus >> 1;
        Ok(Crt { fields, inv_prefix, modulus, half })
    }

    /// Number of primes needed for integers of absolute value below 2^bits.
    pub fn primes_for_bits(bits: f64) -> usize {
        ((bits + 1.0) / 30.5).ceil().max(1.0) as usize
    }

    pub fn fields(&self) -> &[Field] {
        &self.fields
    }

    pub fn reconstruction_primes(&self) -> usize {
        self.fields.len() - 1
    }

    /// Garner reconstruction of one coefficient from residues[i] mod fields[i].
    pub fn lift(&self, residues: &[u32]) -> Result<BigInt> {
        let k = self.reconstruction_primes();
        let mut digits = Vec::with_capacity(k);
        for i in 0..k {
            let pi = self.fields[i].p as u64;
            // value of the partial mixed-radix sum modulo p_i
            let mut acc = 0u64;
            let mut radix = 1u64;
            for (j, &d) in digits.iter().enumerate() {
                acc = (acc + d * radix) % pi;
                radix = radix * (self.fields[j].p as u64 % pi) % pi;
            }
            let diff = (residues[i] as u64 + pi - acc) % pi;
            digits.push(diff * self.inv_prefix[i] % pi);
        }
        let mut x = BigInt::zero();
        for i in (0..k).rev() {
            x = x * self.fields[i].p + digits[i];
        }
        if x > self.half {
            x -= &self.modulus;
        }
        let check = &self.fields[k];
        let r = (&x % check.p as i64).to_i64().expect("small") as i64;
        if check.from_i64(r) != residues[k] {
            return Err(NumError::Budget(format!(
                "coefficient exceeds the CRT range ({} bits)",
                self.modulus.bits()
            )));
        }
        Ok(x)
    }

    pub fn range_bits(&self) -> u64 {
        self.modulus.bits()
    }
}

/// Magnitude in bits, for error messages and sizing.
pub fn bit_length(x: &BigInt) -> u64 {
    x.abs().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ntt_product_matches_schoolbook() {
        let f = Field::new(NTT_PRIMES[0]);
        let a: Vec<u32> = (0..37).map(|i| (i * i + 3) as u32).collect();
        let b: Vec<u32> = (0..29).map(|i| (7 * i + 1) as u32).collect();
        let c = f.mul_series(&a, &b, 50).unwrap();
        for n in 0..50 {
            let mut s = 0u64;
            for i in 0..=n {
                if i < a.len() && n - i < b.len() {
                    s = (s + a[i] as u64 * b[n - i] as u64) % f.p as u64;
                }
            }
            assert_eq!(c[n] as u64, s, "n={n}");
        }
    }

    #[test]
    fn pow_series_matches_binomial() {
        // (1 + q)^5 = 1 5 10 10 5 1
        let f = Field::new(NTT_PRIMES[3]);
        let c = f.pow_series(&[1, 1], 5, 8).unwrap();
        assert_eq!(c, vec![1, 5, 10, 10, 5, 1, 0, 0]);
    }

    #[test]
    fn crt_lifts_signed_values() {
        let crt = Crt::new(3).unwrap();
        for v in [BigInt::from(-1), BigInt::from(0), BigInt::parse_bytes(b"-123456789012345678901234", 10).unwrap()] {
            let res: Vec<u32> = crt
                .fields()
                .iter()
                .map(|f| f.from_i64((&v % f.p as i64).to_i64().unwrap()))
                .collect();
            assert_eq!(crt.lift(&res).unwrap(), v);
        }
    }

    #[test]
    fn crt_detects_overflow() {
        let crt = Crt::new(1).unwrap();
        let v = BigInt::from(1u64 << 40) * 12345;
        let res: Vec<u32> =
            crt.fields().iter().map(|f| { let r: BigInt = &v % BigInt::from(f.p); f.from_i64(i64::try_from(r).unwrap()) }).collect();
        assert!(crt.lift(&res).is_err());
    }
}
