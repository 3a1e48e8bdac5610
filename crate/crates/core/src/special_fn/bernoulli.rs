//! Exact Bernoulli numbers up to B_60.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::sync::OnceLock;

pub const MAX_INDEX: usize = 60;

fn binomial_row(n: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::from(1)];
    for k in 0..n {
        let next = &row[k] * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// B_0..=B_60 as exact rationals, with the convention B_1 = -1/2.
pub fn exact() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut b: Vec<BigRational> = Vec::with_capacity(MAX_INDEX + 1);
        b.push(BigRational::from_integer(BigInt::from(1)));
        for m in 1..=MAX_INDEX {
            let row = binomial_row(m + 1);
            let mut acc = BigRational::zero();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(row[k].clone()) * bk;
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// Floating-point rendering of the exact table.
pub fn table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| exact().iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect())
}

/// B_{2j} as f64.
pub fn b2(j: usize) -> f64 {
    table()[2 * j]
}
