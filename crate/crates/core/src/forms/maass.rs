//! Maass form coefficient ingestion and the synthetic sample generator.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{Eigenform, Spectral};
use crate::arith::{divisor_counts, smallest_prime_factors};
use crate::error::{NumError, Result};

/// Kim-Sarnak exponent.
pub const THETA: f64 = 7.0 / 64.0;
/// Slack on the coefficient bound for rounded tabulated data.
pub const BOUND_SLACK: f64 = 1.05;
pub const SYNTHETIC_LABEL: &str = "synthetic-non-automorphic";

/// On-disk layout.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaassFile {
    #[serde(rename = "type")]
    pub kind: String,
    pub mu: f64,
    pub parity: u8,
    pub epsilon: i8,
    pub coefficients: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Validated Maass eigenvalue data; lambda[0] is unused.
#[derive(Clone, Debug)]
pub struct MaassFormData {
    pub mu: f64,
    pub parity: u8,
    pub epsilon: i8,
    pub lambda: Vec<f64>,
    /// sha256 of the source bytes, hex.
    pub provenance: String,
    pub label: String,
}

impl MaassFormData {
    pub fn is_synthetic(&self) -> bool {
        self.label == SYNTHETIC_LABEL
    }

    pub fn to_file(&self) -> MaassFile {
        MaassFile {
            kind: "maass".into(),
            mu: self.mu,
            parity: self.parity,
            epsilon: self.epsilon,
            coefficients: self.lambda[1..].to_vec(),
            label: Some(self.label.clone()),
        }
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Parse and validate; invariant violations name the offending n.
pub fn parse_maass(bytes: &[u8]) -> Result<MaassFormData> {
    let file: MaassFile =
        serde_json::from_slice(bytes).map_err(|e| NumError::Data(format!("schema: {e}")))?;
    if file.kind != "maass" {
        return Err(NumError::Data(format!("schema: type must be \"maass\", got {:?}", file.kind)));
    }
    if !(file.mu.is_finite() && file.mu > 0.0) {
        return Err(NumError::Data(format!("mu must be positive, got {}", file.mu)));
    }
    if file.parity > 1 {
        return Err(NumError::Data(format!("parity must be 0 or 1, got {}", file.parity)));
    }
    if file.epsilon != 1 && file.epsilon != -1 {
        return Err(NumError::Data(format!("epsilon must be 1 or -1, got {}", file.epsilon)));
    }
    let c = &file.coefficients;
    if c.is_empty() {
        return Err(NumError::Data("no coefficients".into()));
    }
    if (c[0] - 1.0).abs() > 1e-9 {
        return Err(NumError::Data(format!("invariant violated at n = 1: lambda(1) = {}", c[0])));
    }
    let d = divisor_counts(c.len());
    for (i, &v) in c.iter().enumerate() {
        let n = i + 1;
        let bound = d[n] as f64 * (n as f64).powf(THETA) * BOUND_SLACK;
        if !v.is_finite() || v.abs() > bound {
            return Err(NumError::Data(format!(
                "invariant violated at n = {n}: |lambda| = {} exceeds {bound:.4}",
                v.abs()
            )));
        }
    }
    let mut lambda = Vec::with_capacity(c.len() + 1);
    lambda.push(0.0);
    lambda.extend_from_slice(c);
    Ok(MaassFormData {
        mu: file.mu,
        parity: file.parity,
        epsilon: file.epsilon,
        lambda,
        provenance: hex(&Sha256::digest(bytes)),
        label: file.label.unwrap_or_else(|| "maass".into()),
    })
}

pub fn load_maass_coefficients(path: &Path) -> Result<MaassFormData> {
    let bytes = std::fs::read(path).map_err(|e| NumError::Io(format!("{}: {e}", path.display())))?;
    parse_maass(&bytes)
}

pub fn write_maass_json(data: &MaassFormData, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&data.to_file()).map_err(|e| NumError::Data(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| NumError::Io(format!("{}: {e}", path.display())))
}

/// Hecke-consistent but non-automorphic coefficients: lambda(p) = 2 cos(theta_p)
/// with theta_p uniform on [0, pi], extended through prime powers by the
/// Hecke recursion and multiplicatively across primes.
pub fn synthetic_maass(mu: f64, parity: u8, epsilon: i8, m: usize, seed: u64) -> MaassFormData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spf = smallest_prime_factors(m);
    let mut lambda = vec![0.0; m + 1];
    if m >= 1 {
        lambda[1] = 1.0;
    }
    for n in 2..=m {
        let p = spf[n] as usize;
        if p == n {
            lambda[n] = 2.0 * rng.gen_range(0.0..std::f64::consts::PI).cos();
            continue;
        }
        let mut r = n;
        let mut pk = 1;
        while r % p == 0 {
            r /= p;
            pk *= p;
        }
        lambda[n] = if r > 1 {
            lambda[r] * lambda[pk]
        } else {
            // n = p^k, k >= 2
            lambda[p] * lambda[n / p] - lambda[n / p / p]
        };
    }
    let mut data = MaassFormData {
        mu,
        parity,
        epsilon,
        lambda,
        provenance: String::new(),
        label: SYNTHETIC_LABEL.into(),
    };
    if let Ok(text) = serde_json::to_vec(&data.to_file()) {
        data.provenance = hex(&Sha256::digest(text));
    }
    data
}

impl Eigenform for MaassFormData {
    fn spectral(&self) -> Spectral {
        Spectral::Maass { mu: self.mu, parity: self.parity, epsilon: self.epsilon }
    }

    fn table_len(&self) -> usize {
        self.lambda.len() - 1
    }

    fn lambda(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(NumError::Domain("coefficients start at n = 1".into()));
        }
        self.lambda.get(n as usize).copied().ok_or_else(|| {
            NumError::Data(format!("table exhausted: n = {n} beyond M = {}", self.table_len()))
        })
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn is_automorphic(&self) -> bool {
        !self.is_synthetic()
    }
}
