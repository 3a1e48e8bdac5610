//! Hecke eigenvalue providers: exact q-expansions for the level-one forms of
//! weight 12 and 16, and validated ingestion of Maass coefficient files.

pub mod cache;
mod holomorphic;
mod maass;
pub mod ntt;

pub use cache::{load_or_build, read_cache, write_cache};
pub use holomorphic::{
    delta_qexp, eigenform_weight16, hecke_check, normalize, DeligneReport, FormId, HolomorphicForm,
    DEFAULT_TABLE, MAX_TABLE,
};
pub use maass::{
    load_maass_coefficients, parse_maass, synthetic_maass, write_maass_json, MaassFile,
    MaassFormData, BOUND_SLACK, SYNTHETIC_LABEL, THETA,
};

use crate::error::{NumError, Result};

/// Archimedean type of an eigenform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Spectral {
    Holomorphic { weight: u32 },
    Maass { mu: f64, parity: u8, epsilon: i8 },
}

/// Anything that can supply normalized Hecke eigenvalues lambda(n), n >= 1.
pub trait Eigenform: Send + Sync {
    fn spectral(&self) -> Spectral;
    /// Largest tabulated n.
    fn table_len(&self) -> usize;
    fn lambda(&self, n: u64) -> Result<f64>;
    fn label(&self) -> &str;
    /// False for synthetic data that only mimics Hecke relations.
    fn is_automorphic(&self) -> bool {
        true
    }
}

/// sum_{n <= x} |lambda(n)|^2.
pub fn rankin_selberg_partial(form: &dyn Eigenform, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(NumError::Domain(format!("x = {x}")));
    }
    let n = x.floor() as u64;
    if n as usize > form.table_len() {
        return Err(NumError::Data(format!(
            "table exhausted: x = {x} beyond M = {}",
            form.table_len()
        )));
    }
    let mut s = 0.0;
    for k in 1..=n {
        let l = form.lambda(k)?;
        s += l * l;
    }
    Ok(s)
}
