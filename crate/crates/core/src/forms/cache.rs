//! Binary coefficient cache keyed by (form id, M).
//!
//! Layout, little-endian: magic `OSXC`, u32 version, u32 weight, u64 M,
//! then for n = 1..=M a u32 byte count and the two's-complement bytes of a(n).

use std::env;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::Zero;

use super::holomorphic::{normalize, FormId, HolomorphicForm};
use crate::error::{NumError, Result};

const MAGIC: &[u8; 4] = b"OSXC";
pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "OSCILLAX_CACHE_DIR";

fn io(path: &Path, e: std::io::Error) -> NumError {
    NumError::Io(format!("{}: {e}", path.display()))
}

pub fn cache_path(dir: &Path, id: &str, m: usize) -> PathBuf {
    dir.join(format!("{id}-{m}.osxc"))
}

pub fn write_cache(form: &HolomorphicForm, path: &Path) -> Result<()> {
    let mut buf = Vec::with_capacity(form.a.len() * 16 + 20);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&form.weight.to_le_bytes());
    buf.extend_from_slice(&(form.table_size() as u64).to_le_bytes());
    for a in &form.a[1..] {
        let b = a.to_signed_bytes_le();
        buf.extend_from_slice(&(b.len() as u32).to_le_bytes());
        buf.extend_from_slice(&b);
    }
    // write then rename so readers never see a partial file
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(|e| io(&tmp, e))?;
    f.write_all(&buf).map_err(|e| io(&tmp, e))?;
    drop(f);
    fs::rename(&tmp, path).map_err(|e| io(path, e))
}

fn take<'a>(buf: &mut &'a [u8], n: usize) -> Result<&'a [u8]> {
    if buf.len() < n {
        return Err(NumError::Data("cache file truncated".into()));
    }
    let (head, rest) = buf.split_at(n);
    *buf = rest;
    Ok(head)
}

fn u32_le(buf: &mut &[u8]) -> Result<u32> {
    Ok(u32::from_le_bytes(take(buf, 4)?.try_into().expect("4 bytes")))
}

pub fn read_cache(path: &Path, id: &str) -> Result<HolomorphicForm> {
    let mut bytes = Vec::new();
    fs::File::open(path).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(|e| io(path, e))?;
    let mut buf = bytes.as_slice();
    if take(&mut buf, 4)? != MAGIC {
        return Err(NumError::Data("cache file: bad magic".into()));
    }
    let version = u32_le(&mut buf)?;
    if version != CACHE_VERSION {
        return Err(NumError::Data(format!("cache file: version {version}, expected {CACHE_VERSION}")));
    }
    let weight = u32_le(&mut buf)?;
    let m = u64::from_le_bytes(take(&mut buf, 8)?.try_into().expect("8 bytes")) as usize;
    let mut a = Vec::with_capacity(m + 1);
    a.push(BigInt::zero());
    for _ in 0..m {
        let len = u32_le(&mut buf)? as usize;
        a.push(BigInt::from_signed_bytes_le(take(&mut buf, len)?));
    }
    if !buf.is_empty() {
        return Err(NumError::Data("cache file: trailing bytes".into()));
    }
    Ok(normalize(HolomorphicForm { id: id.to_string(), weight, a, lambda: Vec::new() }))
}

/// Directory from the environment, if set.
pub fn default_cache_dir() -> Option<PathBuf> {
    env::var_os(CACHE_ENV).map(PathBuf::from)
}

/// Read (id, M) from the cache directory, or expand and store it. A cache
/// entry that fails to parse or disagrees on weight is rebuilt.
pub fn load_or_build(id: FormId, m: usize, dir: Option<&Path>) -> Result<HolomorphicForm> {
    let Some(dir) = dir else {
        return id.expand(m);
    };
    let path = cache_path(dir, id.name(), m);
    if path.exists() {
        if let Ok(form) = read_cache(&path, id.name()) {
            if form.weight == id.weight() && form.table_size() == m {
                return Ok(form);
            }
        }
    }
    let form = id.expand(m)?;
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    write_cache(&form, &path)?;
    Ok(form)
}
