//! Disk cache for the phi sieve.
//!
//! Format: magic "PHIS", one version byte (1), the horizon n as 8-byte
//! little-endian, then n 8-byte little-endian values phi(1..=n). Loading
//! validates magic, version, and exact length, and spot-checks 16 random
//! entries against a direct phi computation.

use crate::arith::euler_phi;
use crate::error::{Error, Result};
use crate::sparsely_totient::PhiSieve;
use rand::Rng;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MAGIC: [u8; 4] = *b"PHIS";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 13;

/// Cache directory resolution: explicit override, then TOTIENTS_CACHE_DIR,
/// then XDG_CACHE_HOME/totients, then ~/.cache/totients, then the system
/// temp directory.
pub fn cache_dir(flag_override: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag_override {
        return dir.to_path_buf();
    }
    if let Ok(dir) = std::env::var("TOTIENTS_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Ok(dir) = std::env::var("XDG_CACHE_HOME") {
        return PathBuf::from(dir).join("totients");
    }
    if let Ok(home) = std::env::var("HOME") {
        return PathBuf::from(home).join(".cache").join("totients");
    }
    std::env::temp_dir().join("totients")
}

pub fn sieve_path(dir: &Path) -> PathBuf {
    dir.join("phi_sieve.bin")
}

/// Writes the sieve atomically (temp file, then rename).
pub fn save_sieve(path: &Path, sieve: &PhiSieve) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::io::BufWriter::new(fs::File::create(&tmp)?);
        f.write_all(&MAGIC)?;
        f.write_all(&[VERSION])?;
        f.write_all(&sieve.horizon().to_le_bytes())?;
        for &v in sieve.phi_values() {
            f.write_all(&v.to_le_bytes())?;
        }
        f.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_sieve(path: &Path) -> Result<PhiSieve> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_LEN {
        return Err(Error::CorruptCache(format!("file is {} bytes, header needs {HEADER_LEN}", bytes.len())));
    }
    if bytes[0..4] != MAGIC {
        return Err(Error::CorruptCache("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::CorruptCache(format!("unsupported version {}", bytes[4])));
    }
    let n = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let expected = HEADER_LEN as u64 + 8 * n;
    if bytes.len() as u64 != expected {
        return Err(Error::CorruptCache(format!(
            "horizon {n} implies {expected} bytes, file has {}",
            bytes.len()
        )));
    }
    if n == 0 {
        return Err(Error::CorruptCache("horizon 0".into()));
    }
    let values: Vec<u64> = bytes[HEADER_LEN..]
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let sieve = PhiSieve::from_phi_values(values);
    if sieve.phi(1) != 1 {
        return Err(Error::CorruptCache(format!("phi(1) stored as {}", sieve.phi(1))));
    }
    // Spot-check the last entry plus 16 random ones against an independent
    // computation.
    let mut rng = rand::thread_rng();
    for i in 0..17 {
        let k = if i == 0 { n } else { rng.gen_range(1..=n) };
        let direct = euler_phi(k)?;
        if sieve.phi(k) != direct {
            return Err(Error::CorruptCache(format!(
                "phi({k}) stored as {}, recomputed {direct}",
                sieve.phi(k)
            )));
        }
    }
    Ok(sieve)
}

/// Loads a cached sieve when its horizon covers `n`; otherwise builds one
/// (to at least `n`) and refreshes the cache. A corrupt cache file falls
/// back to a rebuild.
pub fn load_or_build(dir: &Path, n: u64, budget_bytes: u64) -> Result<PhiSieve> {
    let path = sieve_path(dir);
    match load_sieve(&path) {
        Ok(sieve) if sieve.horizon() >= n => return Ok(sieve),
        Ok(_) | Err(Error::CorruptCache(_)) | Err(Error::Io(_)) => {}
        Err(e) => return Err(e),
    }
    let sieve = PhiSieve::build_with_budget(n, budget_bytes)?;
    // Failure to persist should not fail the computation.
    let _ = save_sieve(&path, &sieve);
    Ok(sieve)
}
