//! On-disk cache for cusp-space bases: one line-oriented UTF-8 file per
//! (weight, truncation), holding the dimension, the exact T_2 matrix
//! and the basis coefficients as decimal integer strings. Writes go to
//! a temp file and are renamed into place; loads re-derive T_2 from the
//! basis and reject files where the stored matrix disagrees.

use crate::hecke::{hecke_matrix, CuspSpace};
use crate::qseries::QSeries;
use crate::{Error, Result};
use rug::{Integer, Rational};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const MAGIC: &str = "L4WB-QCACHE v1";

pub fn cache_path(dir: &Path, k: u32, n_trunc: usize) -> PathBuf {
    dir.join(format!("space-k{k}-n{n_trunc}.qcache"))
}

fn cache_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Cache {
        path: path.display().to_string(),
        msg: msg.into(),
    }
}

/// Write a space (and its exact T_2 matrix) to the cache, atomically.
pub fn save(dir: &Path, space: &CuspSpace) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let d = space.dim();
    let n_trunc = space.truncation();
    let path = cache_path(dir, space.weight, n_trunc);
    let mut body = String::new();
    body.push_str(MAGIC);
    body.push('\n');
    body.push_str(&format!("weight {}\n", space.weight));
    body.push_str(&format!("truncation {n_trunc}\n"));
    body.push_str(&format!("dimension {d}\n"));
    if d > 0 {
        let t2 = hecke_matrix(space, 2)?;
        body.push_str("t2");
        for row in &t2 {
            for e in row {
                debug_assert!(*e.denom() == 1);
                body.push(' ');
                body.push_str(&e.numer().to_string());
            }
        }
        body.push('\n');
        for (i, g) in space.basis.iter().enumerate() {
            body.push_str(&format!("basis {}\n", i + 1));
            for c in &g.coeffs {
                debug_assert!(*c.denom() == 1);
                body.push_str(&c.numer().to_string());
                body.push('\n');
            }
        }
    }
    let tmp = path.with_extension("qcache.tmp");
    {
        let mut fh = fs::File::create(&tmp)?;
        fh.write_all(body.as_bytes())?;
        fh.sync_all()?;
    }
    fs::rename(&tmp, &path)?;
    Ok(path)
}

/// Load a cached space; Ok(None) when absent, an error when corrupt.
pub fn load(dir: &Path, k: u32, n_trunc: usize) -> Result<Option<CuspSpace>> {
    let path = cache_path(dir, k, n_trunc);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let mut lines = text.lines();
    if lines.next() != Some(MAGIC) {
        return Err(cache_err(&path, "bad or missing version header"));
    }
    let mut field = |name: &str| -> Result<u64> {
        let line = lines
            .next()
            .ok_or_else(|| cache_err(&path, format!("missing {name}")))?;
        let rest = line
            .strip_prefix(name)
            .ok_or_else(|| cache_err(&path, format!("expected {name} line")))?;
        rest.trim()
            .parse::<u64>()
            .map_err(|e| cache_err(&path, format!("bad {name}: {e}")))
    };
    let weight = field("weight")? as u32;
    let trunc = field("truncation")? as usize;
    let dim = field("dimension")? as usize;
    if weight != k || trunc != n_trunc {
        return Err(cache_err(&path, "header disagrees with file name"));
    }
    if dim == 0 {
        return Ok(Some(CuspSpace {
            weight,
            truncation: trunc,
            basis: Vec::new(),
        }));
    }
    let t2_line = lines
        .next()
        .and_then(|l| l.strip_prefix("t2"))
        .ok_or_else(|| cache_err(&path, "missing t2 line"))?;
    let t2_entries: Vec<Integer> = t2_line
        .split_whitespace()
        .map(|s| {
            s.parse::<Integer>()
                .map_err(|e| cache_err(&path, format!("bad t2 entry: {e}")))
        })
        .collect::<Result<_>>()?;
    if t2_entries.len() != dim * dim {
        return Err(cache_err(&path, "t2 matrix has wrong size"));
    }
    let mut basis = Vec::with_capacity(dim);
    for i in 1..=dim {
        let head = lines.next();
        if head != Some(&format!("basis {i}")) {
            return Err(cache_err(&path, format!("missing basis {i} header")));
        }
        let mut coeffs = Vec::with_capacity(trunc + 1);
        for n in 0..=trunc {
            let line = lines
                .next()
                .ok_or_else(|| cache_err(&path, format!("basis {i} truncated at {n}")))?;
            let v = line
                .parse::<Integer>()
                .map_err(|e| cache_err(&path, format!("bad coefficient: {e}")))?;
            coeffs.push(Rational::from(v));
        }
        basis.push(QSeries::new(weight, coeffs));
    }
    let space = CuspSpace {
        weight,
        truncation: trunc,
        basis,
    };
    // integrity: the stored T2 must match the one the basis implies
    let t2 = hecke_matrix(&space, 2)?;
    for i in 0..dim {
        for j in 0..dim {
            if t2[i][j] != t2_entries[i * dim + j] {
                return Err(cache_err(&path, "stored T2 disagrees with basis"));
            }
        }
    }
    Ok(Some(space))
}

/// Load from the cache if possible, otherwise build and (best-effort)
/// store. `dir = None` always builds.
pub fn load_or_build(dir: Option<&Path>, k: u32, n_trunc: usize) -> Result<CuspSpace> {
    if let Some(dir) = dir {
        if let Some(space) = load(dir, k, n_trunc)? {
            return Ok(space);
        }
    }
    let space = crate::hecke::victor_miller_basis(k, n_trunc)?;
    if let Some(dir) = dir {
        save(dir, &space)?;
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hecke::victor_miller_basis;

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let space = victor_miller_basis(24, 40).unwrap();
        let path = save(dir.path(), &space).unwrap();
        assert!(path.exists());
        let loaded = load(dir.path(), 24, 40).unwrap().unwrap();
        assert_eq!(loaded.weight, 24);
        assert_eq!(loaded.dim(), 2);
        for (a, b) in loaded.basis.iter().zip(space.basis.iter()) {
            assert_eq!(a.coeffs, b.coeffs);
        }
    }

    #[test]
    fn missing_is_none() {
        let dir = tempfile::tempdir().unwrap();
        assert!(load(dir.path(), 12, 50).unwrap().is_none());
    }

    #[test]
    fn corrupt_header_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let space = victor_miller_basis(12, 30).unwrap();
        let path = save(dir.path(), &space).unwrap();
        let mut text = fs::read_to_string(&path).unwrap();
        text = text.replacen(MAGIC, "L4WB-QCACHE v0", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(
            load(dir.path(), 12, 30),
            Err(Error::Cache { .. })
        ));
    }

    #[test]
    fn tampered_coefficient_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let space = victor_miller_basis(12, 30).unwrap();
        let path = save(dir.path(), &space).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        // flip tau(2) = -24 to -25: T2 consistency check must fire
        let text = text.replacen("\n-24\n", "\n-25\n", 1);
        fs::write(&path, text).unwrap();
        assert!(matches!(
            load(dir.path(), 12, 30),
            Err(Error::Cache { .. })
        ));
    }

    #[test]
    fn load_or_build_populates() {
        let dir = tempfile::tempdir().unwrap();
        let s1 = load_or_build(Some(dir.path()), 16, 25).unwrap();
        assert!(cache_path(dir.path(), 16, 25).exists());
        let s2 = load_or_build(Some(dir.path()), 16, 25).unwrap();
        assert_eq!(s1.basis[0].coeffs, s2.basis[0].coeffs);
    }

    #[test]
    fn zero_dimension_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let space = victor_miller_basis(14, 10).unwrap();
        save(dir.path(), &space).unwrap();
        let loaded = load(dir.path(), 14, 10).unwrap().unwrap();
        assert_eq!(loaded.dim(), 0);
    }
}
