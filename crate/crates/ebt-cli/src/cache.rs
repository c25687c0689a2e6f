//! On-disk cache for presented groups: the relation matrix and its Smith
//! form are the expensive parts of every command, so they are stored as
//! versioned JSON entries keyed by (group, arity, variant, crate version).
//! Integers are serialized as decimal strings, cache writes go through a
//! temp-file-then-rename step, and any unreadable or mismatched entry is
//! treated as a miss.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use ebt_core::{IntMatrix, PresentedAbelianGroup, SmithForm, Variant};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "ebt/1";

/// Resolution order for the cache directory: explicit flag, `EBT_CACHE_DIR`,
/// `$XDG_CACHE_HOME/ebt`, `$HOME/.cache/ebt`, then a local `.ebt-cache`.
pub fn resolve_cache_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(dir) = flag {
        return dir.to_path_buf();
    }
    if let Some(dir) = std::env::var_os("EBT_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
        return Path::new(&dir).join("ebt");
    }
    if let Some(home) = std::env::var_os("HOME") {
        return Path::new(&home).join(".cache").join("ebt");
    }
    PathBuf::from(".ebt-cache")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub group: String,
    pub n: usize,
    pub variant: String,
    pub version: String,
}

impl CacheKey {
    pub fn new(group_canonical: &str, n: usize, variant: Variant) -> Self {
        CacheKey {
            group: group_canonical.to_string(),
            n,
            variant: variant.as_str().to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn file_name(&self) -> String {
        let sanitize = |s: &str| {
            s.chars()
                .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                .collect::<String>()
        };
        format!(
            "{}-n{}-{}-v{}.json",
            sanitize(&self.group),
            self.n,
            sanitize(&self.variant),
            sanitize(&self.version)
        )
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixDto {
    rows: usize,
    cols: usize,
    /// Row-major decimal strings.
    entries: Vec<String>,
}

impl MatrixDto {
    fn of(m: &IntMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                entries.push(m[(i, j)].to_string());
            }
        }
        MatrixDto {
            rows: m.rows(),
            cols: m.cols(),
            entries,
        }
    }

    fn build(&self) -> Option<IntMatrix> {
        if self.entries.len() != self.rows * self.cols || self.rows == 0 || self.cols == 0 {
            return None;
        }
        let parsed: Option<Vec<BigInt>> = self
            .entries
            .iter()
            .map(|s| BigInt::from_str(s).ok())
            .collect();
        let parsed = parsed?;
        Some(IntMatrix::from_fn(self.rows, self.cols, |i, j| {
            parsed[i * self.cols + j].clone()
        }))
    }
}

#[derive(Serialize, Deserialize)]
struct SmithDto {
    u: MatrixDto,
    u_inv: MatrixDto,
    v: MatrixDto,
    v_inv: MatrixDto,
    diag: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    schema: String,
    key: CacheKey,
    labels: Vec<String>,
    relations: MatrixDto,
    snf: SmithDto,
}

/// Loads a presentation from the cache. Any parse failure, schema or key
/// mismatch is reported as `None` so the caller recomputes.
pub fn load(dir: &Path, key: &CacheKey) -> Option<Arc<PresentedAbelianGroup>> {
    let bytes = fs::read(dir.join(key.file_name())).ok()?;
    let entry: CacheEntry = serde_json::from_slice(&bytes).ok()?;
    if entry.schema != SCHEMA || &entry.key != key {
        return None;
    }
    let relations = entry.relations.build()?;
    if entry.labels.len() != relations.rows() {
        return None;
    }
    let diag: Option<Vec<BigInt>> = entry
        .snf
        .diag
        .iter()
        .map(|s| BigInt::from_str(s).ok())
        .collect();
    let u = entry.snf.u.build()?;
    let u_inv = entry.snf.u_inv.build()?;
    let v = entry.snf.v.build()?;
    let v_inv = entry.snf.v_inv.build()?;
    let diag = diag?;
    if (u.rows(), u.cols()) != (relations.rows(), relations.rows())
        || (v.rows(), v.cols()) != (relations.cols(), relations.cols())
        || (u_inv.rows(), u_inv.cols()) != (u.rows(), u.cols())
        || (v_inv.rows(), v_inv.cols()) != (v.rows(), v.cols())
        || diag.len() != relations.rows().min(relations.cols())
    {
        return None;
    }
    let snf = SmithForm::from_parts(u, u_inv, v, v_inv, diag);
    Some(Arc::new(PresentedAbelianGroup::from_cached_parts(
        entry.labels,
        relations,
        snf,
    )))
}

/// Writes a presentation to the cache atomically (temp file, then rename).
/// Failures are swallowed: the cache is an accelerator, not a dependency.
pub fn store(dir: &Path, key: &CacheKey, presented: &PresentedAbelianGroup) {
    let entry = CacheEntry {
        schema: SCHEMA.to_string(),
        key: key.clone(),
        labels: presented.labels().to_vec(),
        relations: MatrixDto::of(presented.relations()),
        snf: SmithDto {
            u: MatrixDto::of(&presented.snf().u),
            u_inv: MatrixDto::of(&presented.snf().u_inv),
            v: MatrixDto::of(&presented.snf().v),
            v_inv: MatrixDto::of(&presented.snf().v_inv),
            diag: presented.snf().diag.iter().map(|d| d.to_string()).collect(),
        },
    };
    let Ok(payload) = serde_json::to_vec_pretty(&entry) else {
        return;
    };
    if fs::create_dir_all(dir).is_err() {
        return;
    }
    let target = dir.join(key.file_name());
    let tmp = dir.join(format!("{}.tmp-{}", key.file_name(), std::process::id()));
    if fs::write(&tmp, payload).is_ok() && fs::rename(&tmp, &target).is_err() {
        let _ = fs::remove_file(&tmp);
    }
}
