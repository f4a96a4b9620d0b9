//! Form identifiers and the on-disk cache of exact q-expansions.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use mockperiods::qforms::{cusp_space_basis, delta, weakly_holomorphic_m10, FormKind, QSeries, TailBound};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

/// Environment variable naming the cache directory; caching is off when unset.
pub const CACHE_ENV: &str = "MOCKPERIODS_CACHE_DIR";

/// A form named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormId {
    Delta,
    /// The normalized generator of `S_k`, or the zero form when `S_k = 0`.
    Cusp(i32),
    /// `E₄²E₆/Δ²`.
    M10,
    File(PathBuf),
}

impl FromStr for FormId {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Usage(format!("unknown form `{s}` (try delta, cusp16, m10 or file:PATH)"));
        match s {
            "delta" => Ok(FormId::Delta),
            "m10" => Ok(FormId::M10),
            _ => {
                if let Some(path) = s.strip_prefix("file:") {
                    return Ok(FormId::File(path.into()));
                }
                let k = s.strip_prefix("cusp").ok_or_else(bad)?;
                k.parse().map(FormId::Cusp).map_err(|_| bad())
            }
        }
    }
}

impl std::fmt::Display for FormId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FormId::Delta => write!(f, "delta"),
            FormId::Cusp(k) => write!(f, "cusp{k}"),
            FormId::M10 => write!(f, "m10"),
            FormId::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FormId {
    /// The q-expansion with `n` coefficients past the constant term; `None`
    /// for an empty cusp space.
    pub fn load(&self, n: usize) -> Result<Option<QSeries>, CliError> {
        match self {
            FormId::File(path) => Ok(Some(QSeries::read(path)?)),
            FormId::Cusp(k) if cusp_space_basis(*k, 2)?.is_none() => Ok(None),
            _ => {
                let build = || -> Result<QSeries, CliError> {
                    Ok(match self {
                        FormId::Delta => delta(n)?,
                        FormId::Cusp(k) => cusp_space_basis(*k, n)?.expect("nonzero space checked above"),
                        _ => weakly_holomorphic_m10(n)?,
                    })
                };
                match std::env::var_os(CACHE_ENV) {
                    Some(dir) => cached(Path::new(&dir), &self.to_string(), n, build).map(Some),
                    None => build().map(Some),
                }
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CacheEntry {
    constructor: String,
    n: usize,
    kind: FormKind,
    tail: TailBound,
    text: String,
    sha256: String,
}

fn checksum(constructor: &str, n: usize, kind: FormKind, tail: TailBound, text: &str) -> String {
    let meta = serde_json::to_string(&(constructor, n, kind, tail)).unwrap_or_default();
    let mut h = Sha256::new();
    h.update(meta.as_bytes());
    h.update([0u8]);
    h.update(text.as_bytes());
    hex::encode(h.finalize())
}

fn read_entry(path: &Path, constructor: &str, n: usize) -> Option<QSeries> {
    let entry: CacheEntry = serde_json::from_str(&std::fs::read_to_string(path).ok()?).ok()?;
    if entry.constructor != constructor || entry.n != n {
        return None;
    }
    if checksum(constructor, n, entry.kind, entry.tail, &entry.text) != entry.sha256 {
        return None;
    }
    let parsed = QSeries::parse(&entry.text).ok()?;
    let f = QSeries::from_coeffs(parsed.weight(), parsed.n_min(), parsed.coeffs().to_vec(), entry.tail);
    Some(f.with_kind(entry.kind))
}

/// Loads `constructor`-`n` from `dir`, rebuilding (and rewriting) missing or
/// corrupt entries. Write failures are ignored: the cache is an optimization.
fn cached<F>(dir: &Path, constructor: &str, n: usize, build: F) -> Result<QSeries, CliError>
where
    F: FnOnce() -> Result<QSeries, CliError>,
{
    let path = dir.join(format!("{constructor}-{n}.json"));
    if let Some(f) = read_entry(&path, constructor, n) {
        return Ok(f);
    }
    let f = build()?;
    let text = f.to_text();
    let entry = CacheEntry {
        constructor: constructor.to_string(),
        n,
        kind: f.kind(),
        tail: f.tail(),
        sha256: checksum(constructor, n, f.kind(), f.tail(), &text),
        text,
    };
    if std::fs::create_dir_all(dir).is_ok() {
        if let Ok(json) = serde_json::to_string(&entry) {
            let tmp = path.with_extension("tmp");
            if std::fs::write(&tmp, json).is_ok() {
                let _ = std::fs::rename(&tmp, &path);
            }
        }
    }
    Ok(f)
}
