//! JSON cache records for series.
//!
//! ```json
//! {"descriptor": {...} | null, "domain": "int" | "mod 7", "denom": 1,
//!  "valuation": 0, "precision": 100, "coefficients": ["1", "-24", ...]}
//! ```
//!
//! Integer coefficients are decimal strings; residues are plain numbers.
//! Output is byte-stable for a given series.

use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{FormDescriptor, IntSeries, Integers, ModSeries, QExpansion, ResidueRing};
use crate::error::{Error, Result};

/// A series over either supported cache domain.
#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Int(IntSeries),
    Mod(ModSeries),
}

#[derive(Serialize, Deserialize)]
struct Record {
    descriptor: Option<FormDescriptor>,
    domain: String,
    denom: u64,
    valuation: i64,
    precision: i64,
    coefficients: Vec<Value>,
}

impl AnySeries {
    pub fn descriptor(&self) -> Option<&FormDescriptor> {
        match self {
            AnySeries::Int(s) => s.descriptor(),
            AnySeries::Mod(s) => s.descriptor(),
        }
    }

    pub fn domain_label(&self) -> String {
        match self {
            AnySeries::Int(_) => "int".into(),
            AnySeries::Mod(s) => format!("mod {}", s.ell()),
        }
    }

    /// Reduce to residues mod `ell` (a no-op when already mod `ell`).
    pub fn to_mod(&self, ell: u64) -> Result<ModSeries> {
        match self {
            AnySeries::Int(s) => s.reduce_mod(ell),
            AnySeries::Mod(s) if s.ell() == ell => Ok(s.clone()),
            AnySeries::Mod(s) => Err(Error::DomainMismatch(format!(
                "series is mod {}, requested mod {ell}",
                s.ell()
            ))),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let record = match self {
            AnySeries::Int(s) => header(s, "int".into(), |c| Value::String(c.to_string())),
            AnySeries::Mod(s) => header(s, format!("mod {}", s.ell()), |c| Value::from(*c)),
        };
        Ok(serde_json::to_string(&record)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Record = serde_json::from_str(text)?;
        let expected = r.precision - r.valuation;
        if expected < 0 || r.coefficients.len() as i64 != expected {
            return Err(Error::Format(format!(
                "window [{}, {}) does not match {} coefficients",
                r.valuation,
                r.precision,
                r.coefficients.len()
            )));
        }
        let bad = |v: &Value| Error::Format(format!("bad coefficient {v}"));
        let out = if r.domain == "int" {
            let coeffs = r
                .coefficients
                .iter()
                .map(|v| {
                    v.as_str()
                        .and_then(|s| s.parse::<BigInt>().ok())
                        .ok_or_else(|| bad(v))
                })
                .collect::<Result<Vec<_>>>()?;
            let mut s = QExpansion::new(Integers, r.denom, r.valuation, coeffs)?;
            s.set_descriptor(r.descriptor);
            AnySeries::Int(s)
        } else if let Some(ell) = r.domain.strip_prefix("mod ") {
            let ell: u64 = ell
                .parse()
                .map_err(|_| Error::Format(format!("bad domain {:?}", r.domain)))?;
            let ring = ResidueRing::new(ell)?;
            let coeffs = r
                .coefficients
                .iter()
                .map(|v| v.as_u64().filter(|&c| c < ell).ok_or_else(|| bad(v)))
                .collect::<Result<Vec<_>>>()?;
            let mut s = QExpansion::new(ring, r.denom, r.valuation, coeffs)?;
            s.set_descriptor(r.descriptor);
            AnySeries::Mod(s)
        } else {
            return Err(Error::Format(format!("unknown domain {:?}", r.domain)));
        };
        Ok(out)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

fn header<R: super::CoeffRing>(
    s: &QExpansion<R>,
    domain: String,
    enc: impl Fn(&R::Elem) -> Value,
) -> Record {
    Record {
        descriptor: s.descriptor().cloned(),
        domain,
        denom: s.denom(),
        valuation: s.valuation(),
        precision: s.precision(),
        coefficients: s.coeffs().iter().map(enc).collect(),
    }
}

/// Environment variable naming the series cache directory.
pub const CACHE_ENV: &str = "CONGRUENCE_LAB_CACHE";

/// A directory of cache records keyed by form name, domain and precision.
#[derive(Debug, Clone)]
pub struct SeriesCache {
    dir: std::path::PathBuf,
}

impl SeriesCache {
    pub fn new(dir: impl Into<std::path::PathBuf>) -> Self {
        SeriesCache { dir: dir.into() }
    }

    /// The cache named by `CONGRUENCE_LAB_CACHE`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV)
            .filter(|v| !v.is_empty())
            .map(SeriesCache::new)
    }

    fn path(&self, key: &str, domain: &str, precision: i64) -> std::path::PathBuf {
        let clean = |s: &str| -> String {
            s.chars()
                .map(|c| {
                    if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                        c
                    } else {
                        '_'
                    }
                })
                .collect()
        };
        self.dir
            .join(format!("{}.{}.{precision}.json", clean(key), clean(domain)))
    }

    /// Reads the record for `key` or computes and stores it. Unreadable
    /// records are recomputed.
    pub fn get_or_insert(
        &self,
        key: &str,
        domain: &str,
        precision: i64,
        compute: impl FnOnce() -> Result<AnySeries>,
    ) -> Result<AnySeries> {
        let path = self.path(key, domain, precision);
        if let Ok(s) = AnySeries::read(&path) {
            return Ok(s);
        }
        let s = compute()?;
        std::fs::create_dir_all(&self.dir)?;
        // Write then rename so a concurrent reader never sees a partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        s.write(&tmp)?;
        std::fs::rename(&tmp, &path)?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_both_domains() {
        let f = IntSeries::from_i64s(&[1, -24, 252, -1472])
            .with_descriptor(FormDescriptor::level_one("delta", 12));
        let a = AnySeries::Int(f.clone());
        let text = a.to_json().unwrap();
        assert!(text.contains("\"-24\""));
        let b = AnySeries::from_json(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.descriptor().unwrap().name, "delta");
        assert_eq!(b.to_json().unwrap(), text);

        let m = AnySeries::Mod(f.reduce_mod(7).unwrap());
        let text = m.to_json().unwrap();
        assert_eq!(AnySeries::from_json(&text).unwrap(), m);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = SeriesCache::new(dir.path());
        let s = AnySeries::Int(crate::forms::delta(30).unwrap());
        let first = cache
            .get_or_insert("Delta", "int", 30, || Ok(s.clone()))
            .unwrap();
        let again = cache
            .get_or_insert("Delta", "int", 30, || {
                Err(Error::Usage("recomputed".into()))
            })
            .unwrap();
        assert_eq!(first, again);
    }

    #[test]
    fn rejects_inconsistent_window() {
        let bad = r#"{"descriptor":null,"domain":"int","denom":1,"valuation":0,"precision":3,"coefficients":["1"]}"#;
        assert!(matches!(AnySeries::from_json(bad), Err(Error::Format(_))));
    }
}
