//! Products of `E4`, `E6` and `Δ` named by strings such as `e4^2*delta`.

use std::fmt;
use std::str::FromStr;

use super::{delta, delta_mod, eisenstein, eisenstein_mod};
use crate::error::{Error, Result};
use crate::qseries::{FormDescriptor, IntSeries, ModSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    E4,
    E6,
    Delta,
}

impl Generator {
    pub fn weight(self) -> i64 {
        match self {
            Generator::E4 => 4,
            Generator::E6 => 6,
            Generator::Delta => 12,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Generator::E4 => "E4",
            Generator::E6 => "E6",
            Generator::Delta => "Delta",
        })
    }
}

/// A monomial `E4^a E6^b Δ^c` with at least one factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedForm {
    factors: Vec<(Generator, u32)>,
}

impl NamedForm {
    pub fn weight(&self) -> i64 {
        self.factors
            .iter()
            .map(|&(g, e)| g.weight() * e as i64)
            .sum()
    }

    pub fn descriptor(&self) -> FormDescriptor {
        FormDescriptor::level_one(self.to_string(), self.weight())
    }

    pub fn series(&self, precision: i64) -> Result<IntSeries> {
        let mut acc: Option<IntSeries> = None;
        for &(g, e) in &self.factors {
            let base = match g {
                Generator::Delta => delta(precision)?,
                _ => eisenstein(g.weight(), precision)?,
            };
            let term = base.pow(e);
            acc = Some(match acc {
                None => term,
                Some(a) => a.mul(&term)?,
            });
        }
        Ok(acc
            .expect("at least one factor")
            .with_descriptor(self.descriptor()))
    }

    pub fn series_mod(&self, ell: u64, precision: i64) -> Result<ModSeries> {
        let mut acc: Option<ModSeries> = None;
        for &(g, e) in &self.factors {
            let base = match g {
                Generator::Delta => delta_mod(ell, precision)?,
                _ => eisenstein_mod(g.weight(), ell, precision)?,
            };
            let term = base.pow(e);
            acc = Some(match acc {
                None => term,
                Some(a) => a.mul(&term)?,
            });
        }
        Ok(acc
            .expect("at least one factor")
            .with_descriptor(self.descriptor()))
    }
}

impl fmt::Display for NamedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(g, e)| {
                if e == 1 {
                    g.to_string()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for NamedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut exps = [0u32; 3];
        for part in s.split('*') {
            let (name, exp) = match part.trim().split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u32>()
                        .map_err(|_| Error::Usage(format!("bad exponent in {part:?}")))?,
                ),
                None => (part.trim(), 1),
            };
            let g = match name.to_ascii_lowercase().as_str() {
                "e4" => Generator::E4,
                "e6" => Generator::E6,
                "delta" => Generator::Delta,
                _ => {
                    return Err(Error::Usage(format!(
                        "unknown form {name:?} (expected e4, e6 or delta)"
                    )))
                }
            };
            exps[g as usize] += exp;
        }
        let factors: Vec<(Generator, u32)> = [Generator::E4, Generator::E6, Generator::Delta]
            .into_iter()
            .zip(exps)
            .filter(|&(_, e)| e > 0)
            .collect();
        if factors.is_empty() {
            return Err(Error::Usage(format!("form {s:?} has no factors")));
        }
        Ok(NamedForm { factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_weight() {
        let f: NamedForm = "e4^2*delta".parse().unwrap();
        assert_eq!(f.weight(), 20);
        assert_eq!(f.to_string(), "E4^2*Delta");
        assert_eq!("Delta*E4*e4".parse::<NamedForm>().unwrap(), f);
        assert!("e8".parse::<NamedForm>().is_err());
        assert!("e4^0".parse::<NamedForm>().is_err());
    }

    #[test]
    fn series_agree() {
        let f: NamedForm = "e6*delta".parse().unwrap();
        let exact = f.series(60).unwrap().reduce_mod(11).unwrap();
        assert_eq!(exact, f.series_mod(11, 60).unwrap());
        assert_eq!(exact.descriptor().unwrap().name, "E6*Delta");
    }
}
