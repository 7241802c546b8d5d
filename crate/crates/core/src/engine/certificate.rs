//! Congruence claims and the certificate record format.

use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::algebra::arith::gcd;
use crate::criterion::LPolyRecord;
use crate::error::{Error, Result};

/// A set of coefficient indices on which a form is claimed to vanish mod `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `{M n + β}`.
    Progression { modulus: u64, residue: u64 },
    /// `{S n + o : p ∤ n}`.
    Gap {
        stride: u64,
        offset: u64,
        gap_prime: u64,
    },
}

impl Claim {
    pub fn progression(modulus: u64, residue: i64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::Usage("progression modulus must be positive".into()));
        }
        Ok(Claim::Progression {
            modulus,
            residue: residue.rem_euclid(modulus as i64) as u64,
        })
    }

    pub fn gap(stride: u64, offset: u64, gap_prime: u64) -> Result<Self> {
        if stride == 0 {
            return Err(Error::Usage("gap stride must be positive".into()));
        }
        if !crate::algebra::arith::is_prime(gap_prime) {
            return Err(Error::Usage(format!("gap prime {gap_prime} is not prime")));
        }
        Ok(Claim::Gap {
            stride,
            offset,
            gap_prime,
        })
    }

    pub fn contains(&self, n: i64) -> bool {
        match *self {
            Claim::Progression { modulus, residue } => {
                n.rem_euclid(modulus as i64) as u64 == residue
            }
            Claim::Gap {
                stride,
                offset,
                gap_prime,
            } => {
                let t = n - offset as i64;
                t % stride as i64 == 0 && (t / stride as i64).rem_euclid(gap_prime as i64) != 0
            }
        }
    }

    /// Members in `[0, bound]`, ascending.
    pub fn members(&self, bound: i64) -> Box<dyn Iterator<Item = i64>> {
        match *self {
            Claim::Progression { modulus, residue } => {
                Box::new((residue as i64..=bound).step_by(modulus as usize))
            }
            Claim::Gap {
                stride,
                offset,
                gap_prime,
            } => {
                let (s, o, p) = (stride as i64, offset as i64, gap_prime as i64);
                // Smallest n with s n + o ≥ 0.
                let start = -(o / s);
                Box::new(
                    (start..)
                        .map(move |n| (n, s * n + o))
                        .take_while(move |&(_, v)| v <= bound)
                        .filter(move |&(n, _)| n.rem_euclid(p) != 0)
                        .map(|(_, v)| v),
                )
            }
        }
    }

    /// `(modulus, residue)` of the enclosing progression.
    pub fn envelope(&self) -> (u64, u64) {
        match *self {
            Claim::Progression { modulus, residue } => (modulus, residue),
            Claim::Gap { stride, offset, .. } => (stride, offset % stride),
        }
    }

    /// Period of the membership indicator.
    pub fn period(&self) -> u64 {
        match *self {
            Claim::Progression { modulus, .. } => modulus,
            Claim::Gap {
                stride, gap_prime, ..
            } => stride * gap_prime,
        }
    }

    /// True if every member of `self` is a member of `other`, checked over
    /// one common period of the two indicators.
    pub fn is_subset_of(&self, other: &Claim) -> bool {
        let (a, b) = (self.period(), other.period());
        let l = (a / gcd(a, b)) as i64 * b as i64;
        (0..l).all(|n| !self.contains(n) || other.contains(n))
    }

    pub fn gap_prime(&self) -> Option<u64> {
        match *self {
            Claim::Gap { gap_prime, .. } => Some(gap_prime),
            Claim::Progression { .. } => None,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Claim::Progression { modulus, residue } => write!(f, "{modulus}n + {residue}"),
            Claim::Gap {
                stride,
                offset,
                gap_prime,
            } => write!(f, "{stride}n + {offset} ({gap_prime} ∤ n)"),
        }
    }
}

/// Why a claim is believed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Every member up to `bound` was checked; `support` members were tested.
    VerifiedToBound { bound: i64, support: u64 },
    /// Every nonconstant `T_p`-eigencomponent admits the exponent `m`.
    CertifiedHecke {
        p: u64,
        m: u64,
        constant_components: usize,
        components: Vec<LPolyRecord>,
    },
    /// Obtained from `parent` by a congruence-calculus rule.
    DerivedByRule {
        rule: String,
        parent: Box<CongruenceCertificate>,
        /// Bound to which the derived claim was re-checked, if any.
        rechecked_to: Option<i64>,
    },
}

/// A larger set than the claim, with an index in it where the form does not
/// vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub covering: Claim,
    pub index: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceCertificate {
    pub form: String,
    pub ell: u64,
    pub claim: Claim,
    pub evidence: Evidence,
    pub witnesses: Vec<Witness>,
}

impl CongruenceCertificate {
    pub fn to_json_line(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn rule(&self) -> Option<&str> {
        match &self.evidence {
            Evidence::DerivedByRule { rule, .. } => Some(rule),
            _ => None,
        }
    }
}

/// Writes one JSON record per line.
pub fn write_certificates<W: Write>(mut w: W, certs: &[CongruenceCertificate]) -> Result<()> {
    for c in certs {
        writeln!(w, "{}", c.to_json_line()?)?;
    }
    Ok(())
}

/// Reads newline-delimited certificate records, skipping blank lines.
pub fn read_certificates<R: BufRead>(r: R) -> Result<Vec<CongruenceCertificate>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(
            serde_json::from_str(&line)
                .map_err(|e| Error::Format(format!("certificate line {}: {e}", i + 1)))?,
        );
    }
    Ok(out)
}
