//! Rules deriving new congruences from a known one, and the prime-power
//! factorization of claims.

use std::collections::BTreeSet;

use super::certificate::{Claim, CongruenceCertificate, Evidence};
use super::scan::least_nonzero;
use crate::algebra::arith::{crt, factor, gcd, inv_mod, is_prime, radical, split_prime_power};
use crate::error::{Error, Result};
use crate::qseries::ModSeries;

pub const RULE_GAP: &str = "gap";
pub const RULE_SHRINK: &str = "shrink";
pub const RULE_REMOVE_PRIME: &str = "remove_prime";
pub const RULE_SQUARE_CLASS: &str = "square_class";

fn progression_of(cert: &CongruenceCertificate) -> Result<(u64, u64)> {
    match cert.claim {
        Claim::Progression { modulus, residue } => Ok((modulus, residue)),
        Claim::Gap { .. } => Err(Error::Usage(format!(
            "rule needs a progression, got {}",
            cert.claim
        ))),
    }
}

fn derived(parent: &CongruenceCertificate, rule: &str, claim: Claim) -> CongruenceCertificate {
    CongruenceCertificate {
        form: parent.form.clone(),
        ell: parent.ell,
        claim,
        evidence: Evidence::DerivedByRule {
            rule: rule.into(),
            parent: Box::new(parent.clone()),
            rechecked_to: None,
        },
        witnesses: Vec::new(),
    }
}

/// `p | M`, `p` prime and `p ∤ ℓN`.
fn check_prime(cert: &CongruenceCertificate, m: u64, p: u64, level: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if !m.is_multiple_of(p) {
        return Err(Error::Hypothesis(format!(
            "{p} does not divide the modulus {m}"
        )));
    }
    if cert.ell.is_multiple_of(p) || level.is_multiple_of(p) {
        return Err(Error::Hypothesis(format!(
            "{p} divides ell * N = {} * {level}",
            cert.ell
        )));
    }
    Ok(())
}

fn check_odd(cert: &CongruenceCertificate) -> Result<()> {
    if cert.ell.is_multiple_of(2) {
        return Err(Error::Hypothesis("the rule needs an odd ell".into()));
    }
    Ok(())
}

/// From `c(f; Mn + β) ≡ 0` derive `c(f; (M/p)n + M_p β′) ≡ 0` for `p ∤ n`,
/// where `M_p β′ ≡ β (mod M_p^#)`. The offset must already be reduced at
/// `p`, i.e. `M_p/p | β` (apply [`rule_shrink`] first otherwise).
pub fn rule_gap(
    parent: &CongruenceCertificate,
    p: u64,
    level: u64,
) -> Result<CongruenceCertificate> {
    let (m, beta) = progression_of(parent)?;
    check_odd(parent)?;
    check_prime(parent, m, p, level)?;
    let (mp, rest) = split_prime_power(m, p);
    if beta % (mp / p) != 0 {
        return Err(Error::Hypothesis(format!(
            "offset {beta} is not divisible by {} (reduce the modulus first)",
            mp / p
        )));
    }
    let beta_prime = if rest == 1 {
        0
    } else {
        let inv = inv_mod(mp % rest, rest).expect("M_p is a unit mod M_p^#");
        (beta % rest) as u128 * inv as u128 % rest as u128
    } as u64;
    let claim = Claim::gap(m / p, mp * beta_prime, p)?;
    Ok(derived(parent, RULE_GAP, claim))
}

/// `M′ = gcd(M, M_sf·N·β)` with `M_sf` the radical of `M`.
pub fn rule_shrink(parent: &CongruenceCertificate, level: u64) -> Result<CongruenceCertificate> {
    let (m, beta) = progression_of(parent)?;
    check_odd(parent)?;
    for (p, _) in factor(m) {
        check_prime(parent, m, p, level)?;
    }
    let t = (radical(m) as u128 * level as u128 % m as u128) * beta as u128 % m as u128;
    let m2 = gcd(m, t as u64);
    let claim = Claim::progression(m2, beta as i64)?;
    Ok(derived(parent, RULE_SHRINK, claim))
}

/// Drops the `p`-part of `M` when `M_p | β`, or when `p² ∤ M`.
pub fn rule_remove_prime(
    parent: &CongruenceCertificate,
    p: u64,
    level: u64,
) -> Result<CongruenceCertificate> {
    let (m, beta) = progression_of(parent)?;
    check_prime(parent, m, p, level)?;
    let (mp, rest) = split_prime_power(m, p);
    let divides = beta % mp == 0;
    let exact = mp == p && parent.ell % 2 == 1;
    if !divides && !exact {
        return Err(Error::Hypothesis(format!(
            "{mp} does not divide {beta} and {p}^2 divides {m}"
        )));
    }
    let claim = Claim::progression(rest, beta as i64)?;
    Ok(derived(parent, RULE_REMOVE_PRIME, claim))
}

/// Every `(M, β′)` with `β′` in the square class `β·(Z/M)^{×2}`.
pub fn square_class_closure(
    parent: &CongruenceCertificate,
    level: u64,
) -> Result<Vec<CongruenceCertificate>> {
    let (m, beta) = progression_of(parent)?;
    if gcd(m, level) != 1 {
        return Err(Error::Hypothesis(format!(
            "modulus {m} is not coprime to the level {level}"
        )));
    }
    // With gcd(M, N) = 1 every class mod M has lifts ≡ β (mod N), so the
    // level imposes nothing further.
    let squares: BTreeSet<u64> = (1..=m)
        .filter(|&u| gcd(u % m, m) == 1)
        .map(|u| (u as u128 * u as u128 % m as u128) as u64)
        .collect();
    let classes: BTreeSet<u64> = squares
        .iter()
        .map(|&s| (s as u128 * beta as u128 % m as u128) as u64)
        .collect();
    classes
        .into_iter()
        .map(|b| {
            Ok(derived(
                parent,
                RULE_SQUARE_CLASS,
                Claim::progression(m, b as i64)?,
            ))
        })
        .collect()
}

/// Re-tests a derived claim on the data up to `bound`, recording the bound.
pub fn recheck(
    cert: &CongruenceCertificate,
    f: &ModSeries,
    bound: i64,
) -> Result<CongruenceCertificate> {
    if let Some(n) = least_nonzero(&f.to_integer_grid(), &cert.claim, bound)? {
        return Err(Error::Hypothesis(format!(
            "claim {} fails at index {n}",
            cert.claim
        )));
    }
    let mut out = cert.clone();
    if let Evidence::DerivedByRule { rechecked_to, .. } = &mut out.evidence {
        *rechecked_to = Some(bound);
    }
    Ok(out)
}

/// One prime-power component `n ≡ residue (mod p^e)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeComponent {
    pub p: u64,
    pub modulus: u64,
    pub residue: u64,
}

/// A claim split along the prime powers of its modulus. A gap claim
/// `{S n + o : q ∤ n}` is the envelope `S Z + o` minus the excluded
/// progression `S q Z + o`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimFactors {
    pub envelope: Vec<PrimeComponent>,
    pub excluded: Option<Vec<PrimeComponent>>,
}

impl ClaimFactors {
    /// The component at `p`, if `p` divides the envelope modulus.
    pub fn at(&self, p: u64) -> Option<&PrimeComponent> {
        self.envelope.iter().find(|c| c.p == p)
    }
}

fn components(m: u64, r: u64) -> Vec<PrimeComponent> {
    factor(m)
        .into_iter()
        .map(|(p, e)| {
            let q = p.pow(e);
            PrimeComponent {
                p,
                modulus: q,
                residue: r % q,
            }
        })
        .collect()
}

fn combine(parts: &[PrimeComponent]) -> (u64, u64) {
    let pairs: Vec<(u64, u64)> = parts.iter().map(|c| (c.residue, c.modulus)).collect();
    crt(&pairs).map_or((1, 0), |(r, m)| (m, r))
}

pub fn factor_claim(claim: &Claim) -> ClaimFactors {
    match *claim {
        Claim::Progression { modulus, residue } => ClaimFactors {
            envelope: components(modulus, residue),
            excluded: None,
        },
        Claim::Gap {
            stride,
            offset,
            gap_prime,
        } => ClaimFactors {
            envelope: components(stride, offset % stride),
            excluded: Some(components(
                stride * gap_prime,
                offset % (stride * gap_prime),
            )),
        },
    }
}

/// Inverse of [`factor_claim`]; gap offsets come back reduced mod `S q`.
pub fn recombine(factors: &ClaimFactors) -> Result<Claim> {
    let (m, r) = combine(&factors.envelope);
    match &factors.excluded {
        None => Claim::progression(m, r as i64),
        Some(ex) => {
            let (mx, rx) = combine(ex);
            if mx % m != 0 || rx % m != r {
                return Err(Error::Format(
                    "excluded progression is not inside the envelope".into(),
                ));
            }
            Claim::gap(m, rx, mx / m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verified(ell: u64, modulus: u64, residue: i64) -> CongruenceCertificate {
        CongruenceCertificate {
            form: "f".into(),
            ell,
            claim: Claim::progression(modulus, residue).unwrap(),
            evidence: Evidence::VerifiedToBound {
                bound: 1000,
                support: 30,
            },
            witnesses: vec![],
        }
    }

    #[test]
    fn gap_rule() {
        let g = rule_gap(&verified(7, 128, 64), 2, 1).unwrap();
        assert_eq!(g.claim, Claim::gap(64, 0, 2).unwrap());
        assert_eq!(g.rule(), Some(RULE_GAP));
        let g = rule_gap(&verified(7, 9, 3), 3, 1).unwrap();
        assert_eq!(g.claim, Claim::gap(3, 0, 3).unwrap());
        // M = 5·8, β ≡ 4 mod 8 and 3 mod 5: β′ = 3·8^{-1} mod 5 = 1.
        let g = rule_gap(&verified(7, 40, 28), 2, 1).unwrap();
        assert_eq!(g.claim, Claim::gap(20, 8, 2).unwrap());
        for n in g.claim.members(1000) {
            assert!(n % 5 == 3 && (n / 4) % 2 == 1, "{n}");
        }
        assert!(rule_gap(&verified(7, 9, 1), 3, 1).is_err());
        assert!(rule_gap(&verified(7, 14, 7), 7, 1).is_err());
        assert!(rule_gap(&verified(7, 9, 3), 2, 1).is_err());
    }

    #[test]
    fn shrink_rule() {
        let s = |m, b| rule_shrink(&verified(7, m, b), 1).unwrap().claim;
        assert_eq!(s(8, 4), Claim::progression(8, 4).unwrap());
        assert_eq!(s(9, 3), Claim::progression(9, 3).unwrap());
        assert_eq!(s(25, 1), Claim::progression(5, 1).unwrap());
        assert_eq!(s(50, 0), Claim::progression(50, 0).unwrap());
        assert!(rule_shrink(&verified(5, 25, 1), 1).is_err());
    }

    #[test]
    fn remove_prime_rule() {
        let r = rule_remove_prime(&verified(13, 55, 55 * 3), 5, 1).unwrap();
        assert_eq!(r.claim, Claim::progression(11, 0).unwrap());
        let r = rule_remove_prime(&verified(13, 55, 12), 5, 1).unwrap();
        assert_eq!(r.claim, Claim::progression(11, 1).unwrap());
        assert_eq!(
            rule_remove_prime(&verified(7, 3, 0), 3, 1).unwrap().claim,
            Claim::progression(1, 0).unwrap()
        );
        assert!(rule_remove_prime(&verified(7, 9, 3), 3, 1).is_err());
    }

    #[test]
    fn square_classes() {
        let b = |m, beta| -> Vec<u64> {
            square_class_closure(&verified(13, m, beta), 1)
                .unwrap()
                .iter()
                .map(|c| c.claim.envelope().1)
                .collect()
        };
        assert_eq!(b(7, 1), vec![1, 2, 4]);
        assert_eq!(b(8, 1), vec![1]);
        assert_eq!(b(12, 0), vec![0]);
        assert_eq!(b(7, 3), vec![3, 5, 6]);
        assert!(square_class_closure(&verified(13, 6, 1), 3).is_err());
    }

    #[test]
    fn factor_round_trip() {
        let f = factor_claim(&Claim::progression(12, 7).unwrap());
        assert_eq!(
            f.envelope.iter().map(|c| c.modulus).collect::<Vec<_>>(),
            vec![4, 3]
        );
        assert_eq!(f.at(3).unwrap().residue, 1);
        assert_eq!(recombine(&f).unwrap(), Claim::progression(12, 7).unwrap());
        let f = factor_claim(&Claim::progression(13, 5).unwrap());
        assert_eq!(f.envelope.len(), 1);
        let g = Claim::gap(64 * 5, 64 * 3, 2).unwrap();
        assert_eq!(recombine(&factor_claim(&g)).unwrap(), g);
        assert_eq!(
            recombine(&factor_claim(&Claim::progression(1, 0).unwrap())).unwrap(),
            Claim::progression(1, 0).unwrap()
        );
    }
}
