//! Factorization of the local L-polynomial `1 − λX + cX²` mod `ℓ` and the
//! period of the exponents `m` with `α^{m+1} = β^{m+1}`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::arith::order_dividing;
use crate::algebra::{ExtElement, ExtField, Residue};
use crate::error::{Error, Result};

/// An element `a + b·y` of `K[y]/(y² − λy + c)` for an irreducible quadratic.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadElement {
    lambda: ExtElement,
    c: ExtElement,
    a: ExtElement,
    b: ExtElement,
}

impl QuadElement {
    fn new(lambda: &ExtElement, c: &ExtElement, a: ExtElement, b: ExtElement) -> Self {
        QuadElement {
            lambda: lambda.clone(),
            c: c.clone(),
            a,
            b,
        }
    }

    pub fn parts(&self) -> (&ExtElement, &ExtElement) {
        (&self.a, &self.b)
    }

    pub fn mul(&self, o: &Self) -> Self {
        // y² = λy − c
        let bb = self.b.mul(&o.b);
        let a = self.a.mul(&o.a).sub(&bb.mul(&self.c));
        let b = self
            .a
            .mul(&o.b)
            .add(&self.b.mul(&o.a))
            .add(&bb.mul(&self.lambda));
        Self::new(&self.lambda, &self.c, a, b)
    }

    pub fn pow(&self, mut e: u128) -> Self {
        let field = self.a.field();
        let mut acc = Self::new(
            &self.lambda,
            &self.c,
            ExtElement::one(field),
            ExtElement::zero(field),
        );
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

impl fmt::Debug for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "({})*y", self.b)
        } else {
            write!(f, "{} + ({})*y", self.a, self.b)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LPolyCase {
    /// `λ² = 4c`: a double root.
    Repeated { root: ExtElement },
    /// Distinct roots in the coefficient field.
    Split { alpha: ExtElement, beta: ExtElement },
    /// Conjugate roots in the quadratic extension, `α = y`, `β = λ − y`.
    Irreducible {
        alpha: QuadElement,
        beta: QuadElement,
    },
}

impl LPolyCase {
    pub fn name(&self) -> &'static str {
        match self {
            LPolyCase::Repeated { .. } => "repeated",
            LPolyCase::Split { .. } => "split",
            LPolyCase::Irreducible { .. } => "irreducible",
        }
    }
}

/// Result of [`analyze_lpoly`]: the admissible exponents are exactly the
/// `m ≥ 1` with `period | m + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolyAnalysis {
    pub p: u64,
    pub ell: u64,
    pub lambda: ExtElement,
    pub c: ExtElement,
    pub case: LPolyCase,
    pub period: u64,
}

/// Serialized form of an [`LPolyAnalysis`], embedded in certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolyRecord {
    pub p: u64,
    pub ell: u64,
    pub field_degree: usize,
    pub lambda: String,
    pub c: String,
    pub case: String,
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub period: u64,
}

impl LPolyAnalysis {
    pub fn admits(&self, m: u64) -> bool {
        m >= 1 && (m + 1).is_multiple_of(self.period)
    }

    /// The first `count` admissible exponents.
    pub fn exponents(&self, count: usize) -> Vec<u64> {
        (1..)
            .map(|j| j * self.period - 1)
            .filter(|&m| m >= 1)
            .take(count)
            .collect()
    }

    /// Direct test of `α^{m+1} = β^{m+1}` (always true for a double root).
    pub fn roots_agree(&self, m: u64) -> bool {
        let e = m as u128 + 1;
        match &self.case {
            LPolyCase::Repeated { .. } => true,
            LPolyCase::Split { alpha, beta } => alpha.pow(e) == beta.pow(e),
            LPolyCase::Irreducible { alpha, beta } => alpha.pow(e) == beta.pow(e),
        }
    }

    pub fn record(&self) -> LPolyRecord {
        let (alpha, beta) = match &self.case {
            LPolyCase::Repeated { root } => (Some(root.to_string()), Some(root.to_string())),
            LPolyCase::Split { alpha, beta } => (Some(alpha.to_string()), Some(beta.to_string())),
            LPolyCase::Irreducible { alpha, beta } => {
                (Some(alpha.to_string()), Some(beta.to_string()))
            }
        };
        LPolyRecord {
            p: self.p,
            ell: self.ell,
            field_degree: self.lambda.field().degree(),
            lambda: self.lambda.to_string(),
            c: self.c.to_string(),
            case: self.case.name().into(),
            alpha,
            beta,
            period: self.period,
        }
    }
}

/// Analysis for residues `λ, c ∈ F_ℓ`.
pub fn analyze_lpoly(p: u64, lambda: Residue, c: Residue) -> Result<LPolyAnalysis> {
    if lambda.modulus() != c.modulus() {
        return Err(Error::DomainMismatch(format!(
            "lambda mod {} vs c mod {}",
            lambda.modulus(),
            c.modulus()
        )));
    }
    let field = Arc::new(ExtField::prime_field(c.modulus())?);
    analyze_lpoly_ext(
        p,
        &ExtElement::from_residue(&field, lambda),
        &ExtElement::from_residue(&field, c),
    )
}

/// Analysis for `λ, c` in a finite field `K = F_{ℓ^e}`.
pub fn analyze_lpoly_ext(p: u64, lambda: &ExtElement, c: &ExtElement) -> Result<LPolyAnalysis> {
    let field = lambda.field().clone();
    let ell = field.ell();
    if c.field() != &field {
        return Err(Error::DomainMismatch(
            "lambda and c lie in different fields".into(),
        ));
    }
    if c.is_zero() {
        return Err(Error::RamifiedHecke(p));
    }
    let q = field
        .size()
        .ok_or_else(|| Error::Unsupported("coefficient field too large".into()))?;
    let two = ExtElement::from_int(&field, 2);
    let four = ExtElement::from_int(&field, 4);
    let disc = lambda.mul(lambda).sub(&four.mul(c));
    let (case, period) = if disc.is_zero() {
        let root = lambda.mul(&two.inv()?);
        (LPolyCase::Repeated { root }, ell)
    } else if let Some(r) = disc.sqrt() {
        let half = two.inv()?;
        let alpha = lambda.add(&r).mul(&half);
        let beta = lambda.sub(&r).mul(&half);
        let ratio = alpha.mul(&beta.inv()?);
        let d = ratio.mult_order()?;
        (LPolyCase::Split { alpha, beta }, period_u64(d)?)
    } else {
        let zero = ExtElement::zero(&field);
        let one = ExtElement::one(&field);
        let alpha = QuadElement::new(lambda, c, zero.clone(), one.clone());
        let beta = QuadElement::new(lambda, c, lambda.clone(), one.neg());
        // α/β = α²/c has norm one, so its order divides q + 1.
        let c_inv = c.inv()?;
        let ratio = alpha
            .mul(&alpha)
            .mul(&QuadElement::new(lambda, c, c_inv, zero));
        let d = order_dividing(q + 1, |e| ratio.pow(e).is_one())?;
        (LPolyCase::Irreducible { alpha, beta }, period_u64(d)?)
    };
    Ok(LPolyAnalysis {
        p,
        ell,
        lambda: lambda.clone(),
        c: c.clone(),
        case,
        period,
    })
}

fn period_u64(d: u128) -> Result<u64> {
    u64::try_from(d).map_err(|_| Error::Unsupported(format!("period {d} exceeds u64")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(v: i64, ell: u64) -> Residue {
        Residue::new(v, ell).unwrap()
    }

    #[test]
    fn delta_cells() {
        let a = analyze_lpoly(2, res(4, 7), res(4, 7)).unwrap();
        assert_eq!(a.case.name(), "repeated");
        assert_eq!(a.exponents(2), vec![6, 13]);

        let a = analyze_lpoly(5, res(1, 11), res(5, 11)).unwrap();
        assert_eq!(a.case.name(), "split");
        assert_eq!(a.period, 5);
        assert_eq!(a.exponents(2), vec![4, 9]);

        for c in 1..5 {
            let a = analyze_lpoly(3, res(0, 5), res(c, 5)).unwrap();
            assert_eq!(a.period, 2);
            assert_eq!(a.exponents(3), vec![1, 3, 5]);
        }

        // τ(2) = −24 ≡ 9, 2^11 ≡ 2 mod 11: irreducible with d = 4.
        let a = analyze_lpoly(2, res(-24, 11), res(2048, 11)).unwrap();
        assert_eq!(a.case.name(), "irreducible");
        assert_eq!(a.period, 4);
    }

    #[test]
    fn ramified_datum_rejected() {
        assert!(matches!(
            analyze_lpoly(7, res(1, 7), res(0, 7)),
            Err(Error::RamifiedHecke(7))
        ));
    }

    #[test]
    fn exhaustive_small_fields() {
        for ell in [3u64, 5, 7, 11, 13] {
            for l in 0..ell as i64 {
                for c in 1..ell as i64 {
                    let a = analyze_lpoly(2, res(l, ell), res(c, ell)).unwrap();
                    if a.case.name() != "repeated" {
                        assert_eq!((ell * ell - 1) % a.period, 0);
                    }
                    for m in 1..=3 * a.period {
                        if a.case.name() != "repeated" {
                            assert_eq!(
                                a.roots_agree(m),
                                a.admits(m),
                                "ell={ell} l={l} c={c} m={m}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn extension_coefficients() {
        // K = F_49 = F_7[x]/(x² + 1); compare against direct root ratios.
        let field = Arc::new(ExtField::new(7, vec![1, 0, 1]).unwrap());
        let x = ExtElement::generator(&field);
        for l0 in 0..7 {
            for l1 in 0..7 {
                let lambda =
                    ExtElement::from_int(&field, l0).add(&x.mul(&ExtElement::from_int(&field, l1)));
                let c = x.add(&ExtElement::from_int(&field, 3));
                let a = analyze_lpoly_ext(2, &lambda, &c).unwrap();
                if a.case.name() != "repeated" {
                    assert_eq!((49 * 49 - 1) % a.period, 0);
                    for m in 1..=2 * a.period {
                        assert_eq!(a.roots_agree(m), a.admits(m));
                    }
                }
            }
        }
    }
}
