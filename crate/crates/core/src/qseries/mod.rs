//! Truncated Puiseux q-expansions with explicit precision.
//!
//! A series with denominator `N`, valuation `v` and precision `P` knows the
//! coefficient of `q^{n/N}` exactly for `v ≤ n < P`. Coefficients below `v`
//! are zero; anything at or above `P` is unknown and reading it is an error.

pub mod cache;
pub mod ntt;
mod ring;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::algebra::arith::{gcd, lcm};
use crate::algebra::KroneckerChar;
use crate::error::{need_precision, Error, Result};

pub use ring::{CoeffRing, ExtRing, Integers, ResidueRing};

/// Weight as a multiple of `1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Weight {
    pub twice: i64,
}

impl Weight {
    pub fn integral(k: i64) -> Self {
        Weight { twice: 2 * k }
    }

    pub fn half(twice: i64) -> Self {
        Weight { twice }
    }

    /// The weight as an integer, if it is one.
    pub fn as_integer(self) -> Option<i64> {
        (self.twice % 2 == 0).then_some(self.twice / 2)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(k) => write!(f, "{k}"),
            None => write!(f, "{}/2", self.twice),
        }
    }
}

impl std::str::FromStr for Weight {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("bad weight {s:?}"));
        match s.split_once('/') {
            None => s
                .trim()
                .parse::<i64>()
                .map(Weight::integral)
                .map_err(|_| bad()),
            Some((num, "2")) => num
                .trim()
                .parse::<i64>()
                .map(Weight::half)
                .map_err(|_| bad()),
            Some(_) => Err(bad()),
        }
    }
}

impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// What a series is: the generator recipe, weight, level and character.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormDescriptor {
    pub name: String,
    pub weight: Weight,
    pub level: u64,
    pub character: KroneckerChar,
}

impl FormDescriptor {
    pub fn level_one(name: impl Into<String>, k: i64) -> Self {
        FormDescriptor {
            name: name.into(),
            weight: Weight::integral(k),
            level: 1,
            character: KroneckerChar::TRIVIAL,
        }
    }
}

/// A truncated q-expansion over the coefficient ring `R`.
#[derive(Clone)]
pub struct QExpansion<R: CoeffRing> {
    ring: R,
    denom: u64,
    valuation: i64,
    precision: i64,
    coeffs: Vec<R::Elem>,
    descriptor: Option<FormDescriptor>,
}

pub type IntSeries = QExpansion<Integers>;
pub type ModSeries = QExpansion<ResidueRing>;
pub type ExtSeries = QExpansion<ExtRing>;

impl<R: CoeffRing> PartialEq for QExpansion<R> {
    /// Equal as truncated series: same domain, denominator and precision and
    /// the same coefficients, however the leading zeros are stored.
    /// Descriptors are metadata and do not take part.
    fn eq(&self, other: &Self) -> bool {
        if self.ring != other.ring || self.denom != other.denom || self.precision != other.precision
        {
            return false;
        }
        let v = self.valuation.min(other.valuation);
        let zero = self.ring.zero();
        (v..self.precision).all(|n| {
            let a = if n >= self.valuation {
                &self.coeffs[(n - self.valuation) as usize]
            } else {
                &zero
            };
            let b = if n >= other.valuation {
                &other.coeffs[(n - other.valuation) as usize]
            } else {
                &zero
            };
            a == b
        })
    }
}

impl<R: CoeffRing> fmt::Debug for QExpansion<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown = self.coeffs.len().min(12);
        f.debug_struct("QExpansion")
            .field("domain", &self.ring.label())
            .field("denom", &self.denom)
            .field("valuation", &self.valuation)
            .field("precision", &self.precision)
            .field("head", &&self.coeffs[..shown])
            .finish()
    }
}

impl<R: CoeffRing> QExpansion<R> {
    /// Series `Σ coeffs[i] q^{(valuation + i)/denom}`, known up to
    /// `valuation + coeffs.len()`.
    pub fn new(ring: R, denom: u64, valuation: i64, coeffs: Vec<R::Elem>) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Usage("series denominator must be positive".into()));
        }
        let precision = valuation + coeffs.len() as i64;
        Ok(QExpansion {
            ring,
            denom,
            valuation,
            precision,
            coeffs,
            descriptor: None,
        })
    }

    /// Integer-exponent series starting at `q^0`.
    pub fn from_coeffs(ring: R, coeffs: Vec<R::Elem>) -> Self {
        Self::new(ring, 1, 0, coeffs).expect("denominator 1")
    }

    /// The zero series on the window `[valuation, precision)`.
    pub fn zero(ring: R, denom: u64, valuation: i64, precision: i64) -> Self {
        let len = (precision - valuation).max(0) as usize;
        let coeffs = vec![ring.zero(); len];
        Self::new(ring, denom, valuation, coeffs).expect("positive denominator")
    }

    /// The constant `1`, known below `q^{precision}`.
    pub fn one(ring: R, precision: i64) -> Self {
        let mut s = Self::zero(ring, 1, 0, precision.max(0));
        if let Some(c) = s.coeffs.first_mut() {
            *c = s.ring.one();
        }
        s
    }

    /// `q^{n}`, integer exponent, known below `q^{precision}`.
    pub fn monomial(ring: R, n: i64, precision: i64) -> Self {
        let mut s = Self::zero(ring, 1, n, precision.max(n));
        if let Some(c) = s.coeffs.first_mut() {
            *c = s.ring.one();
        }
        s
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    /// Coefficients for numerators `valuation..precision`.
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R::Elem> {
        self.coeffs
    }

    pub fn descriptor(&self) -> Option<&FormDescriptor> {
        self.descriptor.as_ref()
    }

    pub fn with_descriptor(mut self, d: FormDescriptor) -> Self {
        self.descriptor = Some(d);
        self
    }

    pub fn set_descriptor(&mut self, d: Option<FormDescriptor>) {
        self.descriptor = d;
    }

    /// Coefficient of `q^{n/N}`.
    pub fn coeff(&self, n: i64) -> Result<R::Elem> {
        if n >= self.precision {
            return Err(Error::Precision {
                needed: n + 1,
                available: self.precision,
            });
        }
        if n < self.valuation {
            return Ok(self.ring.zero());
        }
        Ok(self.coeffs[(n - self.valuation) as usize].clone())
    }

    /// Coefficient of `q^{num/den}` for an arbitrary rational exponent; zero
    /// when the exponent is not in `(1/N)Z`.
    pub fn coeff_at(&self, num: i64, den: u64) -> Result<R::Elem> {
        if den == 0 {
            return Err(Error::Usage("zero exponent denominator".into()));
        }
        let scaled = num as i128 * self.denom as i128;
        if scaled % den as i128 != 0 {
            // Still respect the window: the exponent must lie below P/N.
            if scaled >= self.precision as i128 * den as i128 {
                return Err(Error::Precision {
                    needed: (scaled / den as i128) as i64 + 1,
                    available: self.precision,
                });
            }
            return Ok(self.ring.zero());
        }
        self.coeff((scaled / den as i128) as i64)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.ring.is_zero(c))
    }

    /// Least `n` in the window with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs
            .iter()
            .position(|c| !self.ring.is_zero(c))
            .map(|i| self.valuation + i as i64)
    }

    /// Restrict to a smaller precision.
    pub fn truncate(&self, precision: i64) -> Result<Self> {
        need_precision(precision, self.precision)?;
        let mut out = self.clone();
        let keep = (precision - self.valuation).max(0) as usize;
        out.coeffs.truncate(keep);
        out.precision = precision.max(self.valuation);
        Ok(out)
    }

    /// Re-express with valuation lowered to `v` (padding with zeros).
    pub fn with_valuation(&self, v: i64) -> Self {
        if v >= self.valuation {
            return self.clone();
        }
        let pad = (self.valuation - v) as usize;
        let mut coeffs = vec![self.ring.zero(); pad];
        coeffs.extend(self.coeffs.iter().cloned());
        QExpansion {
            valuation: v,
            coeffs,
            ..self.clone()
        }
    }

    /// The same series written with denominator `denom`, a multiple of the
    /// current one.
    pub fn with_denom(&self, denom: u64) -> Result<Self> {
        if denom == 0 || !denom.is_multiple_of(self.denom) {
            return Err(Error::Usage(format!(
                "cannot rewrite denominator {} as {denom}",
                self.denom
            )));
        }
        let f = (denom / self.denom) as i64;
        if f == 1 {
            return Ok(self.clone());
        }
        let v = self.valuation * f;
        let p = self.precision * f;
        let mut coeffs = vec![self.ring.zero(); (p - v) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * f as usize] = c.clone();
        }
        Ok(QExpansion {
            ring: self.ring.clone(),
            denom,
            valuation: v,
            precision: p,
            coeffs,
            descriptor: self.descriptor.clone(),
        })
    }

    /// Smallest denominator that still represents the series exactly.
    pub fn reduce_denom(&self) -> Self {
        let mut g = self.denom;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !self.ring.is_zero(c) {
                g = gcd(g, (self.valuation + i as i64).unsigned_abs());
            }
        }
        g = gcd(g, self.valuation.unsigned_abs());
        // Precision must stay an exact multiple so no known coefficient is lost.
        g = gcd(g, self.precision.unsigned_abs());
        if g <= 1 {
            return self.clone();
        }
        let gi = g as i64;
        let coeffs = self
            .coeffs
            .iter()
            .step_by(g as usize)
            .cloned()
            .collect::<Vec<_>>();
        QExpansion {
            ring: self.ring.clone(),
            denom: self.denom / g,
            valuation: self.valuation / gi,
            precision: self.precision / gi,
            coeffs,
            descriptor: self.descriptor.clone(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.ring.label(),
                other.ring.label()
            )));
        }
        Ok(())
    }

    fn merged(&self, other: &Self) -> Result<(Self, Self)> {
        self.check_ring(other)?;
        let d = lcm(self.denom, other.denom);
        Ok((self.with_denom(d)?, other.with_denom(d)?))
    }

    fn elementwise(
        &self,
        other: &Self,
        op: impl Fn(&R, &R::Elem, &R::Elem) -> R::Elem,
    ) -> Result<Self> {
        let (a, b) = self.merged(other)?;
        let v = a.valuation.min(b.valuation);
        let p = a.precision.min(b.precision);
        if p <= v {
            return Ok(Self::zero(a.ring.clone(), a.denom, p, p));
        }
        let zero = a.ring.zero();
        let coeffs = (v..p)
            .map(|n| {
                let x = if n >= a.valuation {
                    &a.coeffs[(n - a.valuation) as usize]
                } else {
                    &zero
                };
                let y = if n >= b.valuation {
                    &b.coeffs[(n - b.valuation) as usize]
                } else {
                    &zero
                };
                op(&a.ring, x, y)
            })
            .collect();
        Ok(QExpansion {
            ring: a.ring.clone(),
            denom: a.denom,
            valuation: v,
            precision: p,
            coeffs,
            descriptor: None,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.elementwise(other, |r, x, y| r.add(x, y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.elementwise(other, |r, x, y| r.sub(x, y))
    }

    pub fn neg(&self) -> Self {
        self.map(|r, c| r.neg(c))
    }

    pub fn scale(&self, s: &R::Elem) -> Self {
        self.map(|r, c| r.mul(c, s))
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        let s = self.ring.from_i64(s);
        self.scale(&s)
    }

    fn map(&self, f: impl Fn(&R, &R::Elem) -> R::Elem) -> Self {
        QExpansion {
            coeffs: self.coeffs.iter().map(|c| f(&self.ring, c)).collect(),
            descriptor: None,
            ..self.clone()
        }
    }

    /// Multiply by `q^{s/N}`.
    pub fn shift(&self, s: i64) -> Self {
        QExpansion {
            valuation: self.valuation + s,
            precision: self.precision + s,
            descriptor: None,
            ..self.clone()
        }
    }

    /// Cauchy product. The result is known below
    /// `min(P₁ + v₂, P₂ + v₁)` and has valuation `v₁ + v₂`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.merged(other)?;
        let v = a.valuation + b.valuation;
        let p = (a.precision + b.valuation).min(b.precision + a.valuation);
        let len = (p - v).max(0) as usize;
        let coeffs = a.ring.convolve(&a.coeffs, &b.coeffs, len);
        Ok(QExpansion {
            ring: a.ring.clone(),
            denom: a.denom,
            valuation: v,
            precision: v + len as i64,
            coeffs,
            descriptor: None,
        })
    }

    pub fn square(&self) -> Self {
        self.mul(self).expect("same ring")
    }

    pub fn pow(&self, mut e: u32) -> Self {
        // Precision of f^e is P + (e-1)v; track it through binary powering.
        let mut acc: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base).expect("same ring"),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc.unwrap_or_else(|| {
            // f^0 = 1, known wherever f's leading term is.
            let len = (self.precision - self.valuation).max(0);
            let one = Self::one(self.ring.clone(), len);
            one.with_denom(self.denom).expect("multiple of 1")
        })
    }

    /// Multiplicative inverse. Requires the coefficient at the valuation to
    /// be a unit; the result has valuation `-v` and precision `P - 2v`.
    pub fn invert(&self) -> Result<Self> {
        let lead = self.coeffs.first().ok_or_else(|| Error::Precision {
            needed: self.valuation + 1,
            available: self.precision,
        })?;
        let inv0 = self
            .ring
            .inv(lead)
            .ok_or_else(|| Error::NotAUnit(format!("leading coefficient {lead:?}")))?;
        let len = self.coeffs.len();
        // b_n = -inv0 Σ_{k≥1} a_k b_{n-k}; only nonzero a_k contribute, which
        // keeps sparse inputs (the pentagonal series) near O(n^{3/2}).
        let support: Vec<(usize, &R::Elem)> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        let mut out: Vec<R::Elem> = Vec::with_capacity(len);
        out.push(inv0.clone());
        for n in 1..len {
            let mut acc = self.ring.zero();
            for &(k, a) in &support {
                if k > n {
                    break;
                }
                acc = self.ring.add(&acc, &self.ring.mul(a, &out[n - k]));
            }
            out.push(self.ring.neg(&self.ring.mul(&acc, &inv0)));
        }
        let v = -self.valuation;
        Ok(QExpansion {
            ring: self.ring.clone(),
            denom: self.denom,
            valuation: v,
            precision: v + len as i64,
            coeffs: out,
            descriptor: None,
        })
    }

    fn require_integral_exponents(&self, what: &str) -> Result<()> {
        if self.denom != 1 {
            return Err(Error::Usage(format!(
                "{what} needs integer exponents (denominator {})",
                self.denom
            )));
        }
        Ok(())
    }

    /// `Θ = q d/dq`: the coefficient at `n` becomes `n·c(n)`.
    pub fn theta(&self) -> Result<Self> {
        self.require_integral_exponents("theta")?;
        let v = self.valuation;
        Ok(QExpansion {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| self.ring.mul_i64(c, v + i as i64))
                .collect(),
            descriptor: None,
            ..self.clone()
        })
    }

    pub fn theta_pow(&self, k: u32) -> Result<Self> {
        let mut out = self.clone();
        for _ in 0..k {
            out = out.theta()?;
        }
        Ok(out)
    }

    /// Keep only the terms with `n ≡ β (mod M)`.
    pub fn sieve(&self, modulus: u64, beta: u64) -> Result<Self> {
        self.require_integral_exponents("sieve")?;
        if modulus == 0 || beta >= modulus {
            return Err(Error::Usage(format!(
                "sieve needs 0 <= beta < M (got M={modulus}, beta={beta})"
            )));
        }
        let m = modulus as i64;
        let v = self.valuation;
        Ok(QExpansion {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if (v + i as i64).rem_euclid(m) as u64 == beta {
                        c.clone()
                    } else {
                        self.ring.zero()
                    }
                })
                .collect(),
            descriptor: None,
            ..self.clone()
        })
    }

    /// `U_M`: `c(out; n) = c(f; Mn)`, known below `floor(P/M)`.
    pub fn u_operator(&self, modulus: u64) -> Result<Self> {
        self.require_integral_exponents("U")?;
        if modulus == 0 {
            return Err(Error::Usage("U_M needs M >= 1".into()));
        }
        let m = modulus as i64;
        need_precision(m, self.precision)?;
        let p = self.precision.div_euclid(m);
        let v = self.valuation.div_euclid(m) + i64::from(self.valuation.rem_euclid(m) != 0);
        let v = v.min(p);
        let coeffs = (v..p)
            .map(|n| self.coeffs[(m * n - self.valuation) as usize].clone())
            .collect();
        Ok(QExpansion {
            ring: self.ring.clone(),
            denom: 1,
            valuation: v,
            precision: p,
            coeffs,
            descriptor: None,
        })
    }

    /// `V_M`: `f(q^M)`, known below `M·P`.
    pub fn v_operator(&self, modulus: u64) -> Result<Self> {
        self.require_integral_exponents("V")?;
        if modulus == 0 {
            return Err(Error::Usage("V_M needs M >= 1".into()));
        }
        let m = modulus as i64;
        let v = self.valuation * m;
        let p = self.precision * m;
        let mut coeffs = vec![self.ring.zero(); (p - v) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * modulus as usize] = c.clone();
        }
        Ok(QExpansion {
            ring: self.ring.clone(),
            denom: 1,
            valuation: v,
            precision: p,
            coeffs,
            descriptor: None,
        })
    }

    /// `c(out; n) = χ(n) c(f; n)`.
    pub fn twist(&self, chi: KroneckerChar) -> Result<Self> {
        self.require_integral_exponents("twist")?;
        let v = self.valuation;
        Ok(QExpansion {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| match chi.eval(v + i as i64) {
                    0 => self.ring.zero(),
                    1 => c.clone(),
                    _ => self.ring.neg(c),
                })
                .collect(),
            descriptor: None,
            ..self.clone()
        })
    }

    /// View exponents `n/N` as integers `n`, i.e. substitute `q ↦ q^N`.
    pub fn to_integer_grid(&self) -> Self {
        QExpansion {
            denom: 1,
            ..self.clone()
        }
    }

    /// Inverse of [`to_integer_grid`](Self::to_integer_grid).
    pub fn from_integer_grid(&self, denom: u64) -> Result<Self> {
        self.require_integral_exponents("from_integer_grid")?;
        Ok(QExpansion {
            denom,
            ..self.clone()
        })
    }

    /// Apply a ring homomorphism coefficientwise.
    pub fn map_ring<S: CoeffRing>(
        &self,
        ring: S,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> QExpansion<S> {
        QExpansion {
            coeffs: self.coeffs.iter().map(f).collect(),
            ring,
            denom: self.denom,
            valuation: self.valuation,
            precision: self.precision,
            descriptor: self.descriptor.clone(),
        }
    }
}

impl QExpansion<Integers> {
    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(Integers, coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Exact division by an integer; fails if any coefficient is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self> {
        use num_traits::Zero;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if !(c % d).is_zero() {
                return Err(Error::Hypothesis(format!("{c} is not divisible by {d}")));
            }
            out.push(c / d);
        }
        Ok(QExpansion {
            coeffs: out,
            descriptor: None,
            ..self.clone()
        })
    }

    /// Entrywise reduction mod the odd prime `ell`. The descriptor is kept.
    pub fn reduce_mod(&self, ell: u64) -> Result<ModSeries> {
        let ring = ResidueRing::new(ell)?;
        Ok(self.map_ring(ring, |c| ring.reduce_big(c)))
    }
}

impl QExpansion<ResidueRing> {
    pub fn ell(&self) -> u64 {
        self.ring.ell()
    }

    /// Series mod `ell` from raw residues starting at `q^0`.
    pub fn from_residues(ell: u64, coeffs: Vec<u64>) -> Result<Self> {
        let ring = ResidueRing::new(ell)?;
        let coeffs = coeffs.into_iter().map(|c| c % ell).collect();
        Ok(Self::from_coeffs(ring, coeffs))
    }

    /// The same series viewed in an extension field of `F_ℓ`.
    pub fn extend(&self, ring: &ExtRing) -> Result<ExtSeries> {
        if ring.field.ell() != self.ell() {
            return Err(Error::DomainMismatch(format!(
                "mod {} series into {}",
                self.ell(),
                ring.label()
            )));
        }
        Ok(self.map_ring(ring.clone(), |&c| ring.from_i64(c as i64)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(c: &[i64]) -> IntSeries {
        IntSeries::from_i64s(c)
    }

    #[test]
    fn product_and_window() {
        let f = int(&[1, 1, 0, 0, 0]);
        let g = int(&[1, -1, 0, 0]);
        let h = f.mul(&g).unwrap();
        assert_eq!(h, int(&[1, 0, -1, 0]));
        assert!(matches!(h.coeff(4), Err(Error::Precision { .. })));
        assert_eq!(h.coeff(-3).unwrap(), BigInt::from(0));
    }

    #[test]
    fn geometric_inverse() {
        let f = int(&[1, -1, 0, 0, 0, 0]);
        assert_eq!(f.invert().unwrap(), int(&[1; 6]));
        let g = int(&[2, 1]);
        assert!(matches!(g.invert(), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn inverse_with_valuation() {
        // (q^2 + q^3) known below q^6  ->  q^{-2}(1 - q + q^2 - q^3), P = 2.
        let f = IntSeries::new(Integers, 1, 2, [1, 1, 0, 0].map(BigInt::from).to_vec()).unwrap();
        let g = f.invert().unwrap();
        assert_eq!(g.valuation(), -2);
        assert_eq!(g.precision(), 2);
        let one = f.mul(&g).unwrap();
        assert_eq!(one.valuation(), 0);
        assert_eq!(one.coeffs(), &[1, 0, 0, 0].map(BigInt::from));
    }

    #[test]
    fn theta_sieve_u_v() {
        let f = int(&[0, 1, 1, 0]);
        assert_eq!(f.theta().unwrap(), int(&[0, 1, 2, 0]));
        let geo = int(&[1; 8]);
        assert_eq!(geo.sieve(2, 1).unwrap(), int(&[0, 1, 0, 1, 0, 1, 0, 1]));
        assert_eq!(geo.sieve(1, 0).unwrap(), geo);
        let h = int(&[5, 6, 7, 8, 9]);
        assert_eq!(h.v_operator(3).unwrap().u_operator(3).unwrap(), h);
        let u = h.u_operator(2).unwrap();
        assert_eq!(u, int(&[5, 7]));
        assert!(int(&[1]).u_operator(2).is_err());
    }

    #[test]
    fn twist_principal() {
        let f = int(&[1; 12]);
        let t = f.twist(crate::algebra::principal_char(3)).unwrap();
        for n in 0..12 {
            let want = if n % 3 == 0 { 0 } else { 1 };
            assert_eq!(t.coeff(n).unwrap(), BigInt::from(want));
        }
    }

    #[test]
    fn denominators_merge() {
        // q^{1/2} * q^{1/3} = q^{5/6}
        let a = IntSeries::new(Integers, 2, 1, vec![BigInt::from(1), BigInt::from(0)]).unwrap();
        let b = IntSeries::new(Integers, 3, 1, vec![BigInt::from(1), BigInt::from(0)]).unwrap();
        let c = a.mul(&b).unwrap();
        assert_eq!(c.denom(), 6);
        assert_eq!(c.valuation(), 5);
        assert_eq!(c.coeff_at(5, 6).unwrap(), BigInt::from(1));
        assert_eq!(c.coeff_at(1, 7).unwrap(), BigInt::from(0));
        assert_eq!(a.with_denom(4).unwrap().reduce_denom(), a);
    }

    #[test]
    fn mod_reduction_and_domain_mismatch() {
        let f = int(&[240, -24, 252]);
        let r = f.reduce_mod(7).unwrap();
        assert_eq!(r.coeffs(), &[2, 4, 0]);
        let s = int(&[1]).reduce_mod(5).unwrap();
        assert!(matches!(r.mul(&s), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn ntt_path_matches_schoolbook() {
        let ell = 101;
        let ring = ResidueRing::new(ell).unwrap();
        let a: Vec<u64> = (0..500u64).map(|i| (i * i + 3) % ell).collect();
        let f = ModSeries::from_coeffs(ring, a.clone());
        let fast = f.square();
        let slow = IntSeries::from_i64s(&a.iter().map(|&x| x as i64).collect::<Vec<_>>())
            .square()
            .reduce_mod(ell)
            .unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn weight_round_trip() {
        for w in ["12", "1/2", "-3/2", "0"] {
            assert_eq!(w.parse::<Weight>().unwrap().to_string(), w);
        }
    }
}
