//! Finite fields `F_{ℓ^d} = F_ℓ[x]/(m(x))` and the cyclotomic residue fields
//! that hold the `M`-th roots of unity used by the permutation-module code.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::arith::{self, mul_mod, odd_prime};
use super::poly::{self, Poly};
use super::residue::Residue;
use crate::error::{Error, Result};

/// Context for `F_{ℓ^d}`: a monic irreducible modulus of degree `d` over `Z/ℓ`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtField {
    ell: u64,
    modulus: Vec<u64>,
}

impl ExtField {
    /// Builds the field from a monic irreducible `modulus` (little-endian,
    /// length `d + 1`).
    pub fn new(ell: u64, modulus: Vec<u64>) -> Result<Self> {
        odd_prime(ell)?;
        let modulus = poly::trim(modulus.into_iter().map(|c| c % ell).collect());
        if modulus.len() < 2 || modulus.last() != Some(&1) {
            return Err(Error::Usage(
                "field modulus must be monic of degree >= 1".into(),
            ));
        }
        if !poly::is_irreducible(&modulus, ell) {
            return Err(Error::Usage(format!(
                "modulus {modulus:?} is reducible mod {ell}"
            )));
        }
        Ok(ExtField { ell, modulus })
    }

    /// `F_ℓ` itself, as the degree-one extension `F_ℓ[x]/(x)`.
    pub fn prime_field(ell: u64) -> Result<Self> {
        Self::new(ell, vec![0, 1])
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Field size `ℓ^d`; `None` if it overflows `u128`.
    pub fn size(&self) -> Option<u128> {
        (self.ell as u128).checked_pow(self.degree() as u32)
    }

    // --- slice-level arithmetic on raw coefficient vectors of length d ---

    pub fn zero_raw(&self) -> Vec<u64> {
        vec![0; self.degree()]
    }

    pub fn one_raw(&self) -> Vec<u64> {
        let mut v = self.zero_raw();
        v[0] = 1;
        v
    }

    pub fn from_int_raw(&self, n: i64) -> Vec<u64> {
        let mut v = self.zero_raw();
        v[0] = arith::rem_euclid(n, self.ell);
        v
    }

    /// The residue class of `x`.
    pub fn generator_raw(&self) -> Vec<u64> {
        let padded = poly::rem(&[0, 1], &self.modulus, self.ell);
        self.pad(padded)
    }

    fn pad(&self, mut p: Poly) -> Vec<u64> {
        p.resize(self.degree(), 0);
        p
    }

    pub fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= self.ell {
                    s - self.ell
                } else {
                    s
                }
            })
            .collect()
    }

    pub fn add_assign_raw(&self, a: &mut [u64], b: &[u64]) {
        for (x, &y) in a.iter_mut().zip(b) {
            *x += y;
            if *x >= self.ell {
                *x -= self.ell;
            }
        }
    }

    pub fn sub_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| if x >= y { x - y } else { x + self.ell - y })
            .collect()
    }

    pub fn neg_raw(&self, a: &[u64]) -> Vec<u64> {
        a.iter()
            .map(|&x| if x == 0 { 0 } else { self.ell - x })
            .collect()
    }

    pub fn scale_raw(&self, a: &[u64], s: u64) -> Vec<u64> {
        a.iter().map(|&x| mul_mod(x, s, self.ell)).collect()
    }

    pub fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let d = self.degree();
        let ell = self.ell;
        if d == 1 {
            // x ≡ -m_0, so the ring is F_ℓ with plain multiplication.
            return vec![mul_mod(a[0], b[0], ell)];
        }
        let mut prod = vec![0u128; 2 * d - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += x as u128 * y as u128;
            }
        }
        let mut prod: Vec<u64> = prod.into_iter().map(|c| (c % ell as u128) as u64).collect();
        // Reduce by the monic modulus from the top.
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..d {
                let t = mul_mod(c, self.modulus[j], ell);
                let idx = k - d + j;
                prod[idx] = (prod[idx] + ell - t) % ell;
            }
        }
        prod.truncate(d);
        prod
    }

    pub fn is_zero_raw(a: &[u64]) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn inv_raw(&self, a: &[u64]) -> Result<Vec<u64>> {
        if Self::is_zero_raw(a) {
            return Err(Error::NotAUnit("zero in extension field".into()));
        }
        if self.degree() == 1 {
            let v = arith::inv_mod(a[0], self.ell).expect("nonzero in prime field");
            return Ok(vec![v]);
        }
        let (g, s) = poly::ext_gcd_inverse(&poly::trim(a.to_vec()), &self.modulus, self.ell);
        debug_assert_eq!(g, vec![1]);
        Ok(self.pad(poly::rem(&s, &self.modulus, self.ell)))
    }

    pub fn pow_raw(&self, a: &[u64], mut e: u128) -> Vec<u64> {
        let mut acc = self.one_raw();
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(&acc, &b);
            }
            b = self.mul_raw(&b, &b);
            e >>= 1;
        }
        acc
    }

    /// Least `e ≥ 1` with `a^e = 1`.
    pub fn mult_order_raw(&self, a: &[u64]) -> Result<u128> {
        if Self::is_zero_raw(a) {
            return Err(Error::NotAUnit("zero in extension field".into()));
        }
        let q = self
            .size()
            .ok_or_else(|| Error::Unsupported("field size exceeds 2^128".into()))?;
        let one = self.one_raw();
        arith::order_dividing(q - 1, |e| self.pow_raw(a, e) == one)
    }
}

/// An element of `F_{ℓ^d}` carrying its field context.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElement {
    field: Arc<ExtField>,
    coeffs: Vec<u64>,
}

impl ExtElement {
    pub fn from_raw(field: &Arc<ExtField>, coeffs: Vec<u64>) -> Self {
        debug_assert_eq!(coeffs.len(), field.degree());
        ExtElement {
            field: Arc::clone(field),
            coeffs,
        }
    }

    pub fn zero(field: &Arc<ExtField>) -> Self {
        Self::from_raw(field, field.zero_raw())
    }

    pub fn one(field: &Arc<ExtField>) -> Self {
        Self::from_raw(field, field.one_raw())
    }

    pub fn from_int(field: &Arc<ExtField>, n: i64) -> Self {
        Self::from_raw(field, field.from_int_raw(n))
    }

    pub fn from_residue(field: &Arc<ExtField>, r: Residue) -> Self {
        Self::from_int(field, r.value() as i64)
    }

    pub fn generator(field: &Arc<ExtField>) -> Self {
        Self::from_raw(field, field.generator_raw())
    }

    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        ExtField::is_zero_raw(&self.coeffs)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == self.field.one_raw()
    }

    /// The value as a residue if it lies in the prime field.
    pub fn as_residue(&self) -> Option<Residue> {
        if self.coeffs.iter().skip(1).all(|&c| c == 0) {
            Some(Residue::from_u64(self.coeffs[0], self.field.ell()))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::from_raw(&self.field, self.field.add_raw(&self.coeffs, &o.coeffs))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::from_raw(&self.field, self.field.sub_raw(&self.coeffs, &o.coeffs))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::from_raw(&self.field, self.field.mul_raw(&self.coeffs, &o.coeffs))
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(&self.field, self.field.neg_raw(&self.coeffs))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self::from_raw(
            &self.field,
            self.field.inv_raw(&self.coeffs)?,
        ))
    }

    pub fn pow(&self, e: u128) -> Self {
        Self::from_raw(&self.field, self.field.pow_raw(&self.coeffs, e))
    }

    /// `self^e` for a signed exponent (negative powers need a unit).
    pub fn pow_signed(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u128))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs() as u128))
        }
    }

    pub fn mult_order(&self) -> Result<u128> {
        self.field.mult_order_raw(&self.coeffs)
    }

    /// A square root, or `None` for nonsquares. In the prime field the
    /// smaller representative is returned.
    pub fn sqrt(&self) -> Option<Self> {
        let field = &self.field;
        if self.is_zero() {
            return Some(self.clone());
        }
        if field.degree() == 1 {
            let r = self.as_residue()?.sqrt()?;
            return Some(Self::from_residue(field, r));
        }
        let q = field.size()?;
        if !self.pow((q - 1) / 2).is_one() {
            return None;
        }
        let mut t_exp = q - 1;
        let mut s = 0u32;
        while t_exp % 2 == 0 {
            t_exp /= 2;
            s += 1;
        }
        let minus_one = Self::from_int(field, -1);
        let z = candidates(field)
            .map(|c| Self::from_raw(field, c))
            .find(|z| !z.is_zero() && z.pow((q - 1) / 2) == minus_one)?;
        let mut m = s;
        let mut c = z.pow(t_exp);
        let mut t = self.pow(t_exp);
        let mut r = self.pow(t_exp.div_ceil(2));
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t.clone();
            while !t2.is_one() {
                t2 = t2.mul(&t2);
                i += 1;
            }
            let b = c.pow(1u128 << (m - i - 1));
            m = i;
            c = b.mul(&b);
            t = t.mul(&c);
            r = r.mul(&b);
        }
        Some(r)
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} in F_{}^{}",
            self.coeffs,
            self.field.ell(),
            self.field.degree()
        )
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `mult_order` for either kind of field element.
pub fn mult_order_residue(x: Residue) -> Result<u64> {
    x.mult_order()
}

/// Builds the residue field of `Q(ζ_M)` at `ℓ`: `F_ℓ[x]/(φ)` with `φ` the
/// lexicographically least monic irreducible factor of `Φ_M mod ℓ`
/// (coefficients compared as `(c_0, c_1, …)`), and `ζ = x`.
pub fn cyclotomic_field_with_root(ell: u64, m: u64) -> Result<(Arc<ExtField>, ExtElement)> {
    odd_prime(ell)?;
    if m == 0 {
        return Err(Error::Usage("modulus must be positive".into()));
    }
    if arith::gcd(ell, m) != 1 {
        return Err(Error::RamifiedModulus { ell, modulus: m });
    }
    let d = arith::mult_order_mod(ell % m, m)? as usize;
    let factor = least_cyclotomic_factor(ell, m, d)?;
    let field = Arc::new(ExtField::new(ell, factor)?);
    let zeta = ExtElement::generator(&field);
    Ok((field, zeta))
}

fn least_cyclotomic_factor(ell: u64, m: u64, d: usize) -> Result<Poly> {
    if d == 1 {
        // Φ_M splits into linear factors x - r with r of order M in F_ℓ.
        let best = (0..ell)
            .filter(|&r| r != 0 && arith::mult_order_mod(r, ell).ok() == Some(m))
            .map(|r| vec![(ell - r) % ell, 1])
            .min_by(|a, b| poly::lex_cmp(a, b))
            .ok_or_else(|| {
                Error::Unsupported(format!("no root of unity of order {m} mod {ell}"))
            })?;
        return Ok(best);
    }
    // Work inside an auxiliary copy of F_{ℓ^d} to find a primitive M-th
    // root η, then collect the minimal polynomials of η^j for all units j.
    let aux = Arc::new(ExtField::new(ell, first_irreducible(ell, d))?);
    let q = aux
        .size()
        .ok_or_else(|| Error::Unsupported(format!("F_{ell}^{d} exceeds 2^128")))?;
    let cofactor = (q - 1) / m as u128;
    let primes = arith::prime_divisors(m);
    let one = aux.one_raw();
    let eta = candidates(&aux)
        .map(|c| aux.pow_raw(&c, cofactor))
        .find(|y| {
            primes
                .iter()
                .all(|&r| aux.pow_raw(y, (m / r) as u128) != one)
        })
        .expect("cyclic group of order divisible by M has an element of order M");

    let mut best: Option<Poly> = None;
    let mut seen = vec![false; m as usize];
    for j in 1..m {
        if seen[j as usize] || arith::gcd(j, m) != 1 {
            continue;
        }
        // Conjugates of η^j are η^(j ℓ^i).
        let mut minpoly: Vec<Vec<u64>> = vec![aux.one_raw()];
        let mut e = j;
        for _ in 0..d {
            seen[e as usize] = true;
            let root = aux.pow_raw(&eta, e as u128);
            // minpoly *= (x - root), coefficients in F_{ℓ^d}.
            let mut next = vec![aux.zero_raw(); minpoly.len() + 1];
            for (k, c) in minpoly.iter().enumerate() {
                aux.add_assign_raw(&mut next[k + 1], c);
                let t = aux.mul_raw(c, &root);
                next[k] = aux.sub_raw(&next[k], &t);
            }
            minpoly = next;
            e = e * ell % m;
        }
        let base: Poly = minpoly
            .iter()
            .map(|c| {
                debug_assert!(c.iter().skip(1).all(|&x| x == 0));
                c[0]
            })
            .collect();
        if best
            .as_ref()
            .is_none_or(|b| poly::lex_cmp(&base, b).is_lt())
        {
            best = Some(base);
        }
    }
    Ok(best.expect("M > 1 has a unit residue"))
}

/// Lexicographically least monic irreducible polynomial of degree `d`.
fn first_irreducible(ell: u64, d: usize) -> Poly {
    let mut coeffs = vec![0u64; d];
    loop {
        let mut f = coeffs.clone();
        f.push(1);
        if poly::is_irreducible(&f, ell) {
            return f;
        }
        // Increment (c_0, c_1, ...) as a little-endian counter in base ℓ,
        // which enumerates candidates in colexicographic order; any fixed
        // order is fine for the auxiliary field.
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < ell {
                break;
            }
            *c = 0;
        }
    }
}

/// Deterministic stream of nonzero field elements: x + a for a = 0, 1, ...
/// followed by small polynomials.
fn candidates(field: &ExtField) -> impl Iterator<Item = Vec<u64>> + '_ {
    let d = field.degree();
    let ell = field.ell();
    (1u64..).map(move |mut n| {
        let mut v = vec![0u64; d];
        for c in v.iter_mut() {
            *c = n % ell;
            n /= ell;
        }
        v
    })
}
