use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ntt;
use crate::algebra::arith::{inv_mod, mul_mod, rem_euclid};
use crate::algebra::ExtField;

/// Coefficient domain of a [`QExpansion`](super::QExpansion).
///
/// A ring value is a small context object (the modulus, the field); the
/// elements themselves are plain data.
pub trait CoeffRing: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Multiplicative inverse, if `a` is a unit.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Human-readable domain label used in cache records.
    fn label(&self) -> String;

    fn mul_i64(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.mul(a, &self.from_i64(n))
    }

    /// First `out_len` coefficients of the Cauchy product.
    fn convolve(&self, a: &[Self::Elem], b: &[Self::Elem], out_len: usize) -> Vec<Self::Elem> {
        let mut out = vec![self.zero(); out_len];
        for (i, x) in a.iter().enumerate().take(out_len) {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(out_len - i) {
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }
}

/// Exact integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigInt) -> Option<BigInt> {
        if a.abs().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }
    fn label(&self) -> String {
        "int".into()
    }

    fn convolve(&self, a: &[BigInt], b: &[BigInt], out_len: usize) -> Vec<BigInt> {
        // Fast path: when every partial sum fits in i128 skip BigInt
        // arithmetic entirely.
        let bound = |v: &[BigInt]| v.iter().map(|x| x.bits()).max().unwrap_or(0);
        let len_bits = (out_len.max(1) as f64).log2().ceil() as u64 + 1;
        if bound(a) + bound(b) + len_bits < 126 {
            let a64: Vec<i128> = a.iter().map(|x| x.to_i128().unwrap()).collect();
            let b64: Vec<i128> = b.iter().map(|x| x.to_i128().unwrap()).collect();
            let mut out = vec![0i128; out_len];
            for (i, &x) in a64.iter().enumerate().take(out_len) {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b64.iter().enumerate().take(out_len - i) {
                    out[i + j] += x * y;
                }
            }
            return out.into_iter().map(BigInt::from).collect();
        }
        let mut out = vec![BigInt::zero(); out_len];
        for (i, x) in a.iter().enumerate().take(out_len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(out_len - i) {
                out[i + j] += x * y;
            }
        }
        out
    }
}

/// Residues modulo an odd prime `ℓ`, stored as `u64` in `[0, ℓ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueRing {
    ell: u64,
}

impl ResidueRing {
    /// Caller guarantees `ell` is an odd prime below `2^31`.
    pub(crate) fn new_unchecked(ell: u64) -> Self {
        ResidueRing { ell }
    }

    pub fn new(ell: u64) -> crate::Result<Self> {
        crate::algebra::arith::odd_prime(ell)?;
        Ok(ResidueRing { ell })
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn reduce_big(&self, n: &BigInt) -> u64 {
        let r = n % BigInt::from(self.ell);
        let r = r.to_i64().expect("residue fits");
        rem_euclid(r, self.ell)
    }
}

impl CoeffRing for ResidueRing {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        rem_euclid(n, self.ell)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.ell {
            s - self.ell
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.ell - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.ell)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.ell - a
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            inv_mod(*a, self.ell)
        }
    }
    fn label(&self) -> String {
        format!("mod {}", self.ell)
    }

    fn convolve(&self, a: &[u64], b: &[u64], out_len: usize) -> Vec<u64> {
        ntt::convolve_auto(a, b, out_len, self.ell)
    }
}

/// Elements of `F_{ℓ^d}` as raw coefficient vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtRing {
    pub field: Arc<ExtField>,
}

impl ExtRing {
    pub fn new(field: Arc<ExtField>) -> Self {
        ExtRing { field }
    }
}

impl CoeffRing for ExtRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        self.field.zero_raw()
    }
    fn one(&self) -> Vec<u64> {
        self.field.one_raw()
    }
    fn from_i64(&self, n: i64) -> Vec<u64> {
        self.field.from_int_raw(n)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.field.add_raw(a, b)
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.field.sub_raw(a, b)
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.field.mul_raw(a, b)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        self.field.neg_raw(a)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        ExtField::is_zero_raw(a)
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        self.field.inv_raw(a).ok()
    }
    fn label(&self) -> String {
        format!("F_{}^{}", self.field.ell(), self.field.degree())
    }
}
