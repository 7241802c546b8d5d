use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::arith::{self, inv_mod, pow_mod, rem_euclid};
use crate::error::{Error, Result};

/// An element of `Z/ℓ` for an odd prime `ℓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` modulo the odd prime `modulus`.
    pub fn new(value: i64, modulus: u64) -> Result<Self> {
        arith::odd_prime(modulus)?;
        Ok(Self::new_unchecked(value, modulus))
    }

    pub(crate) fn new_unchecked(value: i64, modulus: u64) -> Self {
        Residue {
            value: rem_euclid(value, modulus),
            modulus,
        }
    }

    pub(crate) fn from_u64(value: u64, modulus: u64) -> Self {
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Representative in `(-ℓ/2, ℓ/2]`.
    pub fn signed(self) -> i64 {
        if self.value > self.modulus / 2 {
            self.value as i64 - self.modulus as i64
        } else {
            self.value as i64
        }
    }

    pub fn pow(self, e: u64) -> Self {
        Residue {
            value: pow_mod(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<Self> {
        inv_mod(self.value, self.modulus)
            .filter(|_| self.value != 0)
            .map(|v| Residue {
                value: v,
                modulus: self.modulus,
            })
            .ok_or_else(|| Error::NotAUnit(format!("{self}")))
    }

    /// Multiplicative order; errors on zero.
    pub fn mult_order(self) -> Result<u64> {
        if self.value == 0 {
            return Err(Error::NotAUnit(format!("{self}")));
        }
        arith::mult_order_mod(self.value, self.modulus)
    }

    /// Legendre symbol `(self | ℓ)`.
    pub fn legendre(self) -> i32 {
        arith::kronecker(self.value as i64, self.modulus as i64)
    }

    /// Deterministic square root (Tonelli–Shanks seeded with the least
    /// quadratic nonresidue). Returns the smaller of the two roots.
    pub fn sqrt(self) -> Option<Self> {
        sqrt_mod(self)
    }

    fn same_modulus(self, other: Self) {
        debug_assert_eq!(self.modulus, other.modulus, "residue modulus mismatch");
    }
}

/// Square root in `Z/ℓ`, or `None` for nonresidues.
pub fn sqrt_mod(a: Residue) -> Option<Residue> {
    let p = a.modulus;
    let v = a.value;
    if v == 0 {
        return Some(a);
    }
    if pow_mod(v, (p - 1) / 2, p) != 1 {
        return None;
    }
    let root = if p % 4 == 3 {
        pow_mod(v, (p + 1) / 4, p)
    } else {
        let mut q = p - 1;
        let mut s = 0u32;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = (2..p)
            .find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)
            .expect("odd prime has a nonresidue");
        let mut m = s;
        let mut c = pow_mod(z, q, p);
        let mut t = pow_mod(v, q, p);
        let mut r = pow_mod(v, q.div_ceil(2), p);
        while t != 1 {
            let mut i = 0;
            let mut t2 = t;
            while t2 != 1 {
                t2 = arith::mul_mod(t2, t2, p);
                i += 1;
            }
            let b = pow_mod(c, 1 << (m - i - 1), p);
            m = i;
            c = arith::mul_mod(b, b, p);
            t = arith::mul_mod(t, c, p);
            r = arith::mul_mod(r, b, p);
        }
        r
    };
    Some(Residue {
        value: root.min(p - root),
        modulus: p,
    })
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        self.same_modulus(rhs);
        let s = self.value + rhs.value;
        Residue {
            value: if s >= self.modulus {
                s - self.modulus
            } else {
                s
            },
            modulus: self.modulus,
        }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        self.same_modulus(rhs);
        Residue {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        self.same_modulus(rhs);
        Residue {
            value: arith::mul_mod(self.value, rhs.value, self.modulus),
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        Residue {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}
