//! Exact arithmetic in `Z`, `Z/ℓ` and `F_{ℓ^d}`, plus the number-theoretic
//! helpers used throughout (orders, square roots, Kronecker symbols,
//! cyclotomic factors).

pub mod arith;
pub mod ext;
pub mod linalg;
pub mod poly;
pub mod residue;

pub use arith::kronecker;
pub use ext::{cyclotomic_field_with_root, ExtElement, ExtField};
pub use residue::{sqrt_mod, Residue};

/// A character `n ↦ (t | n)`; `t = 1` is the trivial character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct KroneckerChar {
    pub t: i64,
}

impl KroneckerChar {
    pub const TRIVIAL: KroneckerChar = KroneckerChar { t: 1 };

    pub fn new(t: i64) -> Self {
        KroneckerChar { t }
    }

    pub fn is_trivial(self) -> bool {
        self.t == 1
    }

    pub fn eval(self, n: i64) -> i32 {
        kronecker(self.t, n)
    }

    /// A period of the character (divides `|4t|`).
    pub fn period(self) -> u64 {
        (4 * self.t.unsigned_abs()).max(1)
    }
}

/// The principal character modulo `p`: `n ↦ 1` if `p ∤ n`, else 0.
/// Realized as the Kronecker symbol `(p² | n)`.
pub fn principal_char(p: u64) -> KroneckerChar {
    KroneckerChar::new((p * p) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronecker_char_is_multiplicative_and_periodic() {
        for t in [-7i64, -4, -3, 5, 8, 12, 13] {
            let chi = KroneckerChar::new(t);
            let per = chi.period() as i64;
            for a in 1..40 {
                for b in 1..40 {
                    assert_eq!(chi.eval(a * b), chi.eval(a) * chi.eval(b));
                }
                assert_eq!(chi.eval(a), chi.eval(a + per));
            }
        }
    }

    #[test]
    fn principal_char_kills_multiples() {
        let chi = principal_char(5);
        for n in 1..60 {
            assert_eq!(chi.eval(n), if n % 5 == 0 { 0 } else { 1 });
        }
    }
}
