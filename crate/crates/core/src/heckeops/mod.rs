//! Hecke operators on q-expansions mod `ℓ`, the composite level-one
//! operator identity, and the `Θ`/`U_ℓ` constructions.
//!
//! At level one with trivial character the composite operator
//! `(p+1) U_{M_p} − p T_{M_p} + p T_{M_p/p²}` acts on coefficients by
//!
//! ```text
//! (p+1) c(M_p n) − p Σ_{a | (M_p, n)} a^{k−1} c(n M_p / a²)
//!               + p^{k−1} Σ_{a | (M_p/p², n)} a^{k−1} c(n M_p / (p² a²))
//! ```
//!
//! after clearing the unit prefactor `M^{1−k/2}` from the slash action.
//! The sums run over the upper-triangular coset representatives
//! `(a b; 0 d)` with `ad = M`; only `b` summed over `Z/d` survives, which
//! sieves the exponents to multiples of `d`.

use std::collections::HashMap;

use crate::algebra::arith::legendre_residue as legendre_residue_of;
use crate::algebra::arith::{self, divisors, factor, gcd, mul_mod, pow_mod};
use crate::algebra::KroneckerChar;
use crate::error::{need_precision, Error, Result};
use crate::qseries::{CoeffRing, ModSeries, QExpansion};

/// Weight, character and level for Hecke operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeckeContext {
    pub weight: i64,
    pub character: KroneckerChar,
    pub level: u64,
}

impl HeckeContext {
    pub fn level_one(weight: i64) -> Self {
        HeckeContext {
            weight,
            character: KroneckerChar::TRIVIAL,
            level: 1,
        }
    }

    /// `χ(p) p^{k−1} mod ℓ`.
    pub fn nebentypus_factor(&self, p: u64, ell: u64) -> Result<u64> {
        if gcd(p, self.level) != 1 {
            return Err(Error::Usage(format!(
                "p = {p} divides the level {}",
                self.level
            )));
        }
        if self.weight < 1 {
            return Err(Error::Unsupported(format!(
                "Hecke operators in weight {}",
                self.weight
            )));
        }
        let chi = self.character.eval(p as i64);
        let pk = pow_mod(p % ell, self.weight as u64 - 1, ell);
        Ok(match chi {
            0 => 0,
            1 => pk,
            _ => (ell - pk) % ell,
        })
    }
}

/// `c(out; n) = c(f; pn) + c·c(f; n/p)` with the second term only when
/// `p | n`; the output is known below `⌊P/p⌋`.
pub fn hecke_tp_with<R: CoeffRing>(
    f: &QExpansion<R>,
    p: u64,
    c: &R::Elem,
) -> Result<QExpansion<R>> {
    if f.denom() != 1 {
        return Err(Error::Usage("T_p needs integer exponents".into()));
    }
    if f.valuation() < 0 {
        return Err(Error::Usage("T_p needs a holomorphic expansion".into()));
    }
    let pi = p as i64;
    need_precision(pi, f.precision())?;
    let ring = f.ring().clone();
    let out_prec = f.precision() / pi;
    let coeffs = (0..out_prec)
        .map(|n| {
            let mut v = f.coeff(pi * n)?;
            if n % pi == 0 {
                v = ring.add(&v, &ring.mul(c, &f.coeff(n / pi)?));
            }
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QExpansion::from_coeffs(ring, coeffs))
}

/// Classical `T_p` on a mod-`ℓ` expansion.
pub fn hecke_tp(f: &ModSeries, p: u64, ctx: &HeckeContext) -> Result<ModSeries> {
    arith::odd_prime(f.ell())?;
    if !arith::is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    let c = ctx.nebentypus_factor(p, f.ell())?;
    hecke_tp_with(f, p, &c)
}

/// Random access to the coefficients of a form mod `ℓ`.
pub trait Coefficients {
    fn ell(&self) -> u64;
    fn coeff_mod(&self, n: i64) -> Result<u64>;
}

impl Coefficients for ModSeries {
    fn ell(&self) -> u64 {
        ModSeries::ell(self)
    }
    fn coeff_mod(&self, n: i64) -> Result<u64> {
        self.coeff(n)
    }
}

/// Coefficients of a normalized level-one Hecke eigenform mod `ℓ`, extended
/// beyond a computed window by multiplicativity and the prime-power
/// recurrence `c(p^{e+1}) = λ_p c(p^e) − χ(p) p^{k−1} c(p^{e−1})`.
#[derive(Debug, Clone)]
pub struct MultiplicativeCoeffs {
    window: ModSeries,
    ctx: HeckeContext,
    extra_primes: HashMap<u64, u64>,
}

impl MultiplicativeCoeffs {
    /// `window` must be a normalized eigenform (`c(1) = 1`). Prime
    /// eigenvalues are read from the window.
    pub fn new(window: ModSeries, ctx: HeckeContext) -> Result<Self> {
        if window.coeff(1)? != 1 {
            return Err(Error::Hypothesis(
                "eigenform must be normalized with c(1) = 1".into(),
            ));
        }
        Ok(MultiplicativeCoeffs {
            window,
            ctx,
            extra_primes: HashMap::new(),
        })
    }

    /// Supply `λ_p` for a prime beyond the window.
    pub fn with_prime(mut self, p: u64, lambda: u64) -> Self {
        self.extra_primes.insert(p, lambda % self.window.ell());
        self
    }

    fn lambda(&self, p: u64) -> Result<u64> {
        if let Some(&l) = self.extra_primes.get(&p) {
            return Ok(l);
        }
        self.window.coeff(p as i64)
    }

    fn prime_power(&self, p: u64, e: u32) -> Result<u64> {
        let ell = self.window.ell();
        if (p
            .checked_pow(e)
            .map(|q| (q as i64) < self.window.precision()))
        .unwrap_or(false)
        {
            return self.window.coeff(p.pow(e) as i64);
        }
        let lambda = self.lambda(p)?;
        let c = self.ctx.nebentypus_factor(p, ell)?;
        let (mut prev, mut cur) = (1u64, lambda);
        for _ in 1..e {
            let next = (mul_mod(lambda, cur, ell) + ell - mul_mod(c, prev, ell)) % ell;
            prev = cur;
            cur = next;
        }
        Ok(if e == 0 { 1 } else { cur })
    }
}

impl Coefficients for MultiplicativeCoeffs {
    fn ell(&self) -> u64 {
        self.window.ell()
    }

    fn coeff_mod(&self, n: i64) -> Result<u64> {
        if n < 0 {
            return Ok(0);
        }
        if n < self.window.precision() {
            return self.window.coeff(n);
        }
        let ell = self.window.ell();
        let mut acc = 1u64;
        for (p, e) in factor(n as u64) {
            acc = mul_mod(acc, self.prime_power(p, e)?, ell);
            if acc == 0 {
                break;
            }
        }
        Ok(acc)
    }
}

/// Outcome of [`composite_identity_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeCheck {
    pub passed: bool,
    /// Least `n` where the identity fails.
    pub first_failure: Option<i64>,
    pub bound: i64,
    /// `M_p` used for the operator.
    pub modulus: u64,
}

/// Checks the composite operator identity for `n = 1..=bound` at level one
/// with trivial character, where `m` is the gap exponent of the congruence
/// `c(f; p^m n) ≡ 0` for `p ∤ n` and the operator is taken at `M_p = p^{m+1}`.
pub fn composite_identity_check(
    f: &impl Coefficients,
    p: u64,
    m: u32,
    k: i64,
    bound: i64,
) -> Result<CompositeCheck> {
    if m < 1 {
        return Err(Error::Usage("composite identity needs m >= 1".into()));
    }
    if !arith::is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if k < 1 {
        return Err(Error::Unsupported(format!(
            "composite identity in weight {k}"
        )));
    }
    let ell = f.ell();
    let mp = p
        .checked_pow(m + 1)
        .filter(|&x| x < (1 << 40))
        .ok_or_else(|| Error::Unsupported(format!("M_p = {p}^{} too large", m + 1)))?;
    let m_inner = mp / (p * p);
    let k1 = k as u64 - 1;
    let p_mod = p % ell;
    let pk1 = pow_mod(p_mod, k1, ell);
    let apow = |a: u64| pow_mod(a % ell, k1, ell);
    for n in 1..=bound {
        let nu = n as u64;
        let mut total = mul_mod((p + 1) % ell, f.coeff_mod((mp * nu) as i64)?, ell);
        let mut second = 0u64;
        for a in divisors(gcd(mp, nu)) {
            let idx = (nu * mp) / (a * a);
            second = (second + mul_mod(apow(a), f.coeff_mod(idx as i64)?, ell)) % ell;
        }
        total = (total + ell - mul_mod(p_mod, second, ell)) % ell;
        if m_inner >= 1 && mp % (p * p) == 0 {
            let mut third = 0u64;
            for a in divisors(gcd(m_inner, nu)) {
                let idx = (nu * m_inner) / (a * a);
                third = (third + mul_mod(apow(a), f.coeff_mod(idx as i64)?, ell)) % ell;
            }
            total = (total + mul_mod(pk1, third, ell)) % ell;
        }
        if total != 0 {
            return Ok(CompositeCheck {
                passed: false,
                first_failure: Some(n),
                bound,
                modulus: mp,
            });
        }
    }
    Ok(CompositeCheck {
        passed: true,
        first_failure: None,
        bound,
        modulus: mp,
    })
}

/// `g − (β|ℓ) Θ^{(ℓ−1)/2} g`: kills every coefficient at `n` with
/// `(n|ℓ) = (β|ℓ)`, in particular the progression `ℓZ + β`.
pub fn theta_kill(g: &ModSeries, beta: i64) -> Result<ModSeries> {
    let ell = g.ell();
    if beta.rem_euclid(ell as i64) == 0 {
        return Err(Error::Usage(format!(
            "theta_kill needs ell ∤ beta (beta = {beta}, ell = {ell})"
        )));
    }
    let chi_beta = legendre_residue_of(beta, ell);
    let t = g.theta_pow(((ell - 1) / 2) as u32)?;
    g.sub(&t.scale(&chi_beta))
}

/// `Θ g`, whose coefficients at multiples of `ℓ` vanish.
pub fn theta_zero_kill(g: &ModSeries) -> Result<ModSeries> {
    g.theta()
}

/// `λ·f` helper used for eigen-equation checks.
pub fn is_eigen<R: CoeffRing>(f: &QExpansion<R>, tf: &QExpansion<R>, lambda: &R::Elem) -> bool {
    let lf = f.scale(lambda);
    let p = tf.precision().min(lf.precision());
    match (tf.truncate(p), lf.truncate(p)) {
        (Ok(a), Ok(b)) => a == b,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta, delta_mod, eisenstein_mod, level_one_basis};
    use crate::qseries::ResidueRing;
    use num_bigint::BigInt;

    #[test]
    fn delta_eigenvalues() {
        let exact = delta(60 * 50).unwrap();
        for ell in [5u64, 7, 11, 13] {
            let d = delta_mod(ell, 60 * 50).unwrap();
            let ctx = HeckeContext::level_one(12);
            for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
                if p == ell {
                    continue;
                }
                let t = hecke_tp(&d, p, &ctx).unwrap();
                let tau = ResidueRing::new(ell)
                    .unwrap()
                    .reduce_big(&exact.coeff(p as i64).unwrap());
                assert!(is_eigen(&d, &t, &tau), "p={p} ell={ell}");
            }
        }
        let d7 = delta_mod(7, 100).unwrap();
        let t2 = hecke_tp(&d7, 2, &HeckeContext::level_one(12)).unwrap();
        assert_eq!(t2, d7.truncate(50).unwrap().scale(&4));
        let d11 = delta_mod(11, 99).unwrap();
        let t3 = hecke_tp(&d11, 3, &HeckeContext::level_one(12)).unwrap();
        assert_eq!(t3, d11.truncate(33).unwrap().scale(&10));
        assert_eq!(exact.coeff(11).unwrap(), BigInt::from(534612));
    }

    #[test]
    fn constant_term() {
        let ring = ResidueRing::new(7).unwrap();
        let one = ModSeries::one(ring, 20);
        let t = hecke_tp(&one, 2, &HeckeContext::level_one(4)).unwrap();
        assert_eq!(t.coeff(0).unwrap(), (1 + 8) % 7);
    }

    #[test]
    fn hecke_operators_commute() {
        let b = level_one_basis(24, 13, 400).unwrap();
        let ctx = HeckeContext::level_one(24);
        for f in &b.basis {
            let a = hecke_tp(&hecke_tp(f, 2, &ctx).unwrap(), 3, &ctx).unwrap();
            let c = hecke_tp(&hecke_tp(f, 3, &ctx).unwrap(), 2, &ctx).unwrap();
            assert_eq!(a, c);
        }
    }

    #[test]
    fn multiplicative_extension_matches_series() {
        let d = delta_mod(5, 2000).unwrap();
        let short = MultiplicativeCoeffs::new(d.truncate(60).unwrap(), HeckeContext::level_one(12))
            .unwrap();
        for n in 1..2000 {
            // Every prime factor must lie inside the short window.
            if factor(n as u64).iter().all(|&(p, _)| p < 60) {
                assert_eq!(short.coeff_mod(n).unwrap(), d.coeff(n).unwrap(), "n={n}");
            }
        }
    }

    #[test]
    fn composite_identity_examples() {
        let ctx = HeckeContext::level_one(12);
        let d5 = MultiplicativeCoeffs::new(delta_mod(5, 3000).unwrap(), ctx).unwrap();
        let d7 = MultiplicativeCoeffs::new(delta_mod(7, 3000).unwrap(), ctx).unwrap();
        assert!(composite_identity_check(&d5, 7, 3, 12, 500).unwrap().passed);
        assert!(composite_identity_check(&d7, 3, 1, 12, 500).unwrap().passed);
        // A plain window gives the same verdict where it reaches.
        let w5 = delta_mod(5, 7i64.pow(4) * 31).unwrap();
        assert!(composite_identity_check(&w5, 7, 3, 12, 30).unwrap().passed);
        // τ(3) ≡ 0 mod 7 gives period 2, so m = 2 is not a gap exponent.
        let r = composite_identity_check(&d7, 3, 2, 12, 100).unwrap();
        assert!(!r.passed);
        assert!(r.first_failure.unwrap() <= 10, "{r:?}");
        // Δ mod 5 at p = 7 has gap exponents {3, 7, ...}; m = 2 is not one.
        let r = composite_identity_check(&d5, 7, 2, 12, 500).unwrap();
        assert!(!r.passed);
        assert_eq!(r.first_failure, Some(1));
        // Reading beyond the window is an error, not a pass.
        let short = delta_mod(5, 100).unwrap();
        assert!(matches!(
            composite_identity_check(&short, 7, 3, 12, 10),
            Err(Error::Precision { .. })
        ));
    }

    #[test]
    fn theta_constructions() {
        for ell in [5u64, 7, 11, 13, 17] {
            let g = delta_mod(ell, 600).unwrap();
            for beta in 1..ell as i64 {
                let g1 = theta_kill(&g, beta).unwrap();
                for n in 0..600i64 {
                    if n % ell as i64 != 0
                        && legendre_residue_of(n, ell) == legendre_residue_of(beta, ell)
                    {
                        assert_eq!(g1.coeff(n).unwrap(), 0);
                    }
                }
            }
            let z = theta_zero_kill(&g).unwrap();
            assert!(z.u_operator(ell).unwrap().is_zero());
            assert!(!z.is_zero());
        }
        // ℓ = 17, β nonresidue: the surviving coefficients double.
        let g = delta_mod(17, 200).unwrap();
        let beta = 3; // 3 is a nonresidue mod 17
        assert_eq!(legendre_residue_of(beta, 17), 16);
        let g1 = theta_kill(&g, beta).unwrap();
        for n in 1..200i64 {
            if legendre_residue_of(n, 17) == 1 {
                assert_eq!(g1.coeff(n).unwrap(), 2 * g.coeff(n).unwrap() % 17);
            }
        }
        let zero = ModSeries::zero(ResidueRing::new(7).unwrap(), 1, 0, 50);
        assert!(theta_kill(&zero, 3).unwrap().is_zero());
        assert!(theta_kill(&zero, 14).is_err());
        let c = eisenstein_mod(4, 7, 1).unwrap();
        assert!(theta_zero_kill(&c).unwrap().is_zero());
    }
}
