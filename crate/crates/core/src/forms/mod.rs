//! Generators of level-one forms (`E4`, `E6`, `Δ`, powers of `η`), the
//! partition function, and echelon bases of `M_k(SL2(Z))` mod `ℓ`.

pub mod named;

pub use named::NamedForm;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::arith::{self, gcd};
use crate::algebra::linalg;
use crate::error::{need_precision, Error, Result};
use crate::qseries::{
    CoeffRing, FormDescriptor, IntSeries, Integers, ModSeries, QExpansion, ResidueRing, Weight,
};

/// `∏(1 − qⁿ) = Σ (−1)^j q^{j(3j−1)/2}` over `j ∈ Z`, known below `q^precision`.
pub fn pentagonal<R: CoeffRing>(ring: R, precision: i64) -> QExpansion<R> {
    let len = precision.max(0) as usize;
    let mut coeffs = vec![ring.zero(); len];
    for (off, sign) in pentagonal_offsets(len) {
        coeffs[off] = ring.from_i64(sign);
    }
    QExpansion::from_coeffs(ring, coeffs)
}

/// Generalized pentagonal numbers below `bound` with their signs, in
/// increasing order: `(0, 1), (1, −1), (2, −1), (5, 1), (7, 1), ...`.
pub fn pentagonal_offsets(bound: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    if bound == 0 {
        return out;
    }
    out.push((0, 1));
    for j in 1.. {
        let sign = if j % 2 == 1 { -1 } else { 1 };
        let a = j * (3 * j - 1) / 2;
        let b = j * (3 * j + 1) / 2;
        if a >= bound {
            break;
        }
        out.push((a, sign));
        if b < bound {
            out.push((b, sign));
        }
    }
    out
}

fn divisor_power_sums(k: u32, len: usize) -> Result<Vec<u128>> {
    let mut sigma = vec![0u128; len];
    for d in 1..len {
        let dk = (d as u128).checked_pow(k).ok_or_else(|| {
            Error::Unsupported(format!("divisor sums overflow at precision {len}"))
        })?;
        for m in (d..len).step_by(d) {
            sigma[m] = sigma[m].checked_add(dk).ok_or_else(|| {
                Error::Unsupported(format!("divisor sums overflow at precision {len}"))
            })?;
        }
    }
    Ok(sigma)
}

fn eisenstein_scale(k: i64) -> Result<i64> {
    match k {
        4 => Ok(240),
        6 => Ok(-504),
        _ => Err(Error::Unsupported(format!(
            "Eisenstein series of weight {k}"
        ))),
    }
}

/// `E4 = 1 + 240 Σ σ₃(n) qⁿ` or `E6 = 1 − 504 Σ σ₅(n) qⁿ`.
pub fn eisenstein(k: i64, precision: i64) -> Result<IntSeries> {
    let scale = BigInt::from(eisenstein_scale(k)?);
    if precision < 1 {
        return Err(Error::Usage("Eisenstein series need precision >= 1".into()));
    }
    let sigma = divisor_power_sums(k as u32 - 1, precision as usize)?;
    let mut coeffs: Vec<BigInt> = sigma.iter().map(|&s| &scale * BigInt::from(s)).collect();
    coeffs[0] = BigInt::from(1);
    Ok(IntSeries::from_coeffs(Integers, coeffs)
        .with_descriptor(FormDescriptor::level_one(format!("E{k}"), k)))
}

/// [`eisenstein`] computed directly mod `ell`.
pub fn eisenstein_mod(k: i64, ell: u64, precision: i64) -> Result<ModSeries> {
    let ring = ResidueRing::new(ell)?;
    let scale = ring.from_i64(eisenstein_scale(k)?);
    if precision < 1 {
        return Err(Error::Usage("Eisenstein series need precision >= 1".into()));
    }
    let len = precision as usize;
    let e = k as u64 - 1;
    let mut sigma = vec![0u64; len];
    for d in 1..len {
        let dk = arith::pow_mod(d as u64 % ell, e, ell);
        if dk == 0 {
            continue;
        }
        for m in (d..len).step_by(d) {
            sigma[m] = ring.add(&sigma[m], &dk);
        }
    }
    let mut coeffs: Vec<u64> = sigma.iter().map(|s| ring.mul(s, &scale)).collect();
    coeffs[0] = 1;
    Ok(ModSeries::from_coeffs(ring, coeffs)
        .with_descriptor(FormDescriptor::level_one(format!("E{k}"), k)))
}

fn delta_in<R: CoeffRing>(ring: R, precision: i64) -> Result<QExpansion<R>> {
    if precision < 2 {
        return Err(Error::Usage("Delta needs precision >= 2".into()));
    }
    // q ∏(1 − qⁿ)^24 with P^24 = P^16 · P^8 from four squarings.
    let p1 = pentagonal(ring, precision - 1);
    let p2 = p1.square();
    let p4 = p2.square();
    let p8 = p4.square();
    let p16 = p8.square();
    let p24 = p16.mul(&p8)?;
    Ok(p24
        .shift(1)
        .with_valuation(0)
        .with_descriptor(FormDescriptor::level_one("Delta", 12)))
}

/// `Δ = q ∏(1 − qⁿ)^24` over the integers, known below `q^precision`.
pub fn delta(precision: i64) -> Result<IntSeries> {
    delta_in(Integers, precision)
}

/// `Δ mod ℓ`, computed entirely in `Z/ℓ` (NTT products for long windows).
pub fn delta_mod(ell: u64, precision: i64) -> Result<ModSeries> {
    delta_in(ResidueRing::new(ell)?, precision)
}

/// Coefficients `τ(0..precision)` of `Δ` modulo any `modulus < 2^31`.
///
/// With a composite modulus one run serves every prime factor: reduce the
/// result mod each `ℓ | modulus`.
pub fn delta_residues(modulus: u64, precision: i64) -> Result<Vec<u64>> {
    use crate::qseries::ntt::convolve_auto;
    if precision < 2 || !(2..1 << 31).contains(&modulus) {
        return Err(Error::Usage(format!(
            "delta_residues needs precision >= 2 and 2 <= modulus < 2^31 (got {precision}, {modulus})"
        )));
    }
    let len = (precision - 1) as usize;
    let mut p1 = vec![0u64; len];
    for (off, sign) in pentagonal_offsets(len) {
        p1[off] = if sign > 0 { 1 } else { modulus - 1 };
    }
    let sq = |v: &Vec<u64>| convolve_auto(v, v, len, modulus);
    let p2 = sq(&p1);
    let p4 = sq(&p2);
    let p8 = sq(&p4);
    let p16 = sq(&p8);
    let p24 = convolve_auto(&p16, &p8, len, modulus);
    let mut out = Vec::with_capacity(precision as usize);
    out.push(0);
    out.extend(p24);
    Ok(out)
}

/// `η^r = q^{r/24} ∏(1 − qⁿ)^r` with denominator 24. The product factor is
/// known below `q^precision`, so the series is known below exponent
/// `r/24 + precision`.
pub fn eta_power(r: i64, precision: i64) -> Result<IntSeries> {
    if precision < 1 {
        return Err(Error::Usage("eta powers need precision >= 1".into()));
    }
    let base = pentagonal(Integers, precision);
    let base = if r < 0 { base.invert()? } else { base };
    let prod = base.pow(r.unsigned_abs() as u32);
    let name = if r == 1 {
        "eta".to_string()
    } else {
        format!("eta^{r}")
    };
    let desc = FormDescriptor {
        name,
        weight: Weight::half(r),
        level: 1,
        character: crate::algebra::KroneckerChar::TRIVIAL,
    };
    Ok(prod
        .v_operator(24)?
        .shift(r)
        .from_integer_grid(24)?
        .with_descriptor(desc))
}

/// `p(0), ..., p(n_max)` modulo `modulus` by Euler's pentagonal recurrence.
pub fn partition_mod(modulus: u64, n_max: usize) -> Result<Vec<u64>> {
    if modulus == 0 || modulus >= 1 << 32 {
        return Err(Error::Usage(format!(
            "partition modulus {modulus} out of range"
        )));
    }
    let offsets: Vec<(usize, i64)> = pentagonal_offsets(n_max + 1).into_iter().skip(1).collect();
    let mut p = vec![0u64; n_max + 1];
    p[0] = 1 % modulus;
    for n in 1..=n_max {
        // Signs in the recurrence are the negated pentagonal signs.
        let (mut plus, mut minus) = (0u64, 0u64);
        for &(off, sign) in &offsets {
            if off > n {
                break;
            }
            if sign < 0 {
                plus += p[n - off];
            } else {
                minus += p[n - off];
            }
        }
        p[n] = (plus % modulus + modulus - minus % modulus) % modulus;
    }
    Ok(p)
}

/// Exact `p(0), ..., p(n_max)`.
pub fn partitions(n_max: usize) -> Vec<BigInt> {
    let offsets: Vec<(usize, i64)> = pentagonal_offsets(n_max + 1).into_iter().skip(1).collect();
    let mut p: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    p.push(BigInt::from(1));
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        for &(off, sign) in &offsets {
            if off > n {
                break;
            }
            if sign < 0 {
                acc += &p[n - off];
            } else {
                acc -= &p[n - off];
            }
        }
        p.push(acc);
    }
    p
}

/// `dim M_k(SL2(Z))`.
pub fn dim_level_one(k: i64) -> usize {
    if k < 0 || k % 2 != 0 {
        return 0;
    }
    let base = (k / 12) as usize;
    if k % 12 == 2 {
        base
    } else {
        base + 1
    }
}

/// Sturm bound `⌊k/12⌋`: a form in `M_k` vanishing mod `ℓ` through this
/// index vanishes identically.
pub fn sturm_bound(k: i64) -> i64 {
    k.max(0) / 12
}

/// Default precision for a weight-`k` basis: twice the dimension or the
/// Sturm bound, plus slack.
pub fn default_basis_precision(k: i64) -> i64 {
    (2 * dim_level_one(k) as i64).max(sturm_bound(k) + 1) + 16
}

/// Echelon basis of `M_k(SL2(Z))` reduced mod `ℓ`.
#[derive(Debug, Clone)]
pub struct LevelOneBasis {
    pub weight: i64,
    pub ell: u64,
    /// Reduced row echelon basis; element `i` has pivot at `q^i`.
    pub basis: Vec<ModSeries>,
    /// Exponents `(a, b)` of the monomials `E4^a E6^b` that were echelonized.
    pub monomials: Vec<(u32, u32)>,
}

impl LevelOneBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn precision(&self) -> i64 {
        self.basis.first().map_or(i64::MAX, |b| b.precision())
    }

    /// Coordinates of `f` in the basis; fails with [`Error::NotInSpan`] if the
    /// residual is nonzero somewhere in the common window.
    pub fn coordinates(&self, f: &ModSeries) -> Result<Vec<u64>> {
        if f.ell() != self.ell {
            return Err(Error::DomainMismatch(format!(
                "mod {} vs mod {}",
                f.ell(),
                self.ell
            )));
        }
        need_precision(self.dim() as i64, f.precision())?;
        let coords: Vec<u64> = (0..self.dim() as i64)
            .map(|n| f.coeff(n))
            .collect::<Result<_>>()?;
        let residual = f.sub(&self.combine(&coords))?;
        if let Some(index) = residual.order() {
            return Err(Error::NotInSpan {
                weight: self.weight,
                index,
            });
        }
        Ok(coords)
    }

    /// `Σ c_i b_i`.
    pub fn combine(&self, coords: &[u64]) -> ModSeries {
        let ring = ResidueRing::new_unchecked(self.ell);
        let mut acc = ModSeries::zero(ring, 1, 0, self.precision());
        for (c, b) in coords.iter().zip(&self.basis) {
            if *c != 0 {
                acc = acc.add(&b.scale(c)).expect("same ring");
            }
        }
        acc
    }

    /// The cusp-form part: basis elements with pivot at `q^1` or later.
    pub fn cusp_basis(&self) -> &[ModSeries] {
        if self.dim() == 0 || self.weight == 0 {
            return &[];
        }
        &self.basis[1..]
    }
}

/// Monomial exponents `(a, b)` with `4a + 6b = k`, ordered by `b`.
pub fn monomial_exponents(k: i64) -> Vec<(u32, u32)> {
    if k < 0 || k % 2 != 0 {
        return Vec::new();
    }
    (0..=k / 6)
        .filter(|b| (k - 6 * b) % 4 == 0)
        .map(|b| (((k - 6 * b) / 4) as u32, b as u32))
        .collect()
}

/// Echelon basis of `M_k` mod `ℓ` from the monomials `E4^a E6^b`.
pub fn level_one_basis(k: i64, ell: u64, precision: i64) -> Result<LevelOneBasis> {
    let ring = ResidueRing::new(ell)?;
    if ell < 5 {
        return Err(Error::Unsupported(format!(
            "level-one bases need ell >= 5 (got {ell})"
        )));
    }
    if k < 0 || k % 2 != 0 {
        return Err(Error::Usage(format!(
            "weight {k} must be even and non-negative"
        )));
    }
    let dim = dim_level_one(k);
    need_precision(dim as i64, precision)?;
    let monomials = monomial_exponents(k);
    let max_a = monomials.iter().map(|m| m.0).max().unwrap_or(0);
    let max_b = monomials.iter().map(|m| m.1).max().unwrap_or(0);
    let e4 = eisenstein_mod(4, ell, precision.max(1))?;
    let e6 = eisenstein_mod(6, ell, precision.max(1))?;
    let powers = |f: &ModSeries, n: u32| {
        let mut out = vec![ModSeries::one(ring, precision.max(1))];
        for i in 0..n as usize {
            let next = out[i].mul(f).expect("same ring");
            out.push(next);
        }
        out
    };
    let p4 = powers(&e4, max_a);
    let p6 = powers(&e6, max_b);
    let rows: Vec<Vec<u64>> = monomials
        .iter()
        .map(|&(a, b)| {
            p4[a as usize]
                .mul(&p6[b as usize])
                .expect("same ring")
                .truncate(precision)
                .expect("window")
                .into_coeffs()
        })
        .collect();
    let (rows, pivots) = linalg::rref(rows, ell);
    if rows.len() != dim || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return Err(Error::DegenerateBasis {
            weight: k,
            ell,
            rank: rows.len(),
            dim,
        });
    }
    let basis = rows
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            ModSeries::from_coeffs(ring, c)
                .with_descriptor(FormDescriptor::level_one(format!("M{k}[{i}]"), k))
        })
        .collect();
    Ok(LevelOneBasis {
        weight: k,
        ell,
        basis,
        monomials,
    })
}

/// Greedy left-to-right choice of indices `n` coprime to `p` whose
/// coefficient columns make the `dim × dim` matrix `(c(b_i; n))` invertible.
///
/// When `k ≡ 0 (mod ℓ−1)` the span contains a nonzero constant
/// (`E_{ℓ−1} ≡ 1`), which no index `n ≥ 1` can detect; that case reports
/// [`Error::NoWitness`].
pub fn coefficient_full_rank_witness(basis: &LevelOneBasis, p: u64) -> Result<Vec<i64>> {
    full_rank_witness(&basis.basis, basis.ell, p)
}

/// [`coefficient_full_rank_witness`] for an arbitrary independent family.
pub fn full_rank_witness(forms: &[ModSeries], ell: u64, p: u64) -> Result<Vec<i64>> {
    if p == ell {
        return Err(Error::Usage(format!("witness prime {p} equals ell")));
    }
    let dim = forms.len();
    let mut chosen = Vec::new();
    let mut echelon: Vec<(usize, Vec<u64>)> = Vec::new();
    let bound = forms.iter().map(|f| f.precision()).min().unwrap_or(1);
    for n in 1..bound {
        if chosen.len() == dim {
            break;
        }
        if gcd(n as u64, p) != 1 {
            continue;
        }
        let mut col: Vec<u64> = forms.iter().map(|b| b.coeff(n).expect("window")).collect();
        for (pc, row) in &echelon {
            let f = col[*pc];
            if f != 0 {
                for (x, &y) in col.iter_mut().zip(row) {
                    *x = (*x + ell - arith::mul_mod(f, y, ell)) % ell;
                }
            }
        }
        if let Some(pc) = col.iter().position(|&x| x != 0) {
            let inv = arith::inv_mod(col[pc], ell).expect("unit");
            let row = col.iter().map(|&x| arith::mul_mod(x, inv, ell)).collect();
            echelon.push((pc, row));
            chosen.push(n);
        }
    }
    if chosen.len() < dim {
        return Err(Error::NoWitness(bound));
    }
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_partitions(n: usize) -> u64 {
        // Count partitions of n with parts ≤ n by DP over parts.
        let mut ways = vec![0u64; n + 1];
        ways[0] = 1;
        for part in 1..=n {
            for m in part..=n {
                ways[m] += ways[m - part];
            }
        }
        ways[n]
    }

    #[test]
    fn eisenstein_values() {
        let e4 = eisenstein(4, 5).unwrap();
        let e6 = eisenstein(6, 5).unwrap();
        assert_eq!(e4.coeff(0).unwrap(), BigInt::from(1));
        assert_eq!(e4.coeff(1).unwrap(), BigInt::from(240));
        assert_eq!(e6.coeff(2).unwrap(), BigInt::from(-16632));
        assert_eq!(eisenstein_mod(4, 7, 5).unwrap(), e4.reduce_mod(7).unwrap());
        assert_eq!(
            eisenstein_mod(6, 11, 50).unwrap(),
            eisenstein(6, 50).unwrap().reduce_mod(11).unwrap()
        );
    }

    #[test]
    fn delta_matches_eisenstein_identity() {
        let prec = 200;
        let d = delta(prec).unwrap();
        assert_eq!(d.coeffs()[..4], [0, 1, -24, 252].map(BigInt::from));
        let e4 = eisenstein(4, prec).unwrap();
        let e6 = eisenstein(6, prec).unwrap();
        let lhs = e4
            .pow(3)
            .sub(&e6.square())
            .unwrap()
            .div_exact(&BigInt::from(1728))
            .unwrap();
        assert_eq!(lhs, d);
        assert_eq!(delta_mod(7, prec).unwrap(), d.reduce_mod(7).unwrap());
        let many = delta_residues(1155, prec).unwrap();
        for ell in [3u64, 5, 7, 11] {
            let want = d.reduce_mod(ell).unwrap();
            let got: Vec<u64> = many.iter().map(|c| c % ell).collect();
            assert_eq!(got, want.coeffs());
        }
    }

    #[test]
    fn eta_and_partitions() {
        let eta = eta_power(1, 60).unwrap();
        assert_eq!(eta.denom(), 24);
        for n in eta.valuation()..eta.precision() {
            let c = eta.coeff(n).unwrap();
            if !c.is_zero() {
                // (6k ± 1)^2 / 24 structure: n is a square ≡ 1 mod 24.
                let r = (n as f64).sqrt() as i64;
                assert_eq!(r * r, n);
                assert_eq!(n % 24, 1);
            }
        }
        let inv = eta_power(-1, 30).unwrap();
        assert_eq!(inv.coeff_at(4 * 24 - 1, 24).unwrap(), BigInt::from(5));
        assert_eq!(eta_power(0, 10).unwrap().coeff(0).unwrap(), BigInt::from(1));

        let exact = partitions(40);
        for n in 0..=40 {
            assert_eq!(exact[n], BigInt::from(brute_partitions(n)));
        }
        assert_eq!(
            partition_mod(1000, 9).unwrap(),
            vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30]
        );
        assert_eq!(partition_mod(5, 4).unwrap()[4], 0);
        assert_eq!(partition_mod(11, 6).unwrap()[6], 0);
        let m = partition_mod(13, 40).unwrap();
        for n in 0..=40 {
            assert_eq!(BigInt::from(m[n]), &exact[n] % 13);
        }
    }

    #[test]
    fn basis_shapes() {
        assert_eq!(dim_level_one(12), 2);
        assert_eq!(dim_level_one(14), 1);
        assert_eq!(dim_level_one(26), 2);
        assert_eq!(dim_level_one(2), 0);
        let b0 = level_one_basis(0, 5, 10).unwrap();
        assert_eq!(b0.dim(), 1);
        assert_eq!(
            b0.basis[0].coeffs(),
            ModSeries::one(ResidueRing::new(5).unwrap(), 10).coeffs()
        );
        let b12 = level_one_basis(12, 7, 30).unwrap();
        assert_eq!(b12.dim(), 2);
        assert_eq!(b12.basis[1], delta_mod(7, 30).unwrap());
        assert_eq!(
            b12.coordinates(&delta_mod(7, 30).unwrap()).unwrap(),
            vec![0, 1]
        );
        assert!(matches!(
            b12.coordinates(&eisenstein_mod(4, 7, 30).unwrap()),
            Err(Error::NotInSpan { .. })
        ));
        assert_eq!(level_one_basis(26, 13, 30).unwrap().dim(), 2);
        assert!(level_one_basis(12, 3, 30).is_err());
    }

    #[test]
    fn witnesses() {
        let b = level_one_basis(12, 11, 40).unwrap();
        let w = coefficient_full_rank_witness(&b, 2).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|n| n % 2 == 1));
        let b16 = level_one_basis(16, 7, 40).unwrap();
        let w = coefficient_full_rank_witness(&b16, 3).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|n| n % 3 != 0));
        // E6 ≡ 1 mod 7, so M12 mod 7 contains the constant 1.
        let b7 = level_one_basis(12, 7, 40).unwrap();
        assert_eq!(b7.basis[0].order(), Some(0));
        assert!(b7.basis[0].coeffs()[1..].iter().all(|&c| c == 0));
        assert!(matches!(
            coefficient_full_rank_witness(&b7, 2),
            Err(Error::NoWitness(_))
        ));
        assert_eq!(full_rank_witness(b7.cusp_basis(), 7, 2).unwrap(), vec![1]);
        // A constant has no nonzero coefficient at any n ≥ 1.
        let b0 = level_one_basis(0, 7, 40).unwrap();
        assert!(matches!(
            coefficient_full_rank_witness(&b0, 2),
            Err(Error::NoWitness(_))
        ));
    }
}
