//! `U_ℓ` preimages and filtrations mod `ℓ`.
//!
//! Mod `ℓ`, `E_{ℓ−1} ≡ 1`, so the spaces `M_w` with `w` in a fixed class mod
//! `ℓ−1` are nested. For such a class the forms `B_j = Δ^j ψ_j`, with `ψ_j`
//! the monomial `E4^a E6^b` of least weight congruent to `w − 12j`, have
//! leading term `q^j`, and `M_w` mod `ℓ` is spanned by `B_j` for
//! `j < dim M_w`. Both searches below work in this single family.

use crate::algebra::arith::{inv_mod, mul_mod};
use crate::error::{need_precision, Error, Result};
use crate::forms::{delta_mod, dim_level_one, eisenstein_mod, monomial_exponents, sturm_bound};
use crate::qseries::{ModSeries, ResidueRing};

pub const DEFAULT_WEIGHT_CAP: i64 = 4000;

/// Least weight `w ≥ 0` with `w ≡ class (mod ℓ−1)` that carries a form with
/// constant term 1.
fn least_weight(class: i64, ell: u64) -> i64 {
    let r = class.rem_euclid(ell as i64 - 1);
    if r == 2 {
        r + ell as i64 - 1
    } else {
        r
    }
}

/// `B_0, …, B_{count−1}` for the weight class `class mod (ℓ−1)`, to the
/// given precision.
pub fn residue_class_family(
    ell: u64,
    class: i64,
    count: usize,
    precision: i64,
) -> Result<Vec<ModSeries>> {
    check_ell(ell)?;
    let ring = ResidueRing::new(ell)?;
    let mut family = Vec::with_capacity(count);
    if count == 0 {
        return Ok(family);
    }
    let e4 = eisenstein_mod(4, ell, precision)?;
    let e6 = eisenstein_mod(6, ell, precision)?;
    let delta = delta_mod(ell, precision)?;
    let mut psi_cache: Vec<Option<ModSeries>> = vec![None; ell as usize - 1];
    let mut delta_pow = ModSeries::one(ring, precision);
    for j in 0..count {
        let w = least_weight(class - 12 * j as i64, ell);
        let slot = w.rem_euclid(ell as i64 - 1) as usize;
        if psi_cache[slot].is_none() {
            let (a, b) = monomial_exponents(w)[0];
            psi_cache[slot] = Some(e4.pow(a).mul(&e6.pow(b))?);
        }
        let psi = psi_cache[slot].as_ref().expect("cached");
        family.push(delta_pow.mul(psi)?.truncate(precision)?);
        if j + 1 < count {
            delta_pow = delta_pow.mul(&delta)?;
        }
    }
    Ok(family)
}

fn check_ell(ell: u64) -> Result<()> {
    crate::algebra::arith::odd_prime(ell)?;
    if ell < 5 {
        return Err(Error::Unsupported(format!(
            "level-one spaces mod {ell} need ell >= 5"
        )));
    }
    Ok(())
}

/// Coordinates of `f` in the family `B_j`, `j < count`, by forward
/// elimination on leading terms. Errors if a residual survives.
fn family_coordinates(f: &ModSeries, family: &[ModSeries], weight: i64) -> Result<Vec<u64>> {
    let ell = f.ell();
    let mut r = f.clone();
    let mut coords = vec![0u64; family.len()];
    for (j, b) in family.iter().enumerate() {
        let c = r.coeff(j as i64)?;
        if c != 0 {
            coords[j] = c;
            r = r.sub(&b.scale(&c))?;
        }
    }
    if let Some(index) = r.order() {
        return Err(Error::NotInSpan { weight, index });
    }
    debug_assert!(family.iter().all(|b| b.ell() == ell));
    Ok(coords)
}

fn least_weight_with_dim(class: i64, ell: u64, top: usize) -> i64 {
    let mut w = class.rem_euclid(ell as i64 - 1);
    while dim_level_one(w) <= top {
        w += ell as i64 - 1;
    }
    w
}

/// Least weight `k' ≡ k_start (mod ℓ−1)`, `k' ≤ k_start`, in which `f` is
/// realized mod `ℓ`. `f` must lie in `M_{k_start}` mod `ℓ` with a window
/// beyond the Sturm bound of `k_start`.
pub fn filtration(f: &ModSeries, k_start: i64) -> Result<i64> {
    let ell = f.ell();
    check_ell(ell)?;
    if k_start < 0 || k_start % 2 != 0 {
        return Err(Error::Usage(format!(
            "weight {k_start} must be even and non-negative"
        )));
    }
    if f.is_zero() {
        return Err(Error::ZeroForm(ell));
    }
    need_precision(sturm_bound(k_start) + 1, f.precision())?;
    let family = residue_class_family(ell, k_start, dim_level_one(k_start), f.precision())?;
    let coords = family_coordinates(f, &family, k_start)?;
    let top = coords
        .iter()
        .rposition(|&c| c != 0)
        .ok_or(Error::ZeroForm(ell))?;
    Ok(least_weight_with_dim(k_start, ell, top))
}

/// A solution of `U_ℓ^s h ≡ g`.
#[derive(Debug, Clone)]
pub struct Preimage {
    pub series: ModSeries,
    /// Least weight in the searched class where a solution exists.
    pub weight: i64,
    /// Coefficients of `h` in the family `B_j`.
    pub coordinates: Vec<u64>,
    /// Least weight in which `h` itself is realized.
    pub filtration: i64,
}

/// Finds `h` of weight `k' ≡ k (mod ℓ−1)`, `k ≤ k' ≤ cap`, with
/// `U_ℓ^s h ≡ g`, scanning `k'` upward. Free variables of the echelon
/// system are set to zero. `g` must lie in `M_k` mod `ℓ` and have a window
/// of at least `⌊cap/12⌋ + 2`.
pub fn u_ell_preimage(g: &ModSeries, k: i64, steps: u32, cap: i64) -> Result<Preimage> {
    let ell = g.ell();
    check_ell(ell)?;
    if k < 0 || k % 2 != 0 {
        return Err(Error::Usage(format!(
            "weight {k} must be even and non-negative"
        )));
    }
    if steps == 0 {
        let filtration = if g.is_zero() { k } else { filtration(g, k)? };
        let family = residue_class_family(ell, k, dim_level_one(k), g.precision())?;
        let coordinates = family_coordinates(g, &family, k)?;
        return Ok(Preimage {
            series: g.clone(),
            weight: k,
            coordinates,
            filtration,
        });
    }
    // Rows beyond the Sturm bound of every candidate weight.
    let rows = (sturm_bound(cap.max(k)) + 1) as usize;
    need_precision(rows as i64, g.precision())?;
    let scale = (ell as i64)
        .checked_pow(steps)
        .ok_or_else(|| Error::Unsupported("U_ell power overflows".into()))?;
    let precision = scale * rows as i64;
    let target: Vec<u64> = (0..rows as i64)
        .map(|n| g.coeff(n))
        .collect::<Result<_>>()?;

    let ring = ResidueRing::new(ell)?;
    let e4 = eisenstein_mod(4, ell, precision)?;
    let e6 = eisenstein_mod(6, ell, precision)?;
    let delta = delta_mod(ell, precision)?;
    let mut delta_pow = ModSeries::one(ring, precision);
    let mut family: Vec<ModSeries> = Vec::new();
    let mut solver = Echelon::new(ell, target);

    let mut w = k;
    while w <= cap {
        let want = dim_level_one(w);
        while family.len() < want {
            let j = family.len();
            let pw = least_weight(w - 12 * j as i64, ell);
            let (a, b) = monomial_exponents(pw)[0];
            let psi = e4.pow(a).mul(&e6.pow(b))?;
            let bj = delta_pow.mul(&psi)?.truncate(precision)?;
            let mut col = bj.clone();
            for _ in 0..steps {
                col = col.u_operator(ell)?;
            }
            solver.push(
                (0..rows as i64)
                    .map(|n| col.coeff(n))
                    .collect::<Result<_>>()?,
            );
            family.push(bj);
            delta_pow = delta_pow.mul(&delta)?;
        }
        if let Some(x) = solver.solution() {
            let mut h = ModSeries::zero(ring, 1, 0, precision);
            for (c, b) in x.iter().zip(&family) {
                if *c != 0 {
                    h = h.add(&b.scale(c))?;
                }
            }
            let mut check = h.clone();
            for _ in 0..steps {
                check = check.u_operator(ell)?;
            }
            if check.truncate(rows as i64)? != g.truncate(rows as i64)? {
                return Err(Error::Hypothesis(
                    "preimage fails its defining congruence".into(),
                ));
            }
            let top = x.iter().rposition(|&c| c != 0);
            let filtration = match top {
                Some(t) => least_weight_with_dim(k, ell, t),
                None => least_weight(k, ell),
            };
            return Ok(Preimage {
                series: h,
                weight: w,
                coordinates: x,
                filtration,
            });
        }
        w += ell as i64 - 1;
    }
    Err(Error::NoPreimage(cap))
}

/// Incremental column echelon form solving `Σ x_j v_j = target`.
struct Echelon {
    ell: u64,
    /// (pivot row, normalized column, combination of input columns).
    pivots: Vec<(usize, Vec<u64>, Vec<u64>)>,
    residual: Vec<u64>,
    solution: Vec<u64>,
    columns: usize,
}

impl Echelon {
    fn new(ell: u64, target: Vec<u64>) -> Self {
        Echelon {
            ell,
            pivots: Vec::new(),
            residual: target,
            solution: Vec::new(),
            columns: 0,
        }
    }

    fn axpy(&self, y: &mut [u64], a: u64, x: &[u64]) {
        let ell = self.ell;
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = (*yi + ell - mul_mod(a, xi, ell)) % ell;
            }
        }
    }

    fn push(&mut self, mut col: Vec<u64>) {
        let j = self.columns;
        self.columns += 1;
        self.solution.push(0);
        for (_, comb, _) in self.pivots.iter_mut() {
            comb.push(0);
        }
        let mut comb = vec![0u64; self.columns];
        comb[j] = 1;
        for (r, v, c) in &self.pivots {
            let f = col[*r];
            if f != 0 {
                self.axpy(&mut col, f, v);
                self.axpy(&mut comb, f, c);
            }
        }
        let Some(r) = col.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = inv_mod(col[r], self.ell).expect("nonzero pivot");
        for x in col.iter_mut().chain(comb.iter_mut()) {
            *x = mul_mod(*x, inv, self.ell);
        }
        // Fold the new pivot into the target reduction.
        let f = self.residual[r];
        if f != 0 {
            let mut residual = std::mem::take(&mut self.residual);
            self.axpy(&mut residual, f, &col);
            self.residual = residual;
            let mut solution = std::mem::take(&mut self.solution);
            let ell = self.ell;
            for (s, &c) in solution.iter_mut().zip(&comb) {
                *s = (*s + mul_mod(f, c, ell)) % ell;
            }
            self.solution = solution;
        }
        self.pivots.push((r, col, comb));
    }

    fn solution(&self) -> Option<Vec<u64>> {
        self.residual
            .iter()
            .all(|&x| x == 0)
            .then(|| self.solution.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta_mod, eisenstein_mod, level_one_basis};
    use crate::heckeops::theta_kill;

    #[test]
    fn family_matches_basis_span() {
        for ell in [5u64, 7, 11, 13] {
            for k in [12i64, 16, 24, 36] {
                let basis = level_one_basis(k, ell, 80).unwrap();
                let fam = residue_class_family(ell, k, basis.dim(), 80).unwrap();
                for b in &fam {
                    basis.coordinates(b).unwrap();
                }
            }
        }
    }

    #[test]
    fn filtration_examples() {
        assert_eq!(filtration(&delta_mod(5, 60).unwrap(), 12).unwrap(), 12);
        let e4d = eisenstein_mod(4, 7, 60)
            .unwrap()
            .mul(&delta_mod(7, 60).unwrap())
            .unwrap();
        assert_eq!(filtration(&e4d, 16).unwrap(), 16);
        // Δ·E_{ℓ−1} ≡ Δ drops back to weight 12.
        let e6d = eisenstein_mod(6, 7, 60)
            .unwrap()
            .mul(&delta_mod(7, 60).unwrap())
            .unwrap();
        assert_eq!(filtration(&e6d, 18).unwrap(), 12);
        let z = ModSeries::from_residues(7, vec![0; 20]).unwrap();
        assert!(matches!(filtration(&z, 12), Err(Error::ZeroForm(7))));
    }

    #[test]
    fn round_trip_weight_twelve_mod_five() {
        let basis = level_one_basis(12, 5, 400).unwrap();
        for g in &basis.basis {
            let pre = u_ell_preimage(g, 12, 1, 400).unwrap();
            let back = pre.series.u_operator(5).unwrap();
            assert_eq!(back.truncate(30).unwrap(), g.truncate(30).unwrap());
            assert_eq!(pre.weight % 4, 0);
        }
        let g = &basis.basis[1];
        let pre = u_ell_preimage(g, 12, 0, 400).unwrap();
        assert_eq!(&pre.series, g);
    }

    #[test]
    fn theta_kill_preimage_small() {
        let ell = 7;
        let d = delta_mod(ell, 600).unwrap();
        let g1 = theta_kill(&d, 3).unwrap();
        let k = 12 + (ell as i64 + 1) * (ell as i64 - 1) / 2;
        let pre = u_ell_preimage(&g1, k, 1, 600).unwrap();
        let u = pre.series.u_operator(ell).unwrap();
        assert!(!u.is_zero());
        assert!(u.sieve(ell, 3).unwrap().is_zero());
        assert!(pre.filtration <= pre.weight);
    }
}
