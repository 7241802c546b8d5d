//! Empirical search for progressions on which a series vanishes mod `ℓ`.

use rayon::prelude::*;

use super::certificate::{Claim, CongruenceCertificate, Evidence, Witness};
use crate::algebra::arith::prime_divisors;
use crate::error::{need_precision, Error, Result};
use crate::qseries::ModSeries;

/// Default minimum number of tested indices per progression.
pub const DEFAULT_SUPPORT: u64 = 25;

/// The lattice `stride·k + offset` of raw integer-grid indices carrying the
/// coefficients of a series with denominator `stride`. Scanning runs in the
/// coordinate `k`; for `η`-quotients `k` is the index `n − r/24` of the
/// product expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanGrid {
    pub stride: u64,
    pub offset: i64,
}

impl ScanGrid {
    pub const INTEGRAL: ScanGrid = ScanGrid {
        stride: 1,
        offset: 0,
    };

    /// The grid of a series with denominator `N` and valuation `v`:
    /// `N·k + v`, or the plain integers when `N = 1`.
    pub fn of(f: &ModSeries) -> Self {
        if f.denom() == 1 {
            ScanGrid::INTEGRAL
        } else {
            ScanGrid {
                stride: f.denom(),
                offset: f.valuation(),
            }
        }
    }

    pub fn to_raw(&self, k: i64) -> i64 {
        self.stride as i64 * k + self.offset
    }

    /// `k` for a raw index on the grid.
    pub fn from_raw(&self, n: i64) -> Option<i64> {
        let t = n - self.offset;
        (t.rem_euclid(self.stride as i64) == 0).then(|| t / self.stride as i64)
    }

    /// A progression in `k` as a progression of raw indices.
    pub fn claim_to_raw(&self, modulus: u64, residue: u64) -> Result<Claim> {
        Claim::progression(self.stride * modulus, self.to_raw(residue as i64))
    }

    /// A raw progression contained in the grid, in `k` coordinates.
    pub fn claim_from_raw(&self, claim: &Claim) -> Option<(u64, u64)> {
        let (m, r) = claim.envelope();
        if m % self.stride != 0 {
            return None;
        }
        let k = self.from_raw(r as i64)?;
        let mk = m / self.stride;
        Some((mk, k.rem_euclid(mk as i64) as u64))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScanConfig {
    pub max_modulus: u64,
    /// Largest raw index tested.
    pub bound: i64,
    pub support_min: u64,
}

/// Indices `k ≥ 0` on the grid, up to the bound, whose coefficient is
/// nonzero, ascending.
fn nonzero_indices(f: &ModSeries, grid: ScanGrid, bound: i64) -> Result<(i64, Vec<i64>)> {
    let k_max = (bound - grid.offset).div_euclid(grid.stride as i64);
    let mut out = Vec::new();
    for k in 0..=k_max {
        if f.coeff(grid.to_raw(k))? != 0 {
            out.push(k);
        }
    }
    Ok((k_max, out))
}

/// Least raw index `≤ bound` in `claim` with a nonzero coefficient.
pub fn least_nonzero(f: &ModSeries, claim: &Claim, bound: i64) -> Result<Option<i64>> {
    need_precision(bound + 1, f.precision())?;
    let lo = f.valuation().max(0);
    for n in claim.members(bound) {
        if n >= lo && f.coeff(n)? != 0 {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// All maximal progressions `M k + β` (`M ≤ max_modulus`, in grid
/// coordinates) on which `f` vanishes for every tested index up to the
/// bound, with at least `support_min` tested indices. Claims are reported in
/// raw integer-grid coordinates.
pub fn scan(f: &ModSeries, config: &ScanConfig) -> Result<Vec<CongruenceCertificate>> {
    scan_on(f, ScanGrid::of(f), config)
}

pub fn scan_on(
    f: &ModSeries,
    grid: ScanGrid,
    config: &ScanConfig,
) -> Result<Vec<CongruenceCertificate>> {
    if config.max_modulus == 0 {
        return Err(Error::Usage("max modulus must be positive".into()));
    }
    if config.support_min == 0 {
        return Err(Error::Usage("support threshold must be positive".into()));
    }
    let f = f.to_integer_grid();
    need_precision(config.bound + 1, f.precision())?;
    let (k_max, nonzero) = nonzero_indices(&f, grid, config.bound)?;
    if nonzero.is_empty() || k_max < 0 {
        return Ok(Vec::new());
    }
    let count = |m: u64, b: u64| -> u64 {
        if b as i64 > k_max {
            0
        } else {
            ((k_max - b as i64) / m as i64 + 1) as u64
        }
    };
    let mut hits: Vec<(u64, u64)> = (1..=config.max_modulus)
        .into_par_iter()
        .flat_map_iter(|m| {
            let mut bad = vec![false; m as usize];
            let mut left = m;
            for &k in &nonzero {
                let r = (k % m as i64) as usize;
                if !bad[r] {
                    bad[r] = true;
                    left -= 1;
                    if left == 0 {
                        break;
                    }
                }
            }
            (0..m)
                .filter(|&b| !bad[b as usize] && count(m, b) >= config.support_min)
                .map(move |b| (m, b))
                .collect::<Vec<_>>()
        })
        .collect();
    hits.sort();
    let found: std::collections::HashSet<(u64, u64)> = hits.iter().copied().collect();
    let form = f
        .descriptor()
        .map_or_else(|| "f".to_string(), |d| d.name.clone());
    let mut out = Vec::new();
    for &(m, b) in &hits {
        let covered = crate::algebra::arith::divisors(m)
            .into_iter()
            .any(|d| d < m && found.contains(&(d, b % d)));
        if covered {
            continue;
        }
        let mut witnesses = Vec::new();
        for q in prime_divisors(m) {
            let (mq, bq) = (m / q, b % (m / q));
            if let Some(&k) = nonzero
                .iter()
                .find(|&&k| k.rem_euclid(mq as i64) as u64 == bq)
            {
                witnesses.push(Witness {
                    covering: grid.claim_to_raw(mq, bq)?,
                    index: grid.to_raw(k),
                });
            }
        }
        out.push(CongruenceCertificate {
            form: form.clone(),
            ell: f.ell(),
            claim: grid.claim_to_raw(m, b)?,
            evidence: Evidence::VerifiedToBound {
                bound: config.bound,
                support: count(m, b),
            },
            witnesses,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{delta_mod, eta_power};

    fn config(max_modulus: u64, bound: i64) -> ScanConfig {
        ScanConfig {
            max_modulus,
            bound,
            support_min: DEFAULT_SUPPORT,
        }
    }

    #[test]
    fn delta_mod_seven() {
        let d = delta_mod(7, 20_001).unwrap();
        let certs = scan(&d, &config(140, 20_000)).unwrap();
        let claims: Vec<Claim> = certs.iter().map(|c| c.claim).collect();
        assert!(claims.contains(&Claim::progression(7, 0).unwrap()));
        assert!(claims.contains(&Claim::progression(128, 64).unwrap()));
        assert!(claims.contains(&Claim::progression(9, 3).unwrap()));
        assert!(claims.contains(&Claim::progression(9, 6).unwrap()));
        // Nothing strictly contains 128n + 64.
        let c = certs
            .iter()
            .find(|c| c.claim == Claim::progression(128, 64).unwrap())
            .unwrap();
        assert_eq!(c.witnesses.len(), 1);
        assert_eq!(c.witnesses[0].covering, Claim::progression(64, 0).unwrap());
        assert!(d.coeff(c.witnesses[0].index).unwrap() != 0);
        // Soundness.
        for c in &certs {
            assert_eq!(least_nonzero(&d, &c.claim, 20_000).unwrap(), None);
        }
    }

    #[test]
    fn partition_grid() {
        let e = eta_power(-1, 3000).unwrap().reduce_mod(5).unwrap();
        let grid = ScanGrid::of(&e);
        assert_eq!(
            grid,
            ScanGrid {
                stride: 24,
                offset: -1
            }
        );
        let bound = grid.to_raw(2500);
        let certs = scan(&e, &config(10, bound)).unwrap();
        let k: Vec<(u64, u64)> = certs
            .iter()
            .filter_map(|c| grid.claim_from_raw(&c.claim))
            .collect();
        assert_eq!(k, vec![(5, 4)]);
        assert_eq!(certs[0].claim, Claim::progression(120, 95).unwrap());
    }

    #[test]
    fn no_congruence() {
        let d = delta_mod(13, 5001).unwrap();
        let certs = scan(&d, &config(20, 5000)).unwrap();
        assert!(
            certs.iter().all(|c| c.claim.envelope().0 % 13 == 0),
            "{certs:?}"
        );
    }

    #[test]
    fn zero_form_guard() {
        let z = ModSeries::from_residues(7, vec![0; 500]).unwrap();
        assert!(scan(&z, &config(10, 400)).unwrap().is_empty());
        let d = delta_mod(7, 100).unwrap();
        assert!(matches!(
            scan(&d, &config(10, 400)),
            Err(Error::Precision { .. })
        ));
    }
}
