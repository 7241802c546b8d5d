//! The Hecke-side criterion: when a `T_p`-eigenform mod `ℓ` vanishes on
//! `p^m(Z∖pZ)`, the maximal congruences of `Δ`, decomposition of forms
//! into eigencomponents, and `U_ℓ` preimages with their filtrations.
//!
//! For a `T_p`-eigenform `g` with eigenvalue `λ` and `c = χ(p)p^{k−1}`,
//! `c(g; p^m n) = u_m c(g; n)` for `p ∤ n`, with `u_0 = 1`, `u_1 = λ`,
//! `u_{j+1} = λu_j − c u_{j−1}`. Writing `1 − λX + cX² = (1 − αX)(1 − βX)`,
//! `u_m` vanishes iff `α^{m+1} = β^{m+1}` (distinct roots) or `ℓ | m+1`
//! (double root).

mod eigen;
mod lpoly;
mod preimage;

use std::fmt;

pub use eigen::{eigen_decompose, hecke_matrix, Decomposition, EigenComponent};
pub use lpoly::{
    analyze_lpoly, analyze_lpoly_ext, LPolyAnalysis, LPolyCase, LPolyRecord, QuadElement,
};
pub use preimage::{
    filtration, residue_class_family, u_ell_preimage, Preimage, DEFAULT_WEIGHT_CAP,
};

use crate::algebra::arith::{self, gcd, kronecker, pow_mod};
use crate::algebra::{ExtElement, Residue};
use crate::engine::certificate::{Claim, CongruenceCertificate, Evidence};
use crate::error::{Error, Result};
use crate::forms;
use crate::heckeops::HeckeContext;
use crate::qseries::ModSeries;

/// True when the gap congruence on `p^m(Z∖pZ)` forces the form to vanish
/// mod `ℓ`: `gcd(ℓ(ℓ−1), m+1) = 1` and `χ(p)p^{k−1}` is a nonsquare mod `ℓ`.
pub fn impossibility(m: u64, ell: u64, k: i64, chi_p: i64, p: u64) -> bool {
    if gcd(ell * (ell - 1), m + 1) != 1 {
        return false;
    }
    let c = arith::rem_euclid(chi_p, ell) as u128
        * pow_mod(p % ell, (k - 1).max(0) as u64, ell) as u128;
    kronecker((c % ell as u128) as i64, ell as i64) == -1
}

/// What is known about the form being certified.
#[derive(Debug, Clone)]
pub enum Subject<'a> {
    /// A single `T_p`-eigenform with eigenvalue `λ` and `c = χ(p)p^{k−1}`.
    Eigen {
        form: String,
        lambda: Residue,
        c: Residue,
    },
    /// A level-one form of weight `k`, decomposed under `T_p`.
    Form { f: &'a ModSeries, weight: i64 },
}

/// Outcome of [`certify_claim`].
#[derive(Debug, Clone)]
pub struct Certification {
    pub certified: bool,
    pub analyses: Vec<LPolyAnalysis>,
    /// Components whose `q^n` coefficients vanish for all `n ≥ 1`.
    pub constant_components: usize,
    pub certificate: CongruenceCertificate,
}

/// Decides the gap claim `c(f; p^m n + β) ≡ 0` for `p ∤ n`. Only `β ≡ 0
/// (mod p^m)` is in reach of the criterion.
pub fn certify_claim(subject: &Subject<'_>, p: u64, m: u64, beta: i64) -> Result<Certification> {
    if !arith::is_prime(p) {
        return Err(Error::Usage(format!("{p} is not prime")));
    }
    if m == 0 {
        return Err(Error::Usage("gap exponent m must be positive".into()));
    }
    let stride = p
        .checked_pow(m as u32)
        .ok_or_else(|| Error::Unsupported(format!("{p}^{m} overflows")))?;
    if beta.rem_euclid(stride as i64) != 0 {
        return Err(Error::Unsupported(format!(
            "the Hecke criterion covers offset 0 mod {stride} only (got {beta})"
        )));
    }
    let (form, ell, analyses, constant_components) = match subject {
        Subject::Eigen { form, lambda, c } => {
            if lambda.modulus() == p {
                return Err(Error::Usage(format!("p = {p} equals ell")));
            }
            (
                form.clone(),
                lambda.modulus(),
                vec![analyze_lpoly(p, *lambda, *c)?],
                0,
            )
        }
        Subject::Form { f, weight } => {
            let dec = eigen_decompose(f, p, *weight)?;
            let c = HeckeContext::level_one(*weight).nebentypus_factor(p, f.ell())?;
            let mut analyses = Vec::new();
            let mut constant = 0;
            for comp in &dec.components {
                if comp.is_constant() {
                    constant += 1;
                    continue;
                }
                let ck = ExtElement::from_int(comp.field(), c as i64);
                analyses.push(analyze_lpoly_ext(p, &comp.eigenvalue, &ck)?);
            }
            let name = f
                .descriptor()
                .map_or_else(|| "f".to_string(), |d| d.name.clone());
            (name, f.ell(), analyses, constant)
        }
    };
    let certified = analyses.iter().all(|a| a.admits(m));
    let certificate = CongruenceCertificate {
        form,
        ell,
        claim: Claim::gap(stride, 0, p)?,
        evidence: Evidence::CertifiedHecke {
            p,
            m,
            constant_components,
            components: analyses.iter().map(LPolyAnalysis::record).collect(),
        },
        witnesses: Vec::new(),
    };
    Ok(Certification {
        certified,
        analyses,
        constant_components,
        certificate,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// `p ≡ −1 (mod ℓ)` with `λ_p ≡ 0`, giving `m = 1`.
    Treneer,
    /// `p ≡ 1 (mod ℓ)` with `λ_p ≡ 2` and `χ(p)p^{k−1} ≡ 1`, giving `m = ℓ−1`.
    Serre,
}

impl std::str::FromStr for SearchMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "treneer" => Ok(SearchMode::Treneer),
            "serre" => Ok(SearchMode::Serre),
            _ => Err(Error::Usage(format!("unknown search mode {s:?}"))),
        }
    }
}

/// Primes `p ≤ p_max` of the requested shape for the normalized eigenform
/// `f` of weight `k`, each with its certified gap congruence.
pub fn prime_search(
    f: &ModSeries,
    k: i64,
    mode: SearchMode,
    p_max: u64,
) -> Result<Vec<(u64, Certification)>> {
    let ell = f.ell();
    crate::error::need_precision(p_max as i64 + 1, f.precision())?;
    let ctx = HeckeContext::level_one(k);
    let name = f
        .descriptor()
        .map_or_else(|| "f".to_string(), |d| d.name.clone());
    let mut out = Vec::new();
    for p in 2..=p_max {
        if !arith::is_prime(p) || p == ell {
            continue;
        }
        let lambda = f.coeff(p as i64)?;
        let c = ctx.nebentypus_factor(p, ell)?;
        let m = match mode {
            SearchMode::Treneer if (p + 1) % ell == 0 && lambda == 0 => 1,
            SearchMode::Serre if p % ell == 1 && lambda == 2 % ell && c == 1 => ell - 1,
            _ => continue,
        };
        let subject = Subject::Eigen {
            form: name.clone(),
            lambda: Residue::new(lambda as i64, ell)?,
            c: Residue::new(c as i64, ell)?,
        };
        let cert = certify_claim(&subject, p, m, 0)?;
        if cert.certified {
            out.push((p, cert));
        }
    }
    Ok(out)
}

/// One cell of the table of maximal `U_p`-type congruences of `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableCell {
    /// `p ≠ ℓ`: the first admissible exponents, each meaning `p^m Z×_p`.
    Gap {
        p: u64,
        exponents: Vec<u64>,
        analysis: LPolyAnalysis,
    },
    /// `p = ℓ`: `c(Δ; ℓn)` vanishes for `n ≤ bound`.
    Full { p: u64, bound: i64 },
    /// `p = ℓ` with a nonzero `c(Δ; ℓn)`.
    Empty { p: u64, witness: i64 },
}

impl fmt::Display for TableCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableCell::Gap { p, exponents, .. } => {
                let parts: Vec<String> = exponents.iter().map(|m| format!("{p}^{m}")).collect();
                write!(f, "{}", parts.join(", "))
            }
            TableCell::Full { p, .. } => write!(f, "{p}Z"),
            TableCell::Empty { .. } => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub ell: u64,
    pub cells: Vec<TableCell>,
}

/// Maximal congruences of `Δ` mod each `ℓ` along each `p`. Cells with
/// `p ≠ ℓ` come from the L-polynomial; diagonal cells are scanned on
/// `c(Δ; ℓn)` for `1 ≤ n ≤ verify_bound`.
pub fn delta_table(
    ells: &[u64],
    primes: &[u64],
    count: usize,
    verify_bound: i64,
) -> Result<Vec<TableRow>> {
    for &ell in ells {
        arith::odd_prime(ell)?;
    }
    for &p in primes {
        if !arith::is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
    }
    if verify_bound < 1 {
        return Err(Error::Usage("verify bound must be positive".into()));
    }
    let max_p = primes.iter().copied().max().unwrap_or(2) as i64;
    let diag_need = ells
        .iter()
        .filter(|l| primes.contains(l))
        .map(|&l| l as i64 * verify_bound + 1)
        .max()
        .unwrap_or(0);
    let precision = (max_p + 1).max(diag_need);
    // One pass modulo the product of all ℓ when it fits.
    let residues: Vec<(u64, Vec<u64>)> =
        match ells.iter().try_fold(1u64, |acc, &l| acc.checked_mul(l)) {
            Some(prod) if prod < (1 << 31) => {
                let r = forms::delta_residues(prod, precision)?;
                vec![(prod, r)]
            }
            _ => ells
                .iter()
                .map(|&l| Ok((l, forms::delta_residues(l, precision)?)))
                .collect::<Result<_>>()?,
        };
    let tau_mod = |ell: u64, n: usize| -> u64 {
        let (m, r) = residues
            .iter()
            .find(|(m, _)| m % ell == 0)
            .expect("modulus present");
        debug_assert_eq!(m % ell, 0);
        r[n] % ell
    };
    let ctx = HeckeContext::level_one(12);
    let mut rows = Vec::new();
    for &ell in ells {
        let mut cells = Vec::new();
        for &p in primes {
            if p == ell {
                let witness =
                    (1..=verify_bound).find(|&n| tau_mod(ell, (ell as i64 * n) as usize) != 0);
                cells.push(match witness {
                    Some(n) => TableCell::Empty {
                        p,
                        witness: ell as i64 * n,
                    },
                    None => TableCell::Full {
                        p,
                        bound: verify_bound,
                    },
                });
                continue;
            }
            let lambda = Residue::new(tau_mod(ell, p as usize) as i64, ell)?;
            let c = Residue::new(ctx.nebentypus_factor(p, ell)? as i64, ell)?;
            let analysis = analyze_lpoly(p, lambda, c)?;
            cells.push(TableCell::Gap {
                p,
                exponents: analysis.exponents(count),
                analysis,
            });
        }
        rows.push(TableRow { ell, cells });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::delta_mod;

    fn cell(rows: &[TableRow], ell: u64, p: u64) -> String {
        let row = rows.iter().find(|r| r.ell == ell).unwrap();
        let i = [2u64, 3, 5, 7, 11].iter().position(|&q| q == p).unwrap();
        row.cells[i].to_string()
    }

    #[test]
    fn table_grid() {
        let rows = delta_table(&[3, 5, 7, 11], &[2, 3, 5, 7, 11], 2, 2000).unwrap();
        let want = [
            (3, ["2^1, 2^3", "3Z", "5^1, 5^3", "7^2, 7^5", "11^1, 11^3"]),
            (5, ["2^3, 2^7", "3^3, 3^7", "5Z", "7^3, 7^7", "11^4, 11^9"]),
            (
                7,
                ["2^6, 2^13", "3^1, 3^3", "5^1, 5^3", "7Z", "11^6, 11^13"],
            ),
            (11, ["2^3, 2^7", "3^10, 3^21", "5^4, 5^9", "7^9, 7^19", ""]),
        ];
        for (ell, cells) in want {
            for (p, w) in [2u64, 3, 5, 7, 11].iter().zip(cells) {
                assert_eq!(cell(&rows, ell, *p), w, "ell={ell} p={p}");
            }
        }
    }

    #[test]
    fn impossibility_examples() {
        assert!(impossibility(2, 5, 12, 1, 2));
        assert!(!impossibility(3, 5, 12, 1, 2));
    }

    #[test]
    fn certify_eigen_examples() {
        let tau = crate::forms::delta(20).unwrap();
        let subj = |ell: u64, p: u64| Subject::Eigen {
            form: "delta".into(),
            lambda: Residue::new(
                tau.reduce_mod(ell).unwrap().coeff(p as i64).unwrap() as i64,
                ell,
            )
            .unwrap(),
            c: Residue::new(pow_mod(p, 11, ell) as i64, ell).unwrap(),
        };
        assert!(certify_claim(&subj(3, 5), 5, 1, 0).unwrap().certified);
        let c = certify_claim(&subj(11, 2), 2, 3, 0).unwrap();
        assert!(c.certified);
        assert_eq!(c.analyses[0].case.name(), "irreducible");
        assert_eq!(c.analyses[0].period, 4);
        assert!(!certify_claim(&subj(7, 2), 2, 5, 0).unwrap().certified);
        assert!(matches!(
            certify_claim(&subj(7, 2), 2, 6, 3),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn certify_form_matches_eigen() {
        let d = delta_mod(7, 400)
            .unwrap()
            .with_descriptor(crate::qseries::FormDescriptor::level_one("delta", 12));
        let c = certify_claim(&Subject::Form { f: &d, weight: 12 }, 2, 6, 0).unwrap();
        assert!(c.certified);
        assert_eq!(c.certificate.form, "delta");
        assert!(
            !certify_claim(&Subject::Form { f: &d, weight: 12 }, 2, 5, 0)
                .unwrap()
                .certified
        );
    }

    #[test]
    fn treneer_and_serre() {
        let d = delta_mod(7, 600).unwrap();
        let hits = prime_search(&d, 12, SearchMode::Treneer, 500).unwrap();
        let want: Vec<u64> = (2..=500u64)
            .filter(|&p| arith::is_prime(p) && (p + 1) % 7 == 0 && d.coeff(p as i64).unwrap() == 0)
            .collect();
        assert_eq!(hits.iter().map(|h| h.0).collect::<Vec<_>>(), want);
        for (_, c) in prime_search(&d, 12, SearchMode::Serre, 500).unwrap() {
            assert_eq!(c.analyses[0].case.name(), "repeated");
            assert_eq!(c.analyses[0].period, 7);
        }
    }
}
