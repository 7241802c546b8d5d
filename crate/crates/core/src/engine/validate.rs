//! Re-checking a certificate store against coefficient data.

use serde::Serialize;

use super::certificate::{Claim, CongruenceCertificate, Evidence};
use super::scan::least_nonzero;
use crate::algebra::arith::{factor, is_prime, valuation};
use crate::algebra::Residue;
use crate::criterion::analyze_lpoly;
use crate::error::Result;
use crate::forms::dim_level_one;
use crate::heckeops::HeckeContext;
use crate::qseries::ModSeries;

/// Coefficient data for one form mod `ℓ`, on its integer grid.
#[derive(Debug, Clone)]
pub struct FormData {
    pub name: String,
    pub series: ModSeries,
    /// Weight, when the series is a normalized level-one Hecke eigenform.
    pub eigen_weight: Option<i64>,
}

impl FormData {
    /// Wraps a series, recognising normalized level-one cusp forms in
    /// one-dimensional cusp spaces as eigenforms.
    pub fn new(series: ModSeries) -> Self {
        let name = series
            .descriptor()
            .map_or_else(|| "f".to_string(), |d| d.name.clone());
        let eigen_weight = series.descriptor().and_then(|d| {
            let k = d.weight.as_integer()?;
            let cusp_dim = dim_level_one(k).checked_sub(1)?;
            let normalized =
                series.denom() == 1 && series.coeff(0).ok()? == 0 && series.coeff(1).ok()? == 1;
            (d.level == 1 && k >= 12 && k % 2 == 0 && cusp_dim == 1 && normalized).then_some(k)
        });
        FormData {
            name,
            series: series.to_integer_grid(),
            eigen_weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    /// Position of the certificate in the store.
    pub certificate: usize,
    pub claim: Claim,
    pub reason: String,
    /// Least index contradicting the claim, if any.
    pub witness: Option<i64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checked: usize,
    pub skipped: Vec<usize>,
    pub discrepancies: Vec<Discrepancy>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.discrepancies.is_empty()
    }
}

/// Re-scans every certificate about `data` to the precision available,
/// checks recorded witnesses, and for eigenforms checks that each scanned
/// maximal claim is one the Hecke criterion predicts.
pub fn cross_validate(
    certs: &[CongruenceCertificate],
    data: &FormData,
) -> Result<ValidationReport> {
    let f = &data.series;
    let top = f.precision() - 1;
    let mut report = ValidationReport::default();
    for (i, cert) in certs.iter().enumerate() {
        if cert.form != data.name || cert.ell != f.ell() {
            report.skipped.push(i);
            continue;
        }
        report.checked += 1;
        let mut flag = |reason: String, witness: Option<i64>| {
            report.discrepancies.push(Discrepancy {
                certificate: i,
                claim: cert.claim,
                reason,
                witness,
            })
        };
        let bound = match &cert.evidence {
            Evidence::VerifiedToBound { bound, .. } => (*bound).min(top),
            _ => top,
        };
        if let Some(n) = least_nonzero(f, &cert.claim, bound)? {
            flag(
                format!("nonzero coefficient inside the claim (checked to {bound})"),
                Some(n),
            );
            continue;
        }
        if let Evidence::VerifiedToBound { support, .. } = cert.evidence {
            if support == 0 {
                flag("certificate reports no tested indices".into(), None);
            }
        }
        for w in &cert.witnesses {
            if w.index > top {
                continue;
            }
            if !w.covering.contains(w.index) || !cert.claim.is_subset_of(&w.covering) {
                flag(
                    format!(
                        "witness {} does not lie in a covering of the claim",
                        w.index
                    ),
                    Some(w.index),
                );
            } else if f.coeff(w.index)? == 0 {
                flag(
                    format!("witness coefficient at {} vanishes", w.index),
                    Some(w.index),
                );
            }
        }
        if let (Some(k), Evidence::VerifiedToBound { .. }) = (data.eigen_weight, &cert.evidence) {
            if let Some(reason) = unpredicted(&cert.claim, f, k)? {
                flag(reason, None);
            }
        }
    }
    Ok(report)
}

/// For a normalized level-one eigenform, a maximal progression away from
/// `ℓ` must be `p^{m+1} Z + p^m u` with `p ∤ u` and `m` admitted by the
/// L-polynomial at `p`.
fn unpredicted(claim: &Claim, f: &ModSeries, k: i64) -> Result<Option<String>> {
    let ell = f.ell();
    let (m, beta) = claim.envelope();
    let parts = factor(m);
    if parts.iter().any(|&(p, _)| p == ell) {
        // Congruences at ℓ itself are outside the criterion.
        return Ok(None);
    }
    let [(p, e)] = parts[..] else {
        return Ok(Some(format!("maximal modulus {m} is not a prime power")));
    };
    debug_assert!(is_prime(p));
    let exp = e as u64 - 1;
    if exp == 0 || valuation(beta as i64, p) != Some(exp as u32) {
        return Ok(Some(format!(
            "{claim} is not of the form p^(m+1) Z + p^m u"
        )));
    }
    let lambda = Residue::new(f.coeff(p as i64)? as i64, ell)?;
    let c = Residue::new(
        HeckeContext::level_one(k).nebentypus_factor(p, ell)? as i64,
        ell,
    )?;
    let analysis = analyze_lpoly(p, lambda, c)?;
    Ok((!analysis.admits(exp)).then(|| format!("L-polynomial at {p} does not admit m = {exp}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::certificate::Witness;
    use crate::engine::scan::{scan, ScanConfig};
    use crate::forms::delta_mod;
    use crate::qseries::FormDescriptor;

    fn delta(ell: u64, prec: i64) -> ModSeries {
        delta_mod(ell, prec)
            .unwrap()
            .with_descriptor(FormDescriptor::level_one("delta", 12))
    }

    #[test]
    fn delta_suite_is_clean() {
        for ell in [3u64, 5, 7, 11] {
            let d = delta(ell, 100_001);
            let config = ScanConfig {
                max_modulus: 130,
                bound: 100_000,
                support_min: 25,
            };
            let certs = scan(&d, &config).unwrap();
            assert!(!certs.is_empty());
            let data = FormData::new(d);
            assert_eq!(data.eigen_weight, Some(12));
            let report = cross_validate(&certs, &data).unwrap();
            assert!(report.is_clean(), "ell={ell}: {:?}", report.discrepancies);
            assert_eq!(report.checked, certs.len());
        }
    }

    #[test]
    fn corrupted_certificate_flagged() {
        let d = delta(7, 2001);
        let mut bad = CongruenceCertificate {
            form: "delta".into(),
            ell: 7,
            claim: Claim::progression(64, 0).unwrap(),
            evidence: Evidence::VerifiedToBound {
                bound: 2000,
                support: 31,
            },
            witnesses: vec![],
        };
        let report = cross_validate(std::slice::from_ref(&bad), &FormData::new(d.clone())).unwrap();
        assert_eq!(report.discrepancies.len(), 1);
        let w = report.discrepancies[0].witness.unwrap();
        assert_eq!(
            w,
            (1..)
                .map(|n| 64 * n)
                .find(|&n| d.coeff(n).unwrap() != 0)
                .unwrap()
        );
        bad.claim = Claim::progression(128, 64).unwrap();
        bad.witnesses = vec![Witness {
            covering: Claim::progression(64, 0).unwrap(),
            // 448 = 64·7 and c(Δ; 7n) ≡ 0 (mod 7).
            index: 448,
        }];
        let report = cross_validate(&[bad], &FormData::new(d)).unwrap();
        assert_eq!(report.discrepancies.len(), 1);
        assert!(report.discrepancies[0].reason.contains("vanishes"));
    }

    #[test]
    fn other_forms_skipped() {
        let d = delta(7, 300);
        let cert = CongruenceCertificate {
            form: "e4".into(),
            ell: 7,
            claim: Claim::progression(7, 0).unwrap(),
            evidence: Evidence::VerifiedToBound {
                bound: 200,
                support: 28,
            },
            witnesses: vec![],
        };
        let r = cross_validate(&[cert], &FormData::new(d)).unwrap();
        assert_eq!((r.checked, r.skipped.clone()), (0, vec![0]));
    }
}
