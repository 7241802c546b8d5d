//! Congruence scanning, derivation rules, claim factorization and
//! cross-validation of certificates.

pub mod certificate;
pub mod rules;
pub mod scan;
pub mod validate;

pub use certificate::{
    read_certificates, write_certificates, Claim, CongruenceCertificate, Evidence, Witness,
};
pub use rules::{
    factor_claim, recheck, recombine, rule_gap, rule_remove_prime, rule_shrink,
    square_class_closure, ClaimFactors, PrimeComponent,
};
pub use scan::{least_nonzero, scan, scan_on, ScanConfig, ScanGrid, DEFAULT_SUPPORT};
pub use validate::{cross_validate, Discrepancy, FormData, ValidationReport};
