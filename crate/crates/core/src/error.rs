use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI exits with code 3 on [`Error::Precision`], 2 on bad input
/// (usage, unreadable files, a modulus that is not an odd prime) and 1 on
/// everything else.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a unit: {0}")]
    NotAUnit(String),

    #[error("modulus {0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("ramified modulus: gcd({ell}, {modulus}) > 1")]
    RamifiedModulus { ell: u64, modulus: u64 },

    #[error("insufficient precision: need {needed}, have {available}")]
    Precision { needed: i64, available: i64 },

    #[error("coefficient domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("degenerate basis: weight {weight} mod {ell} has rank {rank} < {dim}")]
    DegenerateBasis {
        weight: i64,
        ell: u64,
        rank: usize,
        dim: usize,
    },

    #[error("form is not in the span of the weight {weight} basis (first residual at q^{index})")]
    NotInSpan { weight: i64, index: i64 },

    #[error("semisimplicity failure: repeated factor {factor} of the T_{p} minimal polynomial")]
    Semisimplicity { p: u64, factor: String },

    #[error("ramified Hecke datum: chi(p) p^(k-1) vanishes mod {0}")]
    RamifiedHecke(u64),

    #[error("no full-rank witness below precision {0}")]
    NoWitness(i64),

    #[error("no U_ell preimage below weight cap {0}")]
    NoPreimage(i64),

    #[error("form vanishes identically mod {0}")]
    ZeroForm(u64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Usage(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

pub(crate) fn need_precision(needed: i64, available: i64) -> Result<()> {
    if available < needed {
        Err(Error::Precision { needed, available })
    } else {
        Ok(())
    }
}
