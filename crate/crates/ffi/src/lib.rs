//! C ABI for congruence-lab.
//!
//! Objects cross the boundary as opaque handles created by a constructor
//! function and released with the matching `_free`. Every fallible function
//! returns a [`ClStatus`] and writes its result through an out pointer; the
//! message of the last failure on the calling thread is available from
//! [`cl_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use congruence_lab::criterion::{certify_claim, Subject};
use congruence_lab::engine::{scan, write_certificates, CongruenceCertificate, ScanConfig};
use congruence_lab::forms::{default_basis_precision, NamedForm};
use congruence_lab::p1rep::{generate_submodule, tm_vector};
use congruence_lab::qseries::cache::AnySeries;
use congruence_lab::qseries::ModSeries;
use congruence_lab::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    InvalidArgument = 1,
    Precision = 2,
    Io = 3,
    Hypothesis = 4,
    Computation = 5,
    NullPointer = 6,
    Panic = 7,
}

impl From<&Error> for ClStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Precision { .. } => ClStatus::Precision,
            Error::Usage(_) | Error::NotOddPrime(_) | Error::RamifiedModulus { .. } | Error::DomainMismatch(_) => {
                ClStatus::InvalidArgument
            }
            Error::Io(_) | Error::Format(_) => ClStatus::Io,
            Error::Hypothesis(_) => ClStatus::Hypothesis,
            _ => ClStatus::Computation,
        }
    }
}

/// A power series with coefficients in `F_ℓ`.
pub struct ClSeries(ModSeries);

/// A list of congruence certificates.
pub struct ClCertificates(Vec<CongruenceCertificate>);

/// The progression `modulus·n + residue` enclosing a claim. `gap_prime` is
/// zero for a plain progression, otherwise the claim excludes `n` divisible
/// by it.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClClaim {
    pub modulus: u64,
    pub residue: u64,
    pub gap_prime: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

enum Fail {
    Core(Error),
    Null,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ClStatus::Ok,
        Ok(Err(Fail::Core(e))) => {
            set_error(e.to_string());
            ClStatus::from(&e)
        }
        Ok(Err(Fail::Null)) => {
            set_error("null pointer argument".into());
            ClStatus::NullPointer
        }
        Err(_) => {
            set_error("internal panic".into());
            ClStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::Null);
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail::Core(Error::Usage("string argument is not UTF-8".into())))
}

unsafe fn ref_arg<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null);
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL
/// terminated, truncated to `len`). Returns the buffer size needed for the
/// full message, or 0 if there is none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cl_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// q-expansion of a named level-one form (`"delta"`, `"e4^2*e6"`, ...) mod
/// the prime `ell` to the given precision.
///
/// # Safety
/// `form` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_series_form(
    form: *const c_char,
    ell: u64,
    precision: i64,
    out: *mut *mut ClSeries,
) -> ClStatus {
    guard(|| {
        let named: NamedForm = str_arg(form)?.parse()?;
        let s = named.series_mod(ell, precision)?;
        write_out(out, Box::into_raw(Box::new(ClSeries(s))))
    })
}

/// Reads a series file written by `congruence-lab gen` and reduces it mod
/// `ell`.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_series_read(path: *const c_char, ell: u64, out: *mut *mut ClSeries) -> ClStatus {
    guard(|| {
        let s = AnySeries::read(Path::new(str_arg(path)?))?.to_mod(ell)?;
        write_out(out, Box::into_raw(Box::new(ClSeries(s))))
    })
}

/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_series_precision(s: *const ClSeries, out: *mut i64) -> ClStatus {
    guard(|| write_out(out, ref_arg(s)?.0.precision()))
}

/// Coefficient of `q^n` as a residue in `[0, ℓ)`.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_series_coeff(s: *const ClSeries, n: i64, out: *mut u64) -> ClStatus {
    guard(|| {
        let c = ref_arg(s)?.0.coeff(n)?;
        write_out(out, c)
    })
}

/// # Safety
/// `s` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl_series_free(s: *mut ClSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Maximal progressions with modulus up to `max_modulus` on which the series
/// vanishes for every index up to `bound`, each tested on at least `support`
/// indices.
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_scan(
    s: *const ClSeries,
    max_modulus: u64,
    bound: i64,
    support: u64,
    out: *mut *mut ClCertificates,
) -> ClStatus {
    guard(|| {
        let config = ScanConfig {
            max_modulus,
            bound,
            support_min: support,
        };
        let certs = scan(&ref_arg(s)?.0, &config)?;
        write_out(out, Box::into_raw(Box::new(ClCertificates(certs))))
    })
}

/// Number of certificates, or 0 for a null handle.
///
/// # Safety
/// `c` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cl_certificates_len(c: *const ClCertificates) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_certificates_claim(c: *const ClCertificates, index: usize, out: *mut ClClaim) -> ClStatus {
    guard(|| {
        let cert = ref_arg(c)?
            .0
            .get(index)
            .ok_or_else(|| Error::Usage(format!("certificate index {index} out of range")))?;
        let (modulus, residue) = cert.claim.envelope();
        let gap_prime = cert.claim.gap_prime().unwrap_or(0);
        write_out(
            out,
            ClClaim {
                modulus,
                residue,
                gap_prime,
            },
        )
    })
}

/// The certificates as newline-delimited JSON. Release the string with
/// [`cl_string_free`].
///
/// # Safety
/// `c` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_certificates_json(c: *const ClCertificates, out: *mut *mut c_char) -> ClStatus {
    guard(|| {
        let mut buf = Vec::new();
        write_certificates(&mut buf, &ref_arg(c)?.0)?;
        let s = CString::new(buf).map_err(|e| Error::Format(e.to_string()))?;
        write_out(out, s.into_raw())
    })
}

/// # Safety
/// `c` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl_certificates_free(c: *mut ClCertificates) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Decides by the Hecke criterion whether the named form vanishes mod `ell`
/// on `p^m n + beta` with `p ∤ n`. Writes 1 or 0 to `certified`.
///
/// # Safety
/// `form` must be a NUL-terminated string and `certified` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_certify(
    form: *const c_char,
    ell: u64,
    p: u64,
    m: u64,
    beta: i64,
    certified: *mut i32,
) -> ClStatus {
    guard(|| {
        let named: NamedForm = str_arg(form)?.parse()?;
        let k = named.weight();
        let f = named.series_mod(ell, p as i64 * (default_basis_precision(k) + 1))?;
        let c = certify_claim(&Subject::Form { f: &f, weight: k }, p, m, beta)?;
        write_out(certified, c.certified as i32)
    })
}

/// Dimension of the submodule of the permutation module on `P^1(Z/modulus)`
/// over `F_ℓ(ζ_modulus)` generated by the vector attached to `beta`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cl_rep_dimension(modulus: u64, ell: u64, beta: i64, out: *mut usize) -> ClStatus {
    guard(|| {
        let sub = generate_submodule(&[tm_vector(modulus, beta, ell)?])?;
        write_out(out, sub.dim())
    })
}
