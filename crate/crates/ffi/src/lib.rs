//! C ABI for the spinzero toolkit.
//!
//! Every fallible entry point returns an [`SzStatus`] and writes its result
//! through an out-pointer. On failure the out-pointer is left untouched and a
//! message is available from [`sz_last_error_message`] on the same thread.
//! Objects cross the boundary as opaque handles, each with its own `_free`
//! function; strings handed out by the library are released with
//! [`sz_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use spinzero::analysis::{evaluate, HarmonicCoefficients};
use spinzero::config_space::{canonicalize_points, Vec3};
use spinzero::seam::{seam_mismatch, statistics_classify, Classification};
use spinzero::special::{assoc_legendre, sph_harm, wigner_small_d, HarmonicIndex};
use spinzero::spectrum::{identified_laplacian_eigs, ConstrainedEigenResult};
use spinzero::superselection::{point_state, superselection_check, to_body_k1, AngularState, Verdict};
use spinzero::Error;

/// Result codes. Zero is success; each core error kind has its own code.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzStatus {
    Ok = 0,
    NullArgument = 1,
    Domain = 2,
    UnsupportedBasis = 3,
    DegenerateFrame = 4,
    BasisMismatch = 5,
    DegenerateInput = 6,
    ConstraintRank = 7,
    Parse = 8,
    InvalidUtf8 = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzComplex {
    pub re: f64,
    pub im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SzClassification {
    Symmetric = 0,
    Inadmissible = 1,
    Mixed = 2,
}

/// Seam mismatch at one offset from the equator.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzSeamReport {
    pub epsilon: f64,
    pub mismatch_sup: f64,
    pub mismatch_l2: f64,
    pub derivative_defect: f64,
    pub classification: SzClassification,
}

/// Chart coordinates of an unordered pair.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzCanonicalPoint {
    pub center: [f64; 3],
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
    pub coincident: bool,
}

/// Best global phase under the pi rotation about the first body axis.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzPhaseFit {
    pub phase: SzComplex,
    pub residual: f64,
    /// True when the state picks up a single global phase.
    pub global_phase: bool,
}

/// Opaque harmonic coefficient table.
pub struct SzCoefficients(HarmonicCoefficients);

/// Opaque angular state in a tagged basis.
pub struct SzState(AngularState);

/// Opaque constrained spectrum.
pub struct SzSpectrum(ConstrainedEigenResult);

enum Failure {
    Core(Error),
    Null(&'static str),
    Utf8,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> SzStatus {
    match e {
        Error::Domain(_) => SzStatus::Domain,
        Error::UnsupportedBasis(_) => SzStatus::UnsupportedBasis,
        Error::DegenerateFrame(_) => SzStatus::DegenerateFrame,
        Error::BasisMismatch { .. } => SzStatus::BasisMismatch,
        Error::DegenerateInput(_) => SzStatus::DegenerateInput,
        Error::ConstraintRank(_) => SzStatus::ConstraintRank,
        Error::Parse(_) => SzStatus::Parse,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> SzStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SzStatus::Ok,
        Ok(Err(Failure::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(format!("null pointer passed for `{name}`"));
            SzStatus::NullArgument
        }
        Ok(Err(Failure::Utf8)) => {
            set_last_error("input string is not valid UTF-8".into());
            SzStatus::InvalidUtf8
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("internal panic: {msg}"));
            SzStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(name))
}

unsafe fn write<T>(p: *mut T, name: &'static str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    p.write(value);
    Ok(())
}

unsafe fn read_str<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure::Utf8)
}

unsafe fn read_vec3(p: *const f64, name: &'static str) -> Result<Vec3, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    let s = std::slice::from_raw_parts(p, 3);
    Ok(Vec3::new(s[0], s[1], s[2]))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON output has no interior NULs").into_raw()
}

fn boxed<T>(v: T) -> *mut T {
    Box::into_raw(Box::new(v))
}

/// Message of the most recent failure on this thread, or NULL if none.
///
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from one of the `_to_json` functions and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Orthonormal spherical harmonic `Y_lm(theta, phi)` with the Condon–Shortley phase.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_sph_harm(l: u32, m: i32, theta: f64, phi: f64, out: *mut SzComplex) -> SzStatus {
    guard(|| {
        let y = sph_harm(HarmonicIndex::new(l, m)?, theta, phi)?;
        write(out, "out", SzComplex { re: y.re, im: y.im })
    })
}

/// Associated Legendre function `P_l^m(x)`, unnormalized, Condon–Shortley phase.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_assoc_legendre(l: u32, m: i32, x: f64, out: *mut f64) -> SzStatus {
    guard(|| write(out, "out", assoc_legendre(l, m, x)?))
}

/// Wigner small-d element `d^l_{mu nu}(beta)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_wigner_small_d(l: u32, mu: i32, nu: i32, beta: f64, out: *mut f64) -> SzStatus {
    guard(|| write(out, "out", wigner_small_d(l, mu, nu, beta)?))
}

/// Parses a coefficient table from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_coefficients_from_json(json: *const c_char, out: *mut *mut SzCoefficients) -> SzStatus {
    guard(|| {
        let c = HarmonicCoefficients::from_json(read_str(json, "json")?)?;
        write(out, "out", boxed(SzCoefficients(c)))
    })
}

/// Table holding the single coefficient `a_lm = 1`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_coefficients_single(l: u32, m: i32, out: *mut *mut SzCoefficients) -> SzStatus {
    guard(|| {
        let c = HarmonicCoefficients::single(l, m)?;
        write(out, "out", boxed(SzCoefficients(c)))
    })
}

/// Serializes a coefficient table; free the result with [`sz_string_free`].
///
/// # Safety
/// `coeffs` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_coefficients_to_json(coeffs: *const SzCoefficients, out: *mut *mut c_char) -> SzStatus {
    guard(|| {
        let c = deref(coeffs, "coeffs")?;
        write(out, "out", to_c_string(c.0.to_json()))
    })
}

/// # Safety
/// `coeffs` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sz_coefficients_free(coeffs: *mut SzCoefficients) {
    if !coeffs.is_null() {
        drop(Box::from_raw(coeffs));
    }
}

/// Evaluates `sum a_lm Y_lm(theta, phi)`.
///
/// # Safety
/// `coeffs` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_coefficients_evaluate(
    coeffs: *const SzCoefficients,
    theta: f64,
    phi: f64,
    out: *mut SzComplex,
) -> SzStatus {
    guard(|| {
        let v = evaluate(&deref(coeffs, "coeffs")?.0, theta, phi)?;
        write(out, "out", SzComplex { re: v.re, im: v.im })
    })
}

/// Exchange-statistics class of an expansion.
///
/// # Safety
/// `coeffs` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_statistics_classify(
    coeffs: *const SzCoefficients,
    tol: f64,
    out: *mut SzClassification,
) -> SzStatus {
    guard(|| {
        let class = statistics_classify(&deref(coeffs, "coeffs")?.0, tol)?;
        write(out, "out", class.into())
    })
}

/// Mismatch between the two sides of the equatorial seam at offset `epsilon`.
///
/// # Safety
/// `coeffs` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_seam_mismatch(
    coeffs: *const SzCoefficients,
    epsilon: f64,
    n_phi: usize,
    out: *mut SzSeamReport,
) -> SzStatus {
    guard(|| {
        let r = seam_mismatch(&deref(coeffs, "coeffs")?.0, epsilon, n_phi)?;
        write(
            out,
            "out",
            SzSeamReport {
                epsilon: r.epsilon,
                mismatch_sup: r.mismatch_sup,
                mismatch_l2: r.mismatch_l2,
                derivative_defect: r.derivative_defect,
                classification: r.classification.into(),
            },
        )
    })
}

/// Chart coordinates of the unordered pair `{p, q}`; the result does not
/// depend on the order of the two points.
///
/// # Safety
/// `p` and `q` must each point to three readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_canonicalize(p: *const f64, q: *const f64, out: *mut SzCanonicalPoint) -> SzStatus {
    guard(|| {
        let c = canonicalize_points(read_vec3(p, "p")?, read_vec3(q, "q")?);
        write(
            out,
            "out",
            SzCanonicalPoint {
                center: [c.center.x, c.center.y, c.center.z],
                r: c.r,
                theta: c.theta,
                phi: c.phi,
                coincident: c.coincident,
            },
        )
    })
}

/// Truncated delta state at direction `r0`, in the body-K3 basis.
///
/// # Safety
/// `r0` must point to three readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_point_state(r0: *const f64, l_max: u32, out: *mut *mut SzState) -> SzStatus {
    guard(|| {
        let s = point_state(read_vec3(r0, "r0")?, l_max)?;
        write(out, "out", boxed(SzState(s)))
    })
}

/// Re-expresses a body-K3 state in the body-K1 eigenbasis.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_state_to_body_k1(state: *const SzState, out: *mut *mut SzState) -> SzStatus {
    guard(|| {
        let s = to_body_k1(&deref(state, "state")?.0)?;
        write(out, "out", boxed(SzState(s)))
    })
}

/// Keeps only the components with `l` of the given parity (0 even, 1 odd).
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_state_orbital_part(state: *const SzState, parity: u32, out: *mut *mut SzState) -> SzStatus {
    guard(|| {
        let s = deref(state, "state")?.0.orbital_part(parity % 2);
        write(out, "out", boxed(SzState(s)))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_state_from_json(json: *const c_char, out: *mut *mut SzState) -> SzStatus {
    guard(|| {
        let s = AngularState::from_json(read_str(json, "json")?)?;
        write(out, "out", boxed(SzState(s)))
    })
}

/// Serializes a state; free the result with [`sz_string_free`].
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_state_to_json(state: *const SzState, out: *mut *mut c_char) -> SzStatus {
    guard(|| write(out, "out", to_c_string(deref(state, "state")?.0.to_json())))
}

/// # Safety
/// `state` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sz_state_free(state: *mut SzState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Fits `exp(i pi K1) s = lambda s` for a body-K1 state.
///
/// # Safety
/// `state` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_superselection_check(state: *const SzState, tol: f64, out: *mut SzPhaseFit) -> SzStatus {
    guard(|| {
        let r = superselection_check(&deref(state, "state")?.0, tol)?;
        write(
            out,
            "out",
            SzPhaseFit {
                phase: SzComplex { re: r.best_phase.re, im: r.best_phase.im },
                residual: r.residual,
                global_phase: r.verdict == Verdict::GlobalPhase,
            },
        )
    })
}

/// Laplacian spectrum restricted to expansions that glue across the seam.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_spectrum_compute(
    l_max: u32,
    n_samples: usize,
    cluster_tol: f64,
    out: *mut *mut SzSpectrum,
) -> SzStatus {
    guard(|| {
        let r = identified_laplacian_eigs(l_max, n_samples, cluster_tol)?;
        write(out, "out", boxed(SzSpectrum(r)))
    })
}

/// Number of distinct eigenvalues; 0 for a NULL handle.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sz_spectrum_len(spectrum: *const SzSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.eigenvalues.len())
}

/// Dimension of the admissible subspace; 0 for a NULL handle.
///
/// # Safety
/// `spectrum` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sz_spectrum_null_dimension(spectrum: *const SzSpectrum) -> usize {
    spectrum.as_ref().map_or(0, |s| s.0.null_dimension)
}

/// Eigenvalue and multiplicity of level `index`, ascending.
///
/// # Safety
/// `spectrum` must be a live handle; `value` and `multiplicity` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_spectrum_level(
    spectrum: *const SzSpectrum,
    index: usize,
    value: *mut f64,
    multiplicity: *mut usize,
) -> SzStatus {
    guard(|| {
        let s = &deref(spectrum, "spectrum")?.0;
        let (Some(&v), Some(&m)) = (s.eigenvalues.get(index), s.multiplicities.get(index)) else {
            return Err(Error::Domain(format!("level {index} out of range, {} levels", s.eigenvalues.len())).into());
        };
        if multiplicity.is_null() {
            return Err(Failure::Null("multiplicity"));
        }
        write(value, "value", v)?;
        write(multiplicity, "multiplicity", m)
    })
}

/// Serializes a spectrum; free the result with [`sz_string_free`].
///
/// # Safety
/// `spectrum` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sz_spectrum_to_json(spectrum: *const SzSpectrum, out: *mut *mut c_char) -> SzStatus {
    guard(|| write(out, "out", to_c_string(deref(spectrum, "spectrum")?.0.to_json())))
}

/// # Safety
/// `spectrum` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sz_spectrum_free(spectrum: *mut SzSpectrum) {
    if !spectrum.is_null() {
        drop(Box::from_raw(spectrum));
    }
}

impl From<Classification> for SzClassification {
    fn from(c: Classification) -> Self {
        match c {
            Classification::Symmetric => SzClassification::Symmetric,
            Classification::Inadmissible => SzClassification::Inadmissible,
            Classification::Mixed => SzClassification::Mixed,
        }
    }
}
