//! C ABI over `homogeneous-finsler`.
//!
//! Every function returns an [`HfStatus`]; on failure the message is
//! available from [`hf_last_error_message`] on the same thread. Spaces are
//! opaque [`HfSpace`] handles created from JSON documents and released with
//! [`hf_space_free`]. Vectors are passed as `(pointer, length)` pairs of
//! `double`; `𝔪`-vectors have length `hf_space_m_dim`, `𝔤`-vectors length
//! `hf_space_dim`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use homogeneous_finsler::document::{load_str, parse_spec, ResolvedOptions};
use homogeneous_finsler::oracle::{g_oracle, OracleScheme};
use homogeneous_finsler::{AlgebraVector, Error, HomogeneousSpace, ResidualSource};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    DimensionMismatch = 3,
    Domain = 4,
    Singularity = 5,
    Unsupported = 6,
    Io = 7,
    Parse = 8,
    Panic = 9,
}

/// Source of fundamental-tensor values for geodesic decisions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HfSource {
    /// The space's default: closed form for exponential metrics, oracle otherwise.
    Default = 0,
    ClosedForm = 1,
    Oracle = 2,
    Riemannian = 3,
}

/// A validated homogeneous space with its resolved options.
pub struct HfSpace {
    space: HomogeneousSpace,
    options: ResolvedOptions,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> HfStatus {
    match e {
        Error::DimensionMismatch { .. } => HfStatus::DimensionMismatch,
        Error::Input(_) => HfStatus::InvalidInput,
        Error::Domain(_) => HfStatus::Domain,
        Error::Singularity(_) => HfStatus::Singularity,
        Error::Unsupported(_) => HfStatus::Unsupported,
        Error::Io { .. } => HfStatus::Io,
        Error::Parse(_) => HfStatus::Parse,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

/// Runs `f`, converting errors and panics into a status and a message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> HfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HfStatus::Ok
        }
        Ok(Err(Fail::Null(what))) => {
            set_error(&format!("null pointer: {what}"));
            HfStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            set_error(&format!("internal panic: {msg}"));
            HfStatus::Panic
        }
    }
}

unsafe fn space_ref<'a>(space: *const HfSpace) -> Result<&'a HfSpace, Fail> {
    space.as_ref().ok_or(Fail::Null("space"))
}

unsafe fn slice<'a>(ptr: *const f64, len: usize, what: &'static str) -> Result<&'a [f64], Fail> {
    if ptr.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn m_vector<'a>(
    s: &HfSpace,
    ptr: *const f64,
    len: usize,
    what: &'static str,
) -> Result<&'a [f64], Fail> {
    let m = s.space.metric().dim();
    if len != m {
        return Err(Fail::Core(Error::DimensionMismatch {
            expected: m,
            got: len,
        }));
    }
    slice(ptr, len, what)
}

unsafe fn g_vector(s: &HfSpace, ptr: *const f64, len: usize) -> Result<AlgebraVector, Fail> {
    let n = s.space.dim();
    if len != n {
        return Err(Fail::Core(Error::DimensionMismatch {
            expected: n,
            got: len,
        }));
    }
    Ok(AlgebraVector::new(slice(ptr, len, "y")?.to_vec())?)
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &'static str) -> Result<&'a str, Fail> {
    if ptr.is_null() {
        return Err(Fail::Null(what));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| Fail::Core(Error::Parse(format!("{what}: not UTF-8: {e}"))))
}

fn source_of(s: &HfSpace, source: HfSource) -> ResidualSource {
    match source {
        HfSource::Default => s.space.default_source(),
        HfSource::ClosedForm => ResidualSource::ClosedForm,
        HfSource::Oracle => ResidualSource::Oracle,
        HfSource::Riemannian => ResidualSource::Riemannian,
    }
}

fn boxed(space: HomogeneousSpace, options: ResolvedOptions) -> *mut HfSpace {
    Box::into_raw(Box::new(HfSpace { space, options }))
}

/// Parses and validates a JSON document. Environment overrides apply.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_space_from_json(
    json: *const c_char,
    out: *mut *mut HfSpace,
) -> HfStatus {
    guard(|| {
        let text = c_str(json, "json")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let (_, space, options) = load_str(text, |k| std::env::var(k).ok())?;
        write(out, boxed(space, options), "out")
    })
}

/// Reads, parses and validates a JSON document file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hf_space_from_file(
    path: *const c_char,
    out: *mut *mut HfSpace,
) -> HfStatus {
    guard(|| {
        let path = c_str(path, "path")?;
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let loaded = parse_spec(path)?;
        write(out, boxed(loaded.space, loaded.options), "out")
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `space` must come from `hf_space_from_*` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hf_space_free(space: *mut HfSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Dimension of `𝔤`, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_space_dim(space: *const HfSpace) -> usize {
    space.as_ref().map_or(0, |s| s.space.dim())
}

/// Dimension of `𝔪`, or 0 for a null handle.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hf_space_m_dim(space: *const HfSpace) -> usize {
    space.as_ref().map_or(0, |s| s.space.split().m_dim())
}

/// `F(y)` for `y ∈ 𝔪`.
///
/// # Safety
/// `y` must point to `len` doubles and `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hf_finsler_norm(
    space: *const HfSpace,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> HfStatus {
    guard(|| {
        let s = space_ref(space)?;
        let y = m_vector(s, y, len, "y")?;
        write(out, s.space.metric().finsler_norm(y)?, "out")
    })
}

/// `g_y(u, v)` from the oracle. `step <= 0` selects hyper-dual numbers,
/// otherwise the central-difference stencil with that step.
///
/// # Safety
/// `y`, `u`, `v` must each point to `len` doubles and `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hf_g_oracle(
    space: *const HfSpace,
    y: *const f64,
    u: *const f64,
    v: *const f64,
    len: usize,
    step: f64,
    out: *mut f64,
) -> HfStatus {
    guard(|| {
        let s = space_ref(space)?;
        let (y, u, v) = (
            m_vector(s, y, len, "y")?,
            m_vector(s, u, len, "u")?,
            m_vector(s, v, len, "v")?,
        );
        let scheme = if step > 0.0 {
            OracleScheme::central(Some(step))?
        } else {
            OracleScheme::DualNumber
        };
        write(out, g_oracle(s.space.metric(), y, u, v, scheme)?, "out")
    })
}

/// `g_y(u, v)` from the metric's printed closed form.
///
/// # Safety
/// `y`, `u`, `v` must each point to `len` doubles and `out` to one.
#[no_mangle]
pub unsafe extern "C" fn hf_g_closed(
    space: *const HfSpace,
    y: *const f64,
    u: *const f64,
    v: *const f64,
    len: usize,
    out: *mut f64,
) -> HfStatus {
    guard(|| {
        let s = space_ref(space)?;
        let (y, u, v) = (
            m_vector(s, y, len, "y")?,
            m_vector(s, u, len, "u")?,
            m_vector(s, v, len, "v")?,
        );
        write(out, s.space.metric().g_closed(y, u, v)?, "out")
    })
}

/// Writes `g_{y_𝔪}(y_𝔪, [y, e_i]_𝔪)` for every basis index into `values`
/// (length `len`) and the max-abs norm into `norm`.
///
/// # Safety
/// `y` and `values` must each point to `len` doubles and `norm` to one.
#[no_mangle]
pub unsafe extern "C" fn hf_criterion_residual(
    space: *const HfSpace,
    y: *const f64,
    len: usize,
    source: HfSource,
    values: *mut f64,
    norm: *mut f64,
) -> HfStatus {
    guard(|| {
        let s = space_ref(space)?;
        let y = g_vector(s, y, len)?;
        if values.is_null() {
            return Err(Fail::Null("values"));
        }
        if norm.is_null() {
            return Err(Fail::Null("norm"));
        }
        let r = s.space.criterion_residual(&y, source_of(s, source))?;
        std::slice::from_raw_parts_mut(values, len).copy_from_slice(&r.values);
        write(norm, r.norm, "norm")
    })
}

/// Geodesic-vector decision for `y ∈ 𝔤`. `tol <= 0` selects the
/// document's criterion tolerance or the source default.
///
/// # Safety
/// `y` must point to `len` doubles and `out` to one bool.
#[no_mangle]
pub unsafe extern "C" fn hf_is_geodesic_vector(
    space: *const HfSpace,
    y: *const f64,
    len: usize,
    tol: f64,
    source: HfSource,
    out: *mut bool,
) -> HfStatus {
    guard(|| {
        let s = space_ref(space)?;
        let y = g_vector(s, y, len)?;
        let src = source_of(s, source);
        let tol = if tol > 0.0 {
            tol
        } else {
            s.options.criterion_tol_for(src)
        };
        write(out, s.space.is_geodesic_vector(&y, tol, src)?, "out")
    })
}

/// Shen's condition on `n_grid` points at `b`.
///
/// # Safety
/// `min_e` must point to one double and `pass` to one bool.
#[no_mangle]
pub unsafe extern "C" fn hf_shen_check(
    space: *const HfSpace,
    b: f64,
    n_grid: usize,
    min_e: *mut f64,
    pass: *mut bool,
) -> HfStatus {
    guard(|| {
        let s = space_ref(space)?;
        if pass.is_null() {
            return Err(Fail::Null("pass"));
        }
        let r = s.space.metric().shen_check(b, n_grid)?;
        write(min_e, r.min_e, "min_e")?;
        write(pass, r.pass, "pass")
    })
}

/// Message of the last failed call on this thread, empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, NUL-terminated and static.
#[no_mangle]
pub extern "C" fn hf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
