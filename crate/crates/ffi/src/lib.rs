//! C ABI over `mukai-core`.
//!
//! Surfaces live behind an opaque [`MkSurface`] handle. Every entry point
//! returns an [`MkStatus`]; on failure the thread-local last error holds the
//! library error code and message. Strings handed out by the library are
//! NUL-terminated UTF-8 and must be released with [`mk_string_free`].
//! Mukai vectors are passed as text such as `2,(1,2),1`, classes as `1,3`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mukai_core::arith::fmt_rat;
use mukai_core::chambers::{enumerate_walls_rank2_elliptic, walls_through};
use mukai_core::mukai::parse_class;
use mukai_core::ols::TripleInput;
use mukai_core::perp::resolution_b2;
use mukai_core::reduction::{reduce, verify_trace, ReductionConfig, ReductionTrace};
use mukai_core::{Error, MukaiVector, SurfaceKind, SurfaceModel};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or vector text.
    Parse = 3,
    /// The computation refused the input; see `mk_last_error_code`.
    Domain = 4,
    /// A trace was read but did not verify.
    Rejected = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MkSurfaceKind {
    K3 = 0,
    Abelian = 1,
}

impl From<MkSurfaceKind> for SurfaceKind {
    fn from(k: MkSurfaceKind) -> Self {
        match k {
            MkSurfaceKind::K3 => SurfaceKind::K3,
            MkSurfaceKind::Abelian => SurfaceKind::Abelian,
        }
    }
}

/// Opaque surface model.
pub struct MkSurface(SurfaceModel);

struct Fail {
    status: MkStatus,
    code: &'static str,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = if matches!(e, Error::Parse(_)) { MkStatus::Parse } else { MkStatus::Domain };
        Fail { status, code: e.code(), message: e.to_string() }
    }
}

fn fail(status: MkStatus, code: &'static str, message: impl Into<String>) -> Fail {
    Fail { status, code, message: message.into() }
}

thread_local! {
    static LAST_ERROR: RefCell<(CString, CString)> = RefCell::new((CString::default(), CString::default()));
}

fn c_string(s: impl Into<Vec<u8>>) -> CString {
    CString::new(s).unwrap_or_else(|e| {
        let mut bytes = e.into_vec();
        bytes.retain(|&b| b != 0);
        CString::new(bytes).expect("NUL bytes removed")
    })
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MkStatus {
    let outcome = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(_) => Err(fail(MkStatus::Panic, "panic", "internal panic")),
    };
    match outcome {
        Ok(()) => MkStatus::Ok,
        Err(e) => {
            LAST_ERROR.with(|l| *l.borrow_mut() = (c_string(e.code), c_string(e.message)));
            e.status
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(MkStatus::NullArgument, "null_argument", format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(MkStatus::InvalidUtf8, "invalid_utf8", format!("{what} is not UTF-8")))
}

unsafe fn opt_text<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Fail> {
    if p.is_null() {
        Ok(None)
    } else {
        text(p, what).map(Some)
    }
}

unsafe fn surface<'a>(p: *const MkSurface) -> Result<&'a SurfaceModel, Fail> {
    p.as_ref().map(|s| &s.0).ok_or_else(|| fail(MkStatus::NullArgument, "null_argument", "surface is null"))
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(fail(MkStatus::NullArgument, "null_argument", "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    put(out, c_string(s).into_raw())
}

fn json<T: serde::de::DeserializeOwned>(s: &str) -> Result<T, Fail> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()).into())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serializable")
}

fn vector(s: &str) -> Result<MukaiVector, Fail> {
    Ok(s.parse::<MukaiVector>()?)
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn mk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Error code of the last failure on this thread, e.g. `rank_too_small`.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mk_last_error_code() -> *const c_char {
    LAST_ERROR.with(|l| l.borrow().0.as_ptr())
}

/// Human-readable message of the last failure on this thread.
#[no_mangle]
pub extern "C" fn mk_last_error_message() -> *const c_char {
    LAST_ERROR.with(|l| l.borrow().1.as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a surface from a preset name (`k3-elliptic`, `abelian-elliptic`,
/// `k3-deg2`, `abelian-deg2`) or a JSON object.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mk_surface_new(source: *const c_char, out: *mut *mut MkSurface) -> MkStatus {
    guard(|| {
        let source = text(source, "source")?;
        let s = match SurfaceModel::preset(source) {
            Some(s) => s,
            None => json(source)?,
        };
        put(out, Box::into_raw(Box::new(MkSurface(s))))
    })
}

/// # Safety
/// `s` must come from [`mk_surface_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mk_surface_free(s: *mut MkSurface) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mk_surface_rho(s: *const MkSurface, out: *mut usize) -> MkStatus {
    guard(|| put(out, surface(s)?.rho()))
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mk_surface_kind(s: *const MkSurface, out: *mut MkSurfaceKind) -> MkStatus {
    guard(|| {
        let k = match surface(s)?.kind {
            SurfaceKind::K3 => MkSurfaceKind::K3,
            SurfaceKind::Abelian => MkSurfaceKind::Abelian,
        };
        put(out, k)
    })
}

/// JSON form of the surface.
///
/// # Safety
/// Pointers must be valid; free the result with [`mk_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mk_surface_to_json(s: *const MkSurface, out: *mut *mut c_char) -> MkStatus {
    guard(|| put_string(out, to_json(surface(s)?)))
}

/// Mukai pairing `(v, u)` as a decimal string.
///
/// # Safety
/// Pointers must be valid; free the result with [`mk_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mk_mukai_pairing(
    s: *const MkSurface,
    v: *const c_char,
    u: *const c_char,
    out: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let (v, u) = (vector(text(v, "v")?)?, vector(text(u, "u")?)?);
        put_string(out, surface(s)?.mukai_pairing(&v, &u)?.to_string())
    })
}

/// Norm bound `|v|` as `p/q`, or an integer when exact.
///
/// # Safety
/// Pointers must be valid; free the result with [`mk_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mk_norm_bound(s: *const MkSurface, v: *const c_char, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let v = vector(text(v, "v")?)?;
        put_string(out, fmt_rat(&surface(s)?.norm_bound(&v)?))
    })
}

/// Wall certificates as a JSON array: the walls through `h` when given,
/// otherwise the complete list on an elliptic model.
///
/// # Safety
/// `h` may be null; other pointers must be valid. Free the result with
/// [`mk_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mk_walls(
    s: *const MkSurface,
    v: *const c_char,
    h: *const c_char,
    out: *mut *mut c_char,
) -> MkStatus {
    guard(|| {
        let s = surface(s)?;
        let v = vector(text(v, "v")?)?;
        let walls = match opt_text(h, "h")? {
            Some(h) => walls_through(s, &parse_class(h)?, &v)?,
            None => enumerate_walls_rank2_elliptic(s, &v)?,
        };
        put_string(out, to_json(&walls))
    })
}

/// Second Betti number of the symplectic resolution (24 or 8).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mk_resolution_b2(kind: MkSurfaceKind, out: *mut usize) -> MkStatus {
    guard(|| put(out, resolution_b2(kind.into())))
}

/// Validates a triple `{"surface", "v", "H"}` and returns the reduction trace
/// as JSON. `config` may be null for defaults.
///
/// # Safety
/// `config` may be null; other pointers must be valid. Free the result with
/// [`mk_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mk_reduce(triple: *const c_char, config: *const c_char, out: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let input: TripleInput = json(text(triple, "triple")?)?;
        let config: ReductionConfig = match opt_text(config, "config")? {
            Some(c) => json(c)?,
            None => ReductionConfig::default(),
        };
        let trace = reduce(&input.validate()?, &config)?;
        put_string(out, to_json(&trace))
    })
}

/// Re-checks a trace. The report is written to `report` in both outcomes;
/// the status is `MK_STATUS_REJECTED` when some move fails.
///
/// # Safety
/// Pointers must be valid; free the report with [`mk_string_free`].
#[no_mangle]
pub unsafe extern "C" fn mk_verify(trace: *const c_char, report: *mut *mut c_char) -> MkStatus {
    guard(|| {
        let trace: ReductionTrace = json(text(trace, "trace")?)?;
        let r = verify_trace(&trace);
        put_string(report, to_json(&r))?;
        if r.pass {
            Ok(())
        } else {
            let at = r.first_failure().map(|i| format!(" at move {i}")).unwrap_or_default();
            Err(fail(MkStatus::Rejected, "verification_failed", format!("trace does not verify{at}")))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn cs(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        mk_string_free(p);
        s
    }

    #[test]
    fn norm_through_a_handle() {
        unsafe {
            let mut s = ptr::null_mut();
            assert_eq!(mk_surface_new(cs("k3-elliptic").as_ptr(), &mut s), MkStatus::Ok);
            let mut out = ptr::null_mut();
            assert_eq!(mk_norm_bound(s, cs("2,(1,2),1").as_ptr(), &mut out), MkStatus::Ok);
            assert_eq!(take(out), "6");
            mk_surface_free(s);
        }
    }

    #[test]
    fn errors_set_the_last_error() {
        unsafe {
            let mut s = ptr::null_mut();
            assert_eq!(mk_surface_new(cs("k3-deg2").as_ptr(), &mut s), MkStatus::Ok);
            let mut out = ptr::null_mut();
            assert_eq!(mk_norm_bound(s, cs("1,(1),0").as_ptr(), &mut out), MkStatus::Domain);
            assert_eq!(CStr::from_ptr(mk_last_error_code()).to_str().unwrap(), "rank_too_small");
            assert_eq!(mk_norm_bound(s, cs("nonsense").as_ptr(), &mut out), MkStatus::Parse);
            assert_eq!(mk_norm_bound(ptr::null(), cs("1,(1),0").as_ptr(), &mut out), MkStatus::NullArgument);
            mk_surface_free(s);
        }
    }
}
