//! C interface to `isx-core`.
//!
//! Instances are opaque handles. Every fallible function returns an
//! [`IsxStatus`]; on failure a message is kept per thread and can be read with
//! [`isx_last_error`]. Strings returned through `char **` outputs are owned by
//! the caller and released with [`isx_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use isx_core::approximation::{default_approximation, witt_approximation};
use isx_core::fixtures::emit_fixture;
use isx_core::global::{intersection_space, validate_global};
use isx_core::instance::Instance;
use isx_core::pairing::signature_report;
use isx_core::tube::{validate_tube, Perversity};
use isx_core::Error;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsxStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Invalid = 4,
    Precondition = 5,
    Shape = 6,
    Internal = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque handle to a parsed instance.
pub struct IsxInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> IsxStatus {
    match e {
        Error::Parse(_) => IsxStatus::Parse,
        Error::Invalid(_) => IsxStatus::Invalid,
        Error::Precondition(_) => IsxStatus::Precondition,
        Error::Shape(_) => IsxStatus::Shape,
        Error::Internal(_) => IsxStatus::Internal,
    }
}

struct Fail(IsxStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IsxStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            IsxStatus::Ok
        }
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic");
            IsxStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(IsxStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(IsxStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn instance<'a>(p: *const IsxInstance) -> Result<&'a Instance, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null("instance"))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(IsxStatus::Internal, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn give_instance(out: *mut *mut IsxInstance, inst: Instance) {
    *out = Box::into_raw(Box::new(IsxInstance { inner: inst }));
}

fn require_valid(inst: &Instance) -> Result<(), Fail> {
    let mut rep = validate_tube(&inst.tube);
    rep.extend(validate_global(&inst.tube, &inst.global));
    if rep.is_valid() {
        Ok(())
    } else {
        Err(Fail(IsxStatus::Precondition, format!("instance is invalid: {}", rep.to_text())))
    }
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn isx_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance from a NUL-terminated JSON document.
///
/// # Safety
/// `json` must be null or a valid C string; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn isx_instance_from_json(json: *const c_char, out: *mut *mut IsxInstance) -> IsxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = Instance::from_json(read_str(json, "json")?)?;
        give_instance(out, inst);
        Ok(())
    })
}

/// Builds a named built-in instance (`pinched-torus` or `empty`).
///
/// # Safety
/// As for [`isx_instance_from_json`].
#[no_mangle]
pub unsafe extern "C" fn isx_instance_fixture(name: *const c_char, out: *mut *mut IsxInstance) -> IsxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = emit_fixture(read_str(name, "name")?)?;
        give_instance(out, inst);
        Ok(())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `inst` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn isx_instance_free(inst: *mut IsxInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Serializes the instance back to JSON.
///
/// # Safety
/// `inst` must be a live handle or null; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn isx_instance_to_json(inst: *const IsxInstance, out: *mut *mut c_char) -> IsxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        give_string(out, instance(inst)?.to_json())
    })
}

/// Runs the tube and global validators. `*valid` is 1 when both pass; the
/// failure list is then available as the error message when 0.
///
/// # Safety
/// `inst` must be a live handle or null; `valid` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn isx_instance_validate(inst: *const IsxInstance, valid: *mut i32) -> IsxStatus {
    let mut report = String::new();
    let status = guard(|| {
        if valid.is_null() {
            return Err(null("valid"));
        }
        let inst = instance(inst)?;
        let mut rep = validate_tube(&inst.tube);
        rep.extend(validate_global(&inst.tube, &inst.global));
        *valid = i32::from(rep.is_valid());
        report = rep.to_text();
        Ok(())
    });
    if status == IsxStatus::Ok && *valid == 0 {
        set_error(report);
    }
    status
}

/// Writes `dim H_ix(i)` for every degree of the instance, lowest first.
/// Uses the Witt approximation when `witt` is nonzero and the default
/// approximation otherwise. `*len` always receives the required length;
/// `BufferTooSmall` is returned when `capacity` is short.
///
/// # Safety
/// `dims` must be valid for `capacity` writes (or null when `capacity` is 0);
/// `len` and `min_degree` must be writable; `inst` a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn isx_homology_dims(
    inst: *const IsxInstance,
    witt: i32,
    dims: *mut usize,
    capacity: usize,
    len: *mut usize,
    min_degree: *mut i32,
) -> IsxStatus {
    guard(|| {
        if len.is_null() || min_degree.is_null() {
            return Err(null("len or min_degree"));
        }
        let inst = instance(inst)?;
        require_valid(inst)?;
        let a = if witt != 0 {
            witt_approximation(&inst.tube)?
        } else {
            default_approximation(&inst.tube, Perversity::P)?
        };
        let ix = intersection_space(&inst.tube, &inst.global, &a)?;
        let values: Vec<usize> = (inst.min_degree..=inst.max_degree).map(|i| ix.h_ix().dim(i)).collect();
        *len = values.len();
        *min_degree = inst.min_degree;
        if capacity < values.len() {
            return Err(Fail(IsxStatus::BufferTooSmall, format!("need {} entries, got {capacity}", values.len())));
        }
        if dims.is_null() && !values.is_empty() {
            return Err(null("dims"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), dims, values.len());
        Ok(())
    })
}

/// Signature report as JSON, using the supplied approximation if present and
/// the Witt approximation otherwise.
///
/// # Safety
/// `inst` must be a live handle or null; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn isx_signature_json(inst: *const IsxInstance, out: *mut *mut c_char) -> IsxStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let inst = instance(inst)?;
        require_valid(inst)?;
        let a = match inst.supplied(Perversity::P) {
            Some(a) => a.clone(),
            None => witt_approximation(&inst.tube)?,
        };
        let rep = signature_report(&inst.tube, &inst.global, &a)?;
        give_string(out, serde_json::to_string(&rep).map_err(|e| Fail(IsxStatus::Internal, e.to_string()))?)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn isx_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        assert_eq!(status_of(&Error::Parse(String::new())), IsxStatus::Parse);
        assert_eq!(status_of(&Error::Internal(String::new())), IsxStatus::Internal);
        assert_eq!(IsxStatus::Ok as i32, 0);
    }

    #[test]
    fn panics_become_status() {
        assert_eq!(guard(|| panic!("boom")), IsxStatus::Panic);
        assert!(!isx_last_error().is_null());
        assert_eq!(guard(|| Ok(())), IsxStatus::Ok);
        assert!(isx_last_error().is_null());
    }
}
