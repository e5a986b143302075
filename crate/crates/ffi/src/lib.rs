//! C interface to `relext`.
//!
//! Every handle is opaque and owned by the caller once returned; release it
//! with the matching `_free` function. Functions report through
//! [`RelextStatus`] and leave a message for [`relext_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use relext::algebra::{BoundQuiverAlgebra, DEFAULT_LENGTH_CAP};
use relext::bimod::Bimodule;
use relext::extensions::{verify_theorem, RelationExtension};
use relext::hochschild::{h0, h1};
use relext::qdsl::{parse, PresentationFile};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelextStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    UnknownAlgebra = 4,
    Algebra = 5,
    Extension = 6,
    UnsupportedDegree = 7,
    Panic = 8,
}

/// A parsed presentation file.
pub struct RelextFile(PresentationFile);

/// A bound quiver algebra built from one block of a file.
pub struct RelextAlgebra(BoundQuiverAlgebra);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

type Outcome<T> = Result<T, (RelextStatus, String)>;

fn guard(f: impl FnOnce() -> Outcome<()>) -> RelextStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            RelextStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            RelextStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err((RelextStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (RelextStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Outcome<&'a T> {
    p.as_ref().ok_or_else(|| (RelextStatus::NullPointer, format!("{what} is null")))
}

fn out_arg<T>(p: *mut T) -> Outcome<()> {
    if p.is_null() {
        Err((RelextStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

/// Parses presentation text. On success `*out` holds a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relext_file_parse(text: *const c_char, out: *mut *mut RelextFile) -> RelextStatus {
    guard(|| {
        out_arg(out)?;
        let text = str_arg(text, "text")?;
        let file = parse(text).map_err(|e| (RelextStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(RelextFile(file)));
        Ok(())
    })
}

/// # Safety
/// `file` must come from [`relext_file_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn relext_file_free(file: *mut RelextFile) {
    if !file.is_null() {
        drop(Box::from_raw(file));
    }
}

/// Builds the algebra named `name` over the field declared in its block.
///
/// # Safety
/// `file` must be a live handle, `name` a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relext_algebra_build(
    file: *const RelextFile,
    name: *const c_char,
    out: *mut *mut RelextAlgebra,
) -> RelextStatus {
    guard(|| {
        out_arg(out)?;
        let file = ref_arg(file, "file")?;
        let name = str_arg(name, "name")?;
        let block = file.0.block(name).ok_or_else(|| (RelextStatus::UnknownAlgebra, format!("no algebra named `{name}`")))?;
        let a = BoundQuiverAlgebra::from_block(block, None, DEFAULT_LENGTH_CAP)
            .map_err(|e| (RelextStatus::Algebra, e.to_string()))?;
        *out = Box::into_raw(Box::new(RelextAlgebra(a)));
        Ok(())
    })
}

/// # Safety
/// `algebra` must come from [`relext_algebra_build`] or be null.
#[no_mangle]
pub unsafe extern "C" fn relext_algebra_free(algebra: *mut RelextAlgebra) {
    if !algebra.is_null() {
        drop(Box::from_raw(algebra));
    }
}

/// Writes the vector space dimension of the algebra to `*out`.
///
/// # Safety
/// `algebra` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relext_algebra_dimension(algebra: *const RelextAlgebra, out: *mut usize) -> RelextStatus {
    guard(|| {
        out_arg(out)?;
        *out = ref_arg(algebra, "algebra")?.0.dim();
        Ok(())
    })
}

/// Writes `dim HH^degree(A)` to `*out`; `degree` is 0 or 1.
///
/// # Safety
/// `algebra` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relext_hh_dimension(algebra: *const RelextAlgebra, degree: u32, out: *mut usize) -> RelextStatus {
    guard(|| {
        out_arg(out)?;
        let a = &ref_arg(algebra, "algebra")?.0;
        let m = Bimodule::regular(a);
        *out = match degree {
            0 => h0(a, &m).dim(),
            1 => h1(a, &m).dim(),
            d => return Err((RelextStatus::UnsupportedDegree, format!("degree {d} is not supported"))),
        };
        Ok(())
    })
}

/// Runs the full verification for the extension `base ⊂ tilde` split along the
/// comma separated arrow list `split` (null or empty for none) and returns the
/// report as JSON. Release the string with [`relext_string_free`].
///
/// The status is `Ok` whenever a report was produced; check its `passed` field.
///
/// # Safety
/// `file` must be a live handle, the strings NUL-terminated (or `split` null) and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relext_verify_json(
    file: *const RelextFile,
    base: *const c_char,
    tilde: *const c_char,
    split: *const c_char,
    oracle: bool,
    out: *mut *mut c_char,
) -> RelextStatus {
    guard(|| {
        out_arg(out)?;
        let file = ref_arg(file, "file")?;
        let (base, tilde) = (str_arg(base, "base")?, str_arg(tilde, "tilde")?);
        let split: Vec<String> = if split.is_null() {
            Vec::new()
        } else {
            str_arg(split, "split")?.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
        };
        let ext = RelationExtension::from_file(&file.0, base, tilde, None)
            .map_err(|e| (RelextStatus::Extension, e.to_string()))?;
        let report = verify_theorem(&ext, &split, oracle).map_err(|e| (RelextStatus::Extension, e.to_string()))?;
        let mut json = serde_json::to_value(&report).expect("report serializes");
        json["passed"] = report.passed().into();
        let text = CString::new(json.to_string()).expect("JSON has no NUL");
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn relext_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn relext_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
