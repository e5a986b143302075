use std::ffi::{CStr, CString};
use std::ptr;

use relext_ffi::*;

const EX2: &str = include_str!("../../core/fixtures/ex2.quiv");

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = relext_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn parsed() -> *mut RelextFile {
    let mut file = ptr::null_mut();
    let text = c(EX2);
    assert_eq!(unsafe { relext_file_parse(text.as_ptr(), &mut file) }, RelextStatus::Ok);
    assert!(relext_last_error_message().is_null());
    file
}

#[test]
fn dimensions_through_handles() {
    let file = parsed();
    let mut dims = Vec::new();
    for name in ["C", "B", "Ctilde"] {
        let mut a = ptr::null_mut();
        let n = c(name);
        unsafe {
            assert_eq!(relext_algebra_build(file, n.as_ptr(), &mut a), RelextStatus::Ok);
            let (mut dim, mut hh1) = (0usize, 0usize);
            assert_eq!(relext_algebra_dimension(a, &mut dim), RelextStatus::Ok);
            assert_eq!(relext_hh_dimension(a, 1, &mut hh1), RelextStatus::Ok);
            assert_eq!(relext_hh_dimension(a, 2, &mut hh1), RelextStatus::UnsupportedDegree);
            dims.push((dim, hh1));
            relext_algebra_free(a);
        }
    }
    assert_eq!(dims.iter().map(|d| d.1).collect::<Vec<_>>(), [1, 2, 3]);
    assert_eq!(dims[0].0, 8);
    assert_eq!(dims[2].0, 16);
    unsafe { relext_file_free(file) };
}

#[test]
fn verify_report_as_json() {
    let file = parsed();
    let (base, tilde, split) = (c("C"), c("Ctilde"), c("eps"));
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(relext_verify_json(file, base.as_ptr(), tilde.as_ptr(), split.as_ptr(), false, &mut out), RelextStatus::Ok);
        let json: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        relext_string_free(out);
        assert_eq!(json["hh1_Ctilde"], 3);
        assert_eq!(json["split"], serde_json::json!(["eps"]));
        assert!(json["rows"].as_array().unwrap().len() == 4);

        let bad = c("nope");
        assert_eq!(relext_verify_json(file, base.as_ptr(), tilde.as_ptr(), bad.as_ptr(), false, &mut out), RelextStatus::Extension);
        relext_file_free(file);
    }
}

#[test]
fn errors_are_reported() {
    let mut file = ptr::null_mut();
    let text = c("algebra A\nvertices 1\narrow a 1 9\nend\n");
    unsafe {
        assert_eq!(relext_file_parse(text.as_ptr(), &mut file), RelextStatus::Parse);
        assert!(file.is_null());
        assert!(last_error().contains("unknown vertex"), "{}", last_error());
        assert_eq!(relext_file_parse(ptr::null(), &mut file), RelextStatus::NullPointer);
        assert_eq!(last_error(), "text is null");

        let file = parsed();
        let mut a = ptr::null_mut();
        let missing = c("Z");
        assert_eq!(relext_algebra_build(file, missing.as_ptr(), &mut a), RelextStatus::UnknownAlgebra);
        assert!(last_error().contains('Z'));
        assert_eq!(relext_algebra_dimension(ptr::null(), &mut 0), RelextStatus::NullPointer);
        relext_file_free(file);
        relext_file_free(ptr::null_mut());
        relext_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/relext.h")).unwrap();
    for name in [
        "relext_file_parse",
        "relext_file_free",
        "relext_algebra_build",
        "relext_algebra_free",
        "relext_algebra_dimension",
        "relext_hh_dimension",
        "relext_verify_json",
        "relext_string_free",
        "relext_last_error_message",
        "typedef struct RelextFile RelextFile",
        "RELEXT_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "{name}");
    }
}
