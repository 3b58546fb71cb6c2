use std::ffi::{CStr, CString};
use std::ptr;

use ssvsc_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ssvsc_last_error()) }.to_string_lossy().into_owned()
}

fn fixture(name: &str) -> CString {
    CString::new(format!("{}/../core/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn figure_two_through_the_abi() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(ssvsc_matrix_load(fixture("fig2").as_ptr(), &mut m), SsvscStatus::Ok);
        let mut n = 0;
        assert_eq!(ssvsc_matrix_size(m, &mut n), SsvscStatus::Ok);
        assert_eq!(n, 4);
        let mut buf = [usize::MAX; 4];
        let mut len = 0;
        assert_eq!(ssvsc_winners(m, SsvscMethod::Sc, buf.as_mut_ptr(), 4, &mut len), SsvscStatus::Ok);
        assert_eq!(&buf[..len], &[1, 3]);
        assert_eq!(ssvsc_winners(m, SsvscMethod::Ssv, buf.as_mut_ptr(), 4, &mut len), SsvscStatus::Ok);
        assert_eq!(&buf[..len], &[3]);
        let mut w = 0;
        assert_eq!(ssvsc_matrix_weight(m, 3, 1, &mut w), SsvscStatus::Ok);
        assert_eq!(w, 4);
        let mut d = false;
        assert_eq!(ssvsc_sc_defeats(m, 3, 0, &mut d), SsvscStatus::Ok);
        assert!(d);
        ssvsc_matrix_free(m);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let bad = [0i64, 3, -3, 0];
        let mut m = ptr::null_mut();
        assert_eq!(ssvsc_matrix_new(2, bad.as_ptr(), &mut m), SsvscStatus::InvalidMatrix);
        assert!(m.is_null());
        assert!(last_error().contains("odd"), "{}", last_error());

        let tied = [0i64, 2, -2, -2, 0, 2, 2, -2, 0];
        assert_eq!(ssvsc_matrix_new(3, tied.as_ptr(), &mut m), SsvscStatus::Ok);
        let mut len = 0;
        assert_eq!(ssvsc_winners(m, SsvscMethod::Ssv, ptr::null_mut(), 0, &mut len), SsvscStatus::NotLinear);
        assert_eq!(ssvsc_winners(m, SsvscMethod::Sc, ptr::null_mut(), 0, &mut len), SsvscStatus::BufferTooSmall);
        assert_eq!(len, 3);
        let mut w = 0;
        assert_eq!(ssvsc_matrix_weight(m, 0, 3, &mut w), SsvscStatus::InvalidArgument);
        assert_eq!(ssvsc_matrix_weight(m, 0, 1, ptr::null_mut()), SsvscStatus::NullPointer);
        assert_eq!(ssvsc_matrix_weight(m, 0, 1, &mut w), SsvscStatus::Ok);
        assert_eq!(last_error(), "");
        ssvsc_matrix_free(m);
        ssvsc_matrix_free(ptr::null_mut());

        assert_eq!(ssvsc_matrix_size(ptr::null(), &mut len), SsvscStatus::NullPointer);
        let missing = CString::new("/nonexistent/matrix.json").unwrap();
        assert_eq!(ssvsc_matrix_load(missing.as_ptr(), &mut m), SsvscStatus::Io);
    }
}

#[test]
fn prove_small_instances() {
    unsafe {
        let mut status = SsvscSolveStatus::Budget;
        let mut model = ptr::null_mut();
        let rc = ssvsc_prove(4, SsvscTarget::MinimalCounterexample, 0, ptr::null(), &mut status, &mut model);
        assert_eq!(rc, SsvscStatus::Ok, "{}", last_error());
        assert_eq!(status, SsvscSolveStatus::Unsat);
        assert!(model.is_null());

        let rc = ssvsc_prove(9, SsvscTarget::Counterexample, 0, ptr::null(), &mut status, &mut model);
        assert_eq!(rc, SsvscStatus::TooLarge);

        let cmd = CString::new("/nonexistent/solver").unwrap();
        let rc = ssvsc_prove(3, SsvscTarget::Counterexample, 0, cmd.as_ptr(), &mut status, &mut model);
        assert_eq!(rc, SsvscStatus::Solver);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(ssvsc_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/ssvsc.h");
    let src = include_str!("../src/lib.rs");
    let exports: Vec<_> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert_eq!(exports.len(), 11);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}
