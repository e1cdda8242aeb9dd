use std::ffi::{CStr, CString};
use std::ptr;

use crystrep_ffi::*;

fn last_error() -> String {
    let p = crystrep_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn builtin_group_handle() {
    let name = CString::new("gamma-k:2").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(crystrep_group_builtin(name.as_ptr(), &mut g), CrystrepStatus::Ok);
        assert_eq!(crystrep_group_rank(g), 3);
        assert_eq!(crystrep_group_point_order(g), 2);
        crystrep_group_free(g);
    }
}

#[test]
fn bad_inputs_report_status_and_message() {
    let name = CString::new("no-such-group").unwrap();
    let mut g = ptr::null_mut();
    unsafe {
        assert_eq!(crystrep_group_builtin(name.as_ptr(), &mut g), CrystrepStatus::InvalidInput);
        assert!(g.is_null());
        assert!(!last_error().is_empty());
        assert_eq!(crystrep_group_builtin(ptr::null(), &mut g), CrystrepStatus::NullPointer);
        let text = CString::new("garbage").unwrap();
        assert_eq!(crystrep_group_parse(text.as_ptr(), &mut g), CrystrepStatus::InvalidInput);
        assert_eq!(crystrep_group_rank(ptr::null()), 0);
        crystrep_group_free(ptr::null_mut());
        crystrep_rep_free(ptr::null_mut());
        crystrep_string_free(ptr::null_mut());
    }
}

#[test]
fn family_rep_roundtrips_through_json() {
    let z = [0.25, 0.1];
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(crystrep_rep_family(2, z.as_ptr(), 0.3, &mut r), CrystrepStatus::Ok);
        assert_eq!(crystrep_rep_dim(r), 2);
        let mut irr = false;
        assert_eq!(crystrep_rep_is_irreducible(r, &mut irr), CrystrepStatus::Ok);
        assert!(irr);
        let mut d = 0;
        assert_eq!(crystrep_rep_local_moduli_dim(r, &mut d), CrystrepStatus::Ok);
        assert_eq!(d, 3);

        let mut json = ptr::null_mut();
        assert_eq!(crystrep_rep_to_json(r, &mut json), CrystrepStatus::Ok);
        let name = CString::new("gamma-k:2").unwrap();
        let mut g = ptr::null_mut();
        assert_eq!(crystrep_group_builtin(name.as_ptr(), &mut g), CrystrepStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(crystrep_rep_from_json(g, json, &mut back), CrystrepStatus::Ok);
        assert_eq!(crystrep_rep_dim(back), 2);

        crystrep_string_free(json);
        crystrep_rep_free(back);
        crystrep_rep_free(r);
        crystrep_group_free(g);
    }
}

#[test]
fn non_unitary_json_is_rejected() {
    let bad = CString::new(
        r#"{"group_ref":"gamma-k:1","n":1,"lattice_images":[[[[2.0,0.0]]],[[[1.0,0.0]]]],"lift_images":{"1":[[[1.0,0.0]]]}}"#,
    )
    .unwrap();
    let name = CString::new("gamma-k:1").unwrap();
    let mut g = ptr::null_mut();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(crystrep_group_builtin(name.as_ptr(), &mut g), CrystrepStatus::Ok);
        assert_ne!(crystrep_rep_from_json(g, bad.as_ptr(), &mut r), CrystrepStatus::Ok);
        assert!(r.is_null());
        crystrep_group_free(g);
    }
}

#[test]
fn pi0_of_rdef() {
    let (mut free, mut two) = (0, 0);
    unsafe {
        assert_eq!(crystrep_rdef_pi0(1, &mut free, &mut two), CrystrepStatus::Ok);
    }
    assert_eq!((free, two), (1, 1));
}

#[test]
fn rational_cohomology_ranks() {
    let mut len = 0;
    let mut buf = [0usize; 8];
    unsafe {
        assert_eq!(crystrep_rational_cohomology(3, ptr::null_mut(), 0, &mut len), CrystrepStatus::BufferTooSmall);
        assert_eq!(len, 5);
        assert_eq!(crystrep_rational_cohomology(3, buf.as_mut_ptr(), buf.len(), &mut len), CrystrepStatus::Ok);
    }
    assert_eq!(&buf[..len], &[1, 1, 3, 3, 0]);
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/crystrep.h")).unwrap();
    for sym in ["CRYSTREP_H", "crystrep_group_builtin", "crystrep_rep_family", "crystrep_last_error", "CRYSTREP_STATUS_OK"] {
        assert!(h.contains(sym), "{sym}");
    }
}
