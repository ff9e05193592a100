use std::ffi::CStr;
use std::process::Command;
use std::ptr;

use symdesign_ffi::*;

fn last_error() -> String {
    let p = sd_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn model_lifecycle_and_gap() {
    let mut m: *mut SdModel = ptr::null_mut();
    unsafe {
        assert_eq!(sd_model_new(SdSymmetry::U1, 0, 4, SdGraph::Chain, &mut m), SdStatus::Ok);
        assert!(sd_last_error_message().is_null());
        let mut ns = 0usize;
        assert_eq!(sd_model_num_sectors(m, &mut ns), SdStatus::Ok);
        assert_eq!(ns, 5);
        let mut dim = 0usize;
        assert_eq!(sd_model_sector_dim(m, 2, &mut dim), SdStatus::Ok);
        assert_eq!(dim, 6);
        assert_eq!(sd_model_sector_dim(m, 9, &mut dim), SdStatus::InvalidArgument);
        let (mut gap, mut depth, mut pass) = (0.0f64, 0u64, false);
        assert_eq!(sd_global_gap(m, &mut gap, &mut depth, &mut pass), SdStatus::Ok);
        assert!(gap > 0.0 && gap < 1.0 && depth >= 1 && pass);
        let mut expect = 0u64;
        assert_eq!(sd_convergence_depth(gap, 2, 4, 2, 1e-6, &mut expect), SdStatus::Ok);
        assert_eq!(depth, expect);
        sd_model_free(m);
    }
}

#[test]
fn report_json_round_trips_through_c_string() {
    let mut m: *mut SdModel = ptr::null_mut();
    unsafe {
        assert_eq!(sd_model_new(SdSymmetry::Sud, 2, 4, SdGraph::Chain, &mut m), SdStatus::Ok);
        let mut s: *mut std::ffi::c_char = ptr::null_mut();
        assert_eq!(sd_report_json(m, &mut s), SdStatus::Ok);
        let text = CStr::from_ptr(s).to_str().unwrap().to_owned();
        sd_string_free(s);
        let r = symdesign::report::parse_json(&text).unwrap();
        assert_eq!(r.sectors.len(), 3);
        sd_model_free(m);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut m: *mut SdModel = ptr::null_mut();
    unsafe {
        assert_eq!(sd_model_new(SdSymmetry::Sud, 2, 4, SdGraph::Star, &mut m), SdStatus::Ok);
        let mut gap = -1.0f64;
        assert_eq!(sd_global_gap(m, &mut gap, ptr::null_mut(), ptr::null_mut()), SdStatus::Unsupported);
        assert!(last_error().contains("nearest-neighbour"));
        assert_eq!(gap, -1.0);
        sd_model_free(m);
        m = ptr::null_mut();
        let edges = [1usize, 2, 3, 4];
        assert_eq!(sd_model_new_custom(SdSymmetry::U1, 0, 4, edges.as_ptr(), 2, &mut m), SdStatus::NotGenerating);
        assert!(m.is_null());
        let edges = [1usize, 2, 2, 3, 3, 4];
        assert_eq!(sd_model_new_custom(SdSymmetry::U1, 0, 4, edges.as_ptr(), 3, &mut m), SdStatus::Ok);
        assert_eq!(sd_model_set_epsilon(m, 2.0), SdStatus::InvalidArgument);
        assert_eq!(sd_model_set_epsilon(m, 0.01), SdStatus::Ok);
        sd_model_free(m);
        assert_eq!(sd_model_new(SdSymmetry::U1, 0, 1, SdGraph::Chain, &mut m), SdStatus::InvalidArgument);
        assert_eq!(sd_model_new(SdSymmetry::U1, 0, 4, SdGraph::Chain, ptr::null_mut()), SdStatus::NullPointer);
        assert_eq!(sd_model_num_sectors(ptr::null(), &mut 0usize), SdStatus::InvalidArgument);
        let mut p = 0u64;
        assert_eq!(sd_convergence_depth(0.0, 2, 4, 2, 1e-6, &mut p), SdStatus::NoGap);
        assert_eq!(sd_convergence_depth(0.5, 2, 2, 2, (-1.0f64).exp(), &mut p), SdStatus::Ok);
        assert_eq!(p, 14);
        sd_model_free(ptr::null_mut());
        sd_string_free(ptr::null_mut());
    }
}

#[test]
fn cayley_closed_forms() {
    let (mut l1, mut l2, mut g) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(sd_cayley_closed_form(SdGraph::Complete, 5, &mut l1, &mut l2, &mut g), SdStatus::Ok);
        assert_eq!((l1, l2, g), (10.0, 5.0, 5.0));
        assert_eq!(sd_cayley_closed_form(SdGraph::Star, 1, &mut l1, &mut l2, &mut g), SdStatus::InvalidArgument);
    }
    let v = unsafe { CStr::from_ptr(sd_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn generated_header_declares_the_api_and_compiles_as_c() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/include/symdesign.h");
    let h = std::fs::read_to_string(path).unwrap();
    for name in [
        "sd_model_new",
        "sd_model_new_custom",
        "sd_model_free",
        "sd_global_gap",
        "sd_report_json",
        "sd_convergence_depth",
        "sd_cayley_closed_form",
        "sd_last_error_message",
        "SD_STATUS_OK",
        "typedef struct SdModel SdModel",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
    // Syntax-check the header with the system C compiler when one exists.
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", path]).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
