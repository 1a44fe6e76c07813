use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use vandermonde_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(vdm_last_error_message()) }.to_string_lossy().into_owned()
}

#[test]
fn determinant_and_gradient() {
    let x = [0.5, -1.0, 2.0];
    let mut v = 0.0;
    assert_eq!(unsafe { vdm_det(x.as_ptr(), 3, &mut v) }, VdmStatus::Ok);
    assert!((v - (-1.5) * 1.5 * 3.0).abs() < 1e-15);
    assert!(last_error().is_empty());

    let mut g = [0.0; 3];
    assert_eq!(unsafe { vdm_grad(x.as_ptr(), 3, g.as_mut_ptr()) }, VdmStatus::Ok);
    let euler: f64 = x.iter().zip(&g).map(|(a, b)| a * b).sum();
    assert!((euler - 3.0 * v).abs() < 1e-12);
}

#[test]
fn null_pointers_are_reported() {
    let mut v = 0.0;
    assert_eq!(unsafe { vdm_det(ptr::null(), 3, &mut v) }, VdmStatus::NullPointer);
    assert!(!last_error().is_empty());
    let x = [1.0, 2.0];
    assert_eq!(unsafe { vdm_det(x.as_ptr(), 2, ptr::null_mut()) }, VdmStatus::NullPointer);
    assert_eq!(unsafe { vdm_extrema_new(3, ptr::null_mut()) }, VdmStatus::NullPointer);
    unsafe {
        vdm_extrema_free(ptr::null_mut());
        vdm_grid_free(ptr::null_mut());
    }
}

#[test]
fn polynomial_coefficients_need_room() {
    let mut c = [0.0; 5];
    assert_eq!(unsafe { vdm_pn_coefficients(4, c.as_mut_ptr(), 4) }, VdmStatus::BufferTooSmall);
    assert!(last_error().contains('5'), "{}", last_error());
    assert_eq!(unsafe { vdm_pn_coefficients(4, c.as_mut_ptr(), 5) }, VdmStatus::Ok);
    assert_eq!(c, [1.0 / 48.0, 0.0, -0.5, 0.0, 1.0]);
    assert_eq!(unsafe { vdm_pn_coefficients(1, c.as_mut_ptr(), 5) }, VdmStatus::InvalidArgument);
}

#[test]
fn extrema_handle() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { vdm_extrema_new(3, &mut h) }, VdmStatus::Ok);
    let mut n = 0;
    assert_eq!(unsafe { vdm_extrema_len(h, &mut n) }, VdmStatus::Ok);
    assert_eq!(n, 3);
    let mut roots = [0.0; 3];
    assert_eq!(unsafe { vdm_extrema_roots(h, roots.as_mut_ptr(), 2) }, VdmStatus::BufferTooSmall);
    assert_eq!(unsafe { vdm_extrema_roots(h, roots.as_mut_ptr(), 3) }, VdmStatus::Ok);
    assert!((roots[2] - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    let (mut v, mut l) = (0.0, 0.0);
    assert_eq!(unsafe { vdm_extrema_value(h, &mut v, &mut l) }, VdmStatus::Ok);
    assert!((v - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    assert!((l - v.log10()).abs() < 1e-15);

    let mut r = 0.0;
    assert_eq!(unsafe { vdm_equi_residual(roots.as_ptr(), 3, &mut r) }, VdmStatus::Ok);
    assert!(r.abs() < 1e-12);
    unsafe { vdm_extrema_free(h) };

    assert_eq!(unsafe { vdm_extrema_new(51, &mut h) }, VdmStatus::InvalidArgument);
}

#[test]
fn maximizer_reaches_the_extreme_value() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { vdm_extrema_new(6, &mut h) }, VdmStatus::Ok);
    let (mut expected, mut l) = (0.0, 0.0);
    unsafe { vdm_extrema_value(h, &mut expected, &mut l) };
    unsafe { vdm_extrema_free(h) };

    let mut point = [0.0; 6];
    let mut value = 0.0;
    assert_eq!(unsafe { vdm_maximize(6, 0, 8, point.as_mut_ptr(), &mut value) }, VdmStatus::Ok);
    assert!((value.abs() - expected).abs() < 1e-10 * expected);
    assert_eq!(unsafe { vdm_maximize(30, 0, 8, point.as_mut_ptr(), &mut value) }, VdmStatus::InvalidArgument);
}

#[test]
fn grid_handle() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { vdm_grid_new(4, 24, 13, ptr::null(), 0, &mut h) }, VdmStatus::Ok);
    let (mut w, mut hh) = (0, 0);
    assert_eq!(unsafe { vdm_grid_dims(h, &mut w, &mut hh) }, VdmStatus::Ok);
    assert_eq!((w, hh), (24, 13));
    let mut values = vec![0.0; w * hh];
    assert_eq!(unsafe { vdm_grid_values(h, values.as_mut_ptr(), 10) }, VdmStatus::BufferTooSmall);
    assert_eq!(unsafe { vdm_grid_values(h, values.as_mut_ptr(), values.len()) }, VdmStatus::Ok);
    assert!(values.iter().all(|v| v.is_finite()));

    let dir = std::env::temp_dir().join(format!("vdm-capi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("grid.csv");
    let c_path = CString::new(path.to_str().unwrap()).unwrap();
    assert_eq!(unsafe { vdm_grid_write_csv(h, c_path.as_ptr()) }, VdmStatus::Ok);
    let csv = std::fs::read_to_string(&path).unwrap();
    assert_eq!(csv.lines().count(), 24 * 13 + 1);
    let missing = CString::new(dir.join("no/such/dir/grid.csv").to_str().unwrap()).unwrap();
    assert_eq!(unsafe { vdm_grid_write_csv(h, missing.as_ptr()) }, VdmStatus::IoError);
    std::fs::remove_dir_all(&dir).unwrap();
    unsafe { vdm_grid_free(h) };

    let a = [0u32, 1, 3];
    assert_eq!(unsafe { vdm_grid_new(3, 24, 13, a.as_ptr(), 3, &mut h) }, VdmStatus::Ok);
    unsafe { vdm_grid_free(h) };
    assert_eq!(unsafe { vdm_grid_new(4, 24, 13, a.as_ptr(), 3, &mut h) }, VdmStatus::InvalidArgument);
    assert_eq!(unsafe { vdm_grid_new(8, 24, 13, ptr::null(), 0, &mut h) }, VdmStatus::InvalidArgument);
}

#[test]
fn ratio_limit_for_e() {
    let x = [1.0, std::f64::consts::E];
    let a = [0.0, 1.0];
    let (mut ratio, mut limit) = (0.0, 0.0);
    assert_eq!(unsafe { vdm_ratio_limit(x.as_ptr(), a.as_ptr(), 2, 1e-6, &mut ratio, &mut limit) }, VdmStatus::Ok);
    assert!((limit - 1.0).abs() < 1e-15);
    assert!((ratio - 1.0).abs() < 1e-5);
    let zero = [1.0, 0.0];
    assert_eq!(
        unsafe { vdm_ratio_limit(zero.as_ptr(), a.as_ptr(), 2, 1e-3, &mut ratio, &mut limit) },
        VdmStatus::InvalidArgument
    );
}

fn header() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/vandermonde.h")).unwrap()
}

#[test]
fn header_declares_every_symbol() {
    let h = header();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| l.trim().strip_prefix("pub unsafe extern \"C\" fn ").or_else(|| l.trim().strip_prefix("pub extern \"C\" fn ")))
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exported.len() >= 17, "{exported:?}");
    for name in exported {
        assert!(h.contains(&format!(" {name}(")) || h.contains(&format!("*{name}(")), "{name} missing from header");
    }
    assert!(h.contains("typedef struct VdmGrid VdmGrid;"));
    assert!(h.contains("VDM_STATUS_BUFFER_TOO_SMALL = 4"));
}

const C_PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "vandermonde.h"

int main(void) {
    VdmExtrema *h = NULL;
    if (vdm_extrema_new(5, &h) != VDM_STATUS_OK) return 1;
    double roots[5];
    if (vdm_extrema_roots(h, roots, 5) != VDM_STATUS_OK) return 2;
    double v = 0.0, direct = 0.0, l = 0.0;
    vdm_extrema_value(h, &v, &l);
    vdm_extrema_free(h);
    if (vdm_det(roots, 5, &direct) != VDM_STATUS_OK) return 3;
    if (fabs(fabs(direct) - v) > 1e-15) return 4;
    if (vdm_det(NULL, 5, &direct) != VDM_STATUS_NULL_POINTER) return 5;
    printf("%.17g\n", v);
    return 0;
}
"#;

#[test]
fn c_program_links_against_the_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()) else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    // target/<profile>/deps/capi-* -> target/<profile>
    let profile_dir: PathBuf = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libvandermonde_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("capi");
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - 0.0029047375096555644).abs() < 1e-15);
}
