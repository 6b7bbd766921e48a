use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use cas_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cas_last_error()).to_string_lossy().into_owned() }
}

fn example(n: u32) -> *mut CasChart {
    let mut chart = ptr::null_mut();
    assert_eq!(unsafe { cas_worked_example(n, &mut chart) }, CasStatus::Ok);
    chart
}

#[test]
fn eval_and_jet_of_example_one() {
    let chart = example(1);
    let mut p = [f64::NAN; 4];
    unsafe {
        assert_eq!(cas_chart_dim(chart), 3);
        assert_eq!(cas_chart_eval(chart, 1.0, 0.0, p.as_mut_ptr()), CasStatus::Ok);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p[0] - s).abs() < 1e-15 && p[1].abs() < 1e-15 && (p[2] - s).abs() < 1e-15 && p[3] == 0.0);
        let mut jet = [f64::NAN; 24];
        assert_eq!(cas_chart_jet(chart, 1.0, 0.0, jet.as_mut_ptr()), CasStatus::Ok);
        // r_uu vanishes on the ruled family
        assert!(jet[12..16].iter().all(|x| *x == 0.0));
        cas_chart_free(chart);
    }
}

#[test]
fn singular_point_sets_status_and_message() {
    let chart = example(1);
    let mut jet = [0.0; 24];
    unsafe {
        assert_eq!(cas_chart_jet(chart, -1.0, 0.0, jet.as_mut_ptr()), CasStatus::SingularPoint);
        assert!(last_error().contains("singular"), "{}", last_error());
        cas_chart_free(chart);
    }
}

#[test]
fn constructor_errors() {
    let mut chart = ptr::null_mut();
    let alpha = CString::new("bogus").unwrap();
    unsafe {
        assert_eq!(cas_e3_case1_chart(0.5, alpha.as_ptr(), &mut chart), CasStatus::InvalidArgument);
        assert!(chart.is_null());
        let cos = CString::new("cos").unwrap();
        assert_eq!(cas_e3_case1_chart(std::f64::consts::FRAC_PI_2, cos.as_ptr(), &mut chart), CasStatus::Unsupported);
        assert_eq!(cas_e3_plane_chart(3.5, &mut chart), CasStatus::InvalidArgument);
        assert_eq!(cas_worked_example(5, &mut chart), CasStatus::InvalidArgument);
        assert_eq!(cas_e3_plane_chart(0.5, ptr::null_mut()), CasStatus::NullPointer);
        assert_eq!(cas_e3_case1_chart(0.5, ptr::null(), &mut chart), CasStatus::NullPointer);
        let mut p = [0.0; 4];
        assert_eq!(cas_chart_eval(ptr::null(), 0.0, 0.0, p.as_mut_ptr()), CasStatus::NullPointer);
        cas_chart_free(ptr::null_mut());
        cas_string_free(ptr::null_mut());
    }
}

#[test]
fn curvature_in_each_space() {
    let mut c = CasCurvature { k_intrinsic: 0.0, k_extrinsic: 0.0, h: 0.0, angle: 0.0 };
    unsafe {
        let ex = example(1);
        assert_eq!(cas_chart_curvature(ex, 1.0, 0.5, &mut c), CasStatus::Ok);
        assert!((c.h - 0.25).abs() < 1e-12 && c.k_extrinsic.abs() < 1e-12);
        cas_chart_free(ex);

        let mut s = ptr::null_mut();
        assert_eq!(cas_s2r_chart(std::f64::consts::FRAC_PI_3, &mut s), CasStatus::Ok);
        assert_eq!(cas_chart_dim(s), 4);
        assert_eq!(cas_chart_curvature(s, 0.7, 1.0, &mut c), CasStatus::Ok);
        assert!((c.k_intrinsic - 0.25).abs() < 1e-4);
        assert!(c.h.is_nan() && c.k_extrinsic.is_nan());
        cas_chart_free(s);
    }
}

#[test]
fn verify_json_and_perturbation() {
    let grid = CasGrid { nu: 8, nv: 16, ..cas_grid_default() };
    unsafe {
        let ex = example(1);
        let mut json = ptr::null_mut();
        assert_eq!(cas_chart_verify_json(ex, &grid, &mut json), CasStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        cas_string_free(json);
        assert!(text.trim_end().ends_with("\"pass\": true\n}") || text.contains("\"pass\": true\n}"), "{text}");

        let mut bent = ptr::null_mut();
        assert_eq!(cas_chart_perturbed(ex, 0.01, &mut bent), CasStatus::Ok);
        assert_eq!(cas_chart_verify_json(bent, &grid, &mut json), CasStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        cas_string_free(json);
        assert!(text.trim_end().ends_with("\"pass\": false\n}"), "{text}");

        let bad = CasGrid { nu: 1, ..grid };
        assert_eq!(cas_chart_verify_json(ex, &bad, &mut json), CasStatus::InvalidArgument);
        cas_chart_free(bent);
        cas_chart_free(ex);
    }
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include").join("cas.h")
}

#[test]
fn header_declares_the_api() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in [
        "typedef struct CasChart CasChart;",
        "cas_e3_case1_chart",
        "cas_chart_jet",
        "cas_chart_verify_json",
        "cas_string_free",
        "cas_last_error",
        "CAS_STATUS_SINGULAR_POINT = 3",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

/// Builds and runs a C program against the static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let target_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = target_dir.join("libcas_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile_dir();
    let src = dir.join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "cas.h"
int main(void) {
    CasChart *chart = NULL;
    if (cas_worked_example(1, &chart) != CAS_STATUS_OK) return 10;
    double p[4];
    if (cas_chart_eval(chart, 1.0, 0.0, p) != CAS_STATUS_OK) return 11;
    double jet[24];
    if (cas_chart_jet(chart, -1.0, 0.0, jet) != CAS_STATUS_SINGULAR_POINT) return 12;
    printf("%.17g %.17g %.17g\n", p[0], p[1], p[2]);
    cas_chart_free(chart);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.join("main");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status);
    let got: Vec<f64> = String::from_utf8_lossy(&out.stdout).split_whitespace().map(|t| t.parse().unwrap()).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    assert!((got[0] - s).abs() < 1e-15 && got[1] == 0.0 && (got[2] - s).abs() < 1e-15, "{got:?}");
    std::fs::remove_dir_all(dir).ok();
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok_and(|o| o.status.success()) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cas-ffi-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
