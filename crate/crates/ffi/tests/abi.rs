use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hamcube_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hc_last_error()) }.to_string_lossy().into_owned()
}

fn parse(text: &str) -> (HcStatus, *mut HcInstance) {
    let c = CString::new(text).unwrap();
    let mut inst = ptr::null_mut();
    let st = unsafe { hc_instance_parse(c.as_ptr(), &mut inst) };
    (st, inst)
}

#[test]
fn solve_and_verify_round_trip() {
    let (st, inst) = parse("n=5\nx=00000\ny=10000\nM: 01000-01100 00110-10110\n");
    assert_eq!(st, HcStatus::Ok, "{}", last_error());
    assert_eq!(unsafe { hc_instance_dim(inst) }, 5);
    let mut path = ptr::null_mut();
    let st = unsafe { hc_solve(inst, ptr::null(), &mut path) };
    assert_eq!(st, HcStatus::Ok, "{}", last_error());
    let len = unsafe { hc_path_len(path) };
    assert_eq!(len, 32);
    let vs = unsafe { std::slice::from_raw_parts(hc_path_vertices(path), len) }.to_vec();
    assert_eq!(unsafe { hc_verify(inst, vs.as_ptr(), len) }, HcStatus::Ok);

    let mut bad = vs.clone();
    bad.swap(3, 9);
    assert_eq!(unsafe { hc_verify(inst, bad.as_ptr(), len) }, HcStatus::Violation);
    assert!(!last_error().is_empty());

    let text = unsafe { hc_path_to_text(path) };
    assert!(!text.is_null());
    let s = unsafe { CStr::from_ptr(text) }.to_str().unwrap().to_owned();
    assert!(s.lines().any(|l| l.trim() == "00000"));
    unsafe {
        hc_string_free(text);
        hc_path_free(path);
        hc_instance_free(inst);
    }
}

#[test]
fn raw_constructor_and_config() {
    // x = 00000, y = 10000 (bit 0 is coordinate 1)
    let edges = [0b00110u64, 0b00111, 0b11000, 0b11010];
    let mut inst = ptr::null_mut();
    let st = unsafe { hc_instance_new(5, 0, 1, edges.as_ptr(), 2, &mut inst) };
    assert_eq!(st, HcStatus::Ok, "{}", last_error());
    let mut cfg = hc_config_default();
    cfg.strict = true;
    cfg.seed = 7;
    let mut path = ptr::null_mut();
    assert_eq!(unsafe { hc_solve(inst, &cfg, &mut path) }, HcStatus::Ok);
    assert_eq!(unsafe { hc_path_len(path) }, 32);
    unsafe {
        hc_path_free(path);
        hc_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    let (st, inst) = parse("n=5\nx=00000\ny=11000\n");
    assert_eq!(st, HcStatus::ParseError);
    assert!(inst.is_null());
    assert!(last_error().contains("parity"), "{}", last_error());

    let (st, _) = parse("n=4\nx=000\n");
    assert_eq!(st, HcStatus::ParseError);

    let mut inst = ptr::null_mut();
    let edges = [0u64, 3];
    assert_eq!(unsafe { hc_instance_new(5, 0, 1, edges.as_ptr(), 1, &mut inst) }, HcStatus::OutOfContract);
    assert_eq!(unsafe { hc_instance_new(0, 0, 1, ptr::null(), 0, &mut inst) }, HcStatus::OutOfContract);
    assert_eq!(unsafe { hc_instance_new(5, 0, 1, ptr::null(), 1, &mut inst) }, HcStatus::NullPointer);
    assert_eq!(unsafe { hc_instance_parse(ptr::null(), &mut inst) }, HcStatus::NullPointer);
    assert_eq!(unsafe { hc_solve(ptr::null(), ptr::null(), ptr::null_mut()) }, HcStatus::NullPointer);
    assert_eq!(unsafe { hc_path_len(ptr::null()) }, 0);
    assert!(unsafe { hc_path_to_text(ptr::null()) }.is_null());
    unsafe {
        hc_instance_free(ptr::null_mut());
        hc_path_free(ptr::null_mut());
        hc_string_free(ptr::null_mut());
    }
}

#[test]
fn small_dimension_rejected() {
    let (st, inst) = parse("n=2\nx=00\ny=10\n");
    assert_eq!(st, HcStatus::ParseError);
    assert!(inst.is_null());
    assert!(last_error().contains("at least 5"), "{}", last_error());
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(hc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/hamcube.h")).unwrap();
    assert!(header.contains("#ifndef HAMCUBE_H"));
    for sym in [
        "hc_last_error",
        "hc_version",
        "hc_config_default",
        "hc_instance_parse",
        "hc_instance_new",
        "hc_instance_free",
        "hc_instance_dim",
        "hc_solve",
        "hc_path_len",
        "hc_path_vertices",
        "hc_path_to_text",
        "hc_path_free",
        "hc_string_free",
        "hc_verify",
        "typedef struct HcInstance HcInstance",
        "typedef struct HcPath HcPath",
        "HC_STATUS_BUDGET_EXHAUSTED = 5",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
}

const C_SMOKE: &str = r#"
#include <stdio.h>
#include "hamcube.h"

int main(void) {
    HcInstance *inst = NULL;
    HcPath *path = NULL;
    if (hc_instance_parse("n=5\nx=00000\ny=10000\nM: 01000-01100\n", &inst) != HC_STATUS_OK) return 10;
    HcConfig cfg = hc_config_default();
    if (hc_solve(inst, &cfg, &path) != HC_STATUS_OK) return 11;
    size_t len = hc_path_len(path);
    if (len != 32) return 12;
    if (hc_verify(inst, hc_path_vertices(path), len) != HC_STATUS_OK) return 13;
    HcInstance *bad = NULL;
    if (hc_instance_parse("n=5\nx=00000\ny=00000\n", &bad) != HC_STATUS_PARSE_ERROR) return 14;
    if (hc_last_error()[0] == '\0') return 15;
    hc_path_free(path);
    hc_instance_free(inst);
    printf("ok %s\n", hc_version());
    return 0;
}
"#;

/// Compiles a C program against the header and static library when a C
/// compiler is available.
#[test]
fn c_program_links_and_runs() {
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libhamcube_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no static library or C compiler");
        return;
    }
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(&src, C_SMOKE).unwrap();
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
