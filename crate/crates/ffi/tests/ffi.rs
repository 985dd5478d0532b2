use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use mukai_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(p: *mut c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_string();
    mk_string_free(p);
    s
}

unsafe fn last_code() -> String {
    CStr::from_ptr(mk_last_error_code()).to_str().unwrap().to_string()
}

const TRIPLE: &str = r#"{"surface":{"kind":"Abelian","ns":{"rank":1,"gram":[[2]]},"ample":[1]},
"v":{"r":2,"c":[0],"s":-2},"H":[1]}"#;

#[test]
fn surface_handles() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(mk_surface_new(cs("abelian-elliptic").as_ptr(), &mut s), MkStatus::Ok);
        let (mut rho, mut kind) = (0usize, MkSurfaceKind::K3);
        assert_eq!(mk_surface_rho(s, &mut rho), MkStatus::Ok);
        assert_eq!(mk_surface_kind(s, &mut kind), MkStatus::Ok);
        assert_eq!((rho, kind), (2, MkSurfaceKind::Abelian));
        let mut json = ptr::null_mut();
        assert_eq!(mk_surface_to_json(s, &mut json), MkStatus::Ok);
        let json = take(json);
        mk_surface_free(s);

        // The JSON form builds an equal handle.
        let mut t = ptr::null_mut();
        assert_eq!(mk_surface_new(cs(&json).as_ptr(), &mut t), MkStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(mk_surface_to_json(t, &mut again), MkStatus::Ok);
        assert_eq!(take(again), json);
        mk_surface_free(t);
        mk_surface_free(ptr::null_mut());
    }
}

#[test]
fn pairing_and_walls() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(mk_surface_new(cs("k3-elliptic").as_ptr(), &mut s), MkStatus::Ok);
        let mut out = ptr::null_mut();
        let v = cs("2,(1,2),1");
        assert_eq!(mk_mukai_pairing(s, v.as_ptr(), v.as_ptr(), &mut out), MkStatus::Ok);
        assert_eq!(take(out), "-2");

        assert_eq!(mk_walls(s, v.as_ptr(), ptr::null(), &mut out), MkStatus::Ok);
        let all: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(all.as_array().unwrap().len(), 10);

        assert_eq!(mk_walls(s, v.as_ptr(), cs("1,3").as_ptr(), &mut out), MkStatus::Ok);
        let through: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(through[0]["D"], serde_json::json!([1, -1]));
        mk_surface_free(s);
    }
}

#[test]
fn reduce_and_verify() {
    unsafe {
        let mut trace = ptr::null_mut();
        assert_eq!(mk_reduce(cs(TRIPLE).as_ptr(), ptr::null(), &mut trace), MkStatus::Ok);
        let trace = take(trace);
        let mut report = ptr::null_mut();
        assert_eq!(mk_verify(cs(&trace).as_ptr(), &mut report), MkStatus::Ok);
        let r: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(r["pass"], true);

        let mut bad: serde_json::Value = serde_json::from_str(&trace).unwrap();
        bad["end"]["v"]["s"] = serde_json::json!(2);
        assert_eq!(mk_verify(cs(&bad.to_string()).as_ptr(), &mut report), MkStatus::Rejected);
        assert_eq!(last_code(), "verification_failed");
        let r: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
        assert_eq!(r["pass"], false);

        let cfg = cs(r#"{"no_such_field": 1}"#);
        let mut out = ptr::null_mut();
        assert_eq!(mk_reduce(cs(TRIPLE).as_ptr(), cfg.as_ptr(), &mut out), MkStatus::Parse);
    }
}

#[test]
fn status_codes() {
    unsafe {
        let mut b2 = 0usize;
        assert_eq!(mk_resolution_b2(MkSurfaceKind::K3, &mut b2), MkStatus::Ok);
        assert_eq!(b2, 24);
        assert_eq!(mk_resolution_b2(MkSurfaceKind::Abelian, &mut b2), MkStatus::Ok);
        assert_eq!(b2, 8);
        assert_eq!(mk_resolution_b2(MkSurfaceKind::K3, ptr::null_mut()), MkStatus::NullArgument);

        let mut s = ptr::null_mut();
        assert_eq!(mk_surface_new(cs("not-a-preset").as_ptr(), &mut s), MkStatus::Parse);
        assert_eq!(last_code(), "parse_error");
        let odd = cs(r#"{"kind":"K3","ns":{"rank":1,"gram":[[3]]},"ample":[1]}"#);
        assert_eq!(mk_surface_new(odd.as_ptr(), &mut s), MkStatus::Parse);
        assert_eq!(mk_surface_new(ptr::null(), &mut s), MkStatus::NullArgument);
        let bad_utf8 = [0xffu8, 0xfe, 0];
        assert_eq!(mk_surface_new(bad_utf8.as_ptr().cast(), &mut s), MkStatus::InvalidUtf8);

        let mut t = ptr::null_mut();
        assert_eq!(mk_reduce(cs(&TRIPLE.replace("-2}", "-4}")).as_ptr(), ptr::null(), &mut t), MkStatus::Domain);
        assert_eq!(last_code(), "invalid_ols_triple");
        assert!(!CStr::from_ptr(mk_last_error_message()).to_bytes().is_empty());
    }
}

/// Compiles a small C program against the generated header and the static
/// library. Skipped when no C compiler is on the path.
#[test]
fn c_program_links_against_the_header() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let exe = std::env::current_exe().unwrap();
    let lib_dir = exe.parent().unwrap().parent().unwrap();
    let lib = lib_dir.join("libmukai_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "mukai.h"
int main(void) {
    MkSurface *s = NULL;
    char *out = NULL;
    size_t b2 = 0;
    if (mk_surface_new("k3-elliptic", &s) != MK_STATUS_OK) return 1;
    if (mk_norm_bound(s, "2,(1,2),1", &out) != MK_STATUS_OK) return 2;
    if (strcmp(out, "6") != 0) return 3;
    mk_string_free(out);
    if (mk_norm_bound(s, "1,(1,0),0", &out) != MK_STATUS_DOMAIN) return 4;
    if (strcmp(mk_last_error_code(), "rank_too_small") != 0) return 5;
    mk_surface_free(s);
    if (mk_resolution_b2(MK_SURFACE_KIND_ABELIAN, &b2) != MK_STATUS_OK || b2 != 8) return 6;
    printf("%s\n", mk_version());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.join("smoke");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke test exited {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), env!("CARGO_PKG_VERSION"));
    std::fs::remove_dir_all(&dir).ok();
}

fn tempfile_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("mukai-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
