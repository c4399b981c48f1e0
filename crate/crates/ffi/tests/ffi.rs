use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use ribbon_tcft::io::GraphJson;
use ribbon_tcft::StableRibbonGraph;
use ribbon_tcft_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { rt_string_free(s) };
    out
}

fn last_error() -> String {
    take(rt_last_error())
}

fn graph(g: &StableRibbonGraph) -> CString {
    CString::new(serde_json::to_string(&GraphJson::from_graph(g, None)).unwrap()).unwrap()
}

fn data(name: &str) -> CString {
    let p = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(name);
    CString::new(std::fs::read_to_string(p).unwrap()).unwrap()
}

struct Handles {
    alg: *mut RtAlgebra,
    hodge: *mut RtHodge,
    engine: *mut RtEngine,
}

impl Handles {
    fn new(alg: *mut RtAlgebra) -> Self {
        let mut hodge = ptr::null_mut();
        let mut engine = ptr::null_mut();
        unsafe {
            assert_eq!(rt_hodge_construct(alg, &mut hodge), RtStatus::Ok);
            assert_eq!(rt_engine_new(alg, hodge, &mut engine), RtStatus::Ok);
        }
        Handles { alg, hodge, engine }
    }
}

impl Drop for Handles {
    fn drop(&mut self) {
        unsafe {
            rt_engine_free(self.engine);
            rt_hodge_free(self.hodge);
            rt_algebra_free(self.alg);
        }
    }
}

#[test]
fn shipped_algebra_round_trip() {
    let mut alg = ptr::null_mut();
    unsafe {
        assert_eq!(
            rt_algebra_from_json(data("contractible.json").as_ptr(), &mut alg),
            RtStatus::Ok
        );
        assert_eq!(rt_algebra_dim(alg), 4);
        let mut report = ptr::null_mut();
        assert_eq!(rt_algebra_validate(alg, &mut report), RtStatus::Ok);
        assert_eq!(take(report), "{\"violations\":[]}");
        let mut hodge = ptr::null_mut();
        assert_eq!(
            rt_hodge_from_json(
                alg,
                data("contractible.alt.hodge.json").as_ptr(),
                &mut hodge
            ),
            RtStatus::Ok
        );
        assert_eq!(rt_hodge_validate(alg, hodge, ptr::null_mut()), RtStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(rt_hodge_to_json(hodge, &mut json), RtStatus::Ok);
        assert!(take(json).contains("\"pi\": []"));
        rt_hodge_free(hodge);
        rt_algebra_free(alg);
    }
}

#[test]
fn both_evaluations_agree_through_the_interface() {
    let mut alg = ptr::null_mut();
    unsafe { assert_eq!(rt_algebra_contractible(&mut alg), RtStatus::Ok) };
    let h = Handles::new(alg);
    for g in [
        StableRibbonGraph::theta_torus(),
        StableRibbonGraph::theta_planar(),
        StableRibbonGraph::figure_eight_interleaved(),
    ] {
        let json = graph(&g);
        let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
        unsafe {
            assert_eq!(
                rt_costello_value(h.engine, json.as_ptr(), &mut a),
                RtStatus::Ok
            );
            assert_eq!(
                rt_kontsevich_value(h.engine, json.as_ptr(), &mut b),
                RtStatus::Ok
            );
        }
        assert_eq!(take(a), take(b));
    }
}

#[test]
fn annulus_value_is_the_graded_dimension() {
    let annulus = graph(&StableRibbonGraph::isolated(0, 2).unwrap());
    for (make, want) in [
        (
            rt_algebra_dual_numbers as unsafe extern "C" fn(_) -> _,
            "2/1",
        ),
        (rt_algebra_contractible, "0/1"),
    ] {
        let mut alg = ptr::null_mut();
        unsafe { assert_eq!(make(&mut alg), RtStatus::Ok) };
        let h = Handles::new(alg);
        let mut v = ptr::null_mut();
        unsafe {
            assert_eq!(
                rt_cochain_value(h.engine, annulus.as_ptr(), &mut v),
                RtStatus::Ok
            );
        }
        assert_eq!(take(v), want);
    }
}

#[test]
fn table_of_values() {
    let mut alg = ptr::null_mut();
    unsafe { assert_eq!(rt_algebra_contractible(&mut alg), RtStatus::Ok) };
    let h = Handles::new(alg);
    let mut json = ptr::null_mut();
    unsafe {
        assert_eq!(
            rt_cochain_values(h.engine, 1, 1, 4, RtComplex::Linf, &mut json),
            RtStatus::Ok
        );
    }
    let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
    assert_eq!((v["g"].as_u64(), v["n"].as_u64()), (Some(1), Some(1)));
    assert!(!v["values"].as_object().unwrap().is_empty());
    unsafe {
        assert_eq!(
            rt_cochain_values(h.engine, 0, 1, 4, RtComplex::Linf, &mut json),
            RtStatus::Unstable
        );
        assert_eq!(
            rt_cochain_values(h.engine, 3, 1, 9, RtComplex::Open, &mut json),
            RtStatus::ResourceBound
        );
    }
}

#[test]
fn errors_carry_status_and_message() {
    let mut alg = ptr::null_mut();
    let bad = CString::new("{\"dim\": 2,").unwrap();
    unsafe {
        assert_eq!(
            rt_algebra_from_json(bad.as_ptr(), &mut alg),
            RtStatus::Parse
        );
        assert!(alg.is_null());
        assert!(last_error().contains("line 1"));
        assert_eq!(
            rt_algebra_from_json(ptr::null(), &mut alg),
            RtStatus::NullPointer
        );
        assert_eq!(
            rt_algebra_validate(ptr::null(), ptr::null_mut()),
            RtStatus::NullPointer
        );
        assert_eq!(rt_algebra_dim(ptr::null()), 0);
        rt_algebra_free(ptr::null_mut());
        rt_string_free(ptr::null_mut());
    }
    let skew = CString::new(
        r#"{"dim":2,"parity":[0,0],"mult":[[0,0,0,"1/1"],[0,1,1,"1/1"],[1,0,1,"1/1"]],
            "diff":[],"pairing":[[0,1,"1/1"],[1,0,"3/1"]],"unit":0}"#,
    )
    .unwrap();
    unsafe {
        assert_eq!(rt_algebra_from_json(skew.as_ptr(), &mut alg), RtStatus::Ok);
        let mut report = ptr::null_mut();
        assert_eq!(
            rt_algebra_validate(alg, &mut report),
            RtStatus::AxiomViolation
        );
        assert!(take(report).contains("pairing_graded_symmetric"));
        assert!(last_error().contains("pairing_graded_symmetric"));
        rt_algebra_free(alg);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(rt_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Directory holding the library artifacts next to this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_compiles_and_links_from_c() {
    let lib = artifact_dir().join("libribbon_tcft_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler unavailable");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include <string.h>
#include "ribbon_tcft.h"

int main(void) {
    RtAlgebra *alg = NULL;
    RtHodge *hodge = NULL;
    RtEngine *engine = NULL;
    char *value = NULL;
    const char *annulus =
        "{\"half_edges\":0,\"edges\":[],\"vertices\":[{\"genus\":0,\"cycles\":[[],[]]}],"
        "\"coloring\":{\"white\":[]}}";
    if (rt_algebra_dual_numbers(&alg) != RT_STATUS_OK) return 1;
    if (rt_hodge_construct(alg, &hodge) != RT_STATUS_OK) return 2;
    if (rt_engine_new(alg, hodge, &engine) != RT_STATUS_OK) return 3;
    if (rt_costello_value(engine, annulus, &value) != RT_STATUS_OK) return 4;
    int ok = strcmp(value, "2/1") == 0;
    rt_string_free(value);
    if (rt_algebra_from_json("{", &alg) != RT_STATUS_PARSE) return 5;
    char *msg = rt_last_error();
    ok = ok && msg != NULL;
    rt_string_free(msg);
    rt_engine_free(engine);
    rt_hodge_free(hodge);
    rt_algebra_free(alg);
    return ok ? 0 : 6;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("smoke");
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(Command::new(&exe).status().unwrap().code(), Some(0));
}
