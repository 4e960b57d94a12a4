use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use fairstop_ffi::*;

const RIGHT_ARC: &str = r#"{"dists":[{"points":[1.0],"masses":[1.0]},{"points":[0.0,1.0],"masses":[0.8,0.2]}]}"#;

fn load(json: &str) -> *mut FairstopInstance {
    let text = CString::new(json).unwrap();
    let mut inst = ptr::null_mut();
    assert_eq!(unsafe { fairstop_instance_from_json(text.as_ptr(), &mut inst) }, FAIRSTOP_OK);
    inst
}

fn last_error() -> String {
    let p = fairstop_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn solve_right_arc_round_trip() {
    let inst = load(RIGHT_ARC);
    unsafe {
        assert_eq!(fairstop_instance_n(inst), 2);
        let mut em = 0.0;
        assert_eq!(fairstop_expected_max(inst, &mut em), FAIRSTOP_OK);
        assert!((em - 1.0).abs() < 1e-12);

        let mut pol = ptr::null_mut();
        assert_eq!(
            fairstop_solve(inst, FAIRSTOP_SETTING_ONLINE_IIF, ptr::null(), 0, &mut pol),
            FAIRSTOP_OK
        );
        assert!((fairstop_policy_objective(pol) - 0.6).abs() < 1e-9);
        assert!(fairstop_last_error_message().is_null());

        let mut json = ptr::null_mut();
        assert_eq!(fairstop_policy_to_json(pol, &mut json), FAIRSTOP_OK);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        let back: fairstop::FairPolicy = serde_json::from_str(&text).unwrap();
        assert_eq!(back.kind, fairstop::PolicyKind::Iif);
        fairstop_string_free(json);
        fairstop_policy_free(pol);

        let order = [2u32, 1];
        let mut pol = ptr::null_mut();
        assert_eq!(
            fairstop_solve(inst, FAIRSTOP_SETTING_MUST_HIRE_TIF, order.as_ptr(), 2, &mut pol),
            FAIRSTOP_OK
        );
        assert!(fairstop_policy_objective(pol).is_finite());
        fairstop_policy_free(pol);
        fairstop_instance_free(inst);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut inst = ptr::null_mut();
        assert_eq!(fairstop_instance_from_json(ptr::null(), &mut inst), FAIRSTOP_ERR_NULL_POINTER);
        assert!(inst.is_null());
        let bad = CString::new("{\"dists\": 3}").unwrap();
        assert_eq!(fairstop_instance_from_json(bad.as_ptr(), &mut inst), FAIRSTOP_ERR_PARSE);
        assert!(!last_error().is_empty());
        let bad_utf8 = [0xffu8, 0];
        assert_eq!(
            fairstop_instance_from_json(bad_utf8.as_ptr().cast(), &mut inst),
            FAIRSTOP_ERR_INVALID_UTF8
        );

        let inst = load(RIGHT_ARC);
        let mut pol = ptr::null_mut();
        assert_eq!(fairstop_solve(inst, 99, ptr::null(), 0, &mut pol), FAIRSTOP_ERR_INVALID_ARGUMENT);
        let order = [1u32, 1];
        assert_eq!(
            fairstop_solve(inst, FAIRSTOP_SETTING_ONLINE_IIF, order.as_ptr(), 2, &mut pol),
            FAIRSTOP_ERR_INVALID_ARGUMENT
        );
        let order = [1u32, 2, 3];
        assert_eq!(
            fairstop_solve(inst, FAIRSTOP_SETTING_ONLINE_IIF, order.as_ptr(), 3, &mut pol),
            FAIRSTOP_ERR_INVALID_ARGUMENT
        );
        assert!(pol.is_null());
        assert_eq!(fairstop_expected_max(ptr::null(), &mut 0.0), FAIRSTOP_ERR_NULL_POINTER);
        assert_eq!(fairstop_instance_n(ptr::null()), 0);
        assert!(fairstop_policy_objective(ptr::null()).is_nan());
        fairstop_instance_free(inst);
        fairstop_instance_free(ptr::null_mut());
        fairstop_policy_free(ptr::null_mut());
        fairstop_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/fairstop.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "fairstop_instance_from_json",
        "fairstop_instance_free",
        "fairstop_instance_n",
        "fairstop_expected_max",
        "fairstop_solve",
        "fairstop_policy_objective",
        "fairstop_policy_to_json",
        "fairstop_string_free",
        "fairstop_policy_free",
        "fairstop_last_error_message",
        "FAIRSTOP_ERR_INFEASIBLE",
        "typedef struct FairstopInstance FairstopInstance",
    ] {
        assert!(text.contains(name), "header lacks {name}");
    }
    // Syntax-check as C when a compiler is around.
    if let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).output() {
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
