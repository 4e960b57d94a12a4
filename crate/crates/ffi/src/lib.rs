//! C ABI over the fairstop solver.
//!
//! Handles are opaque and owned by the caller once returned; free them with
//! the matching `*_free`. Every fallible call returns a status code and
//! leaves a message for [`fairstop_last_error_message`] on failure. Panics
//! never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fairstop::lp::{solve_setting, Setting};
use fairstop::{ArrivalOrder, FairPolicy, Instance, InstanceFile, LpError};

/// Parsed problem instance.
pub struct FairstopInstance {
    inner: Instance,
    order: Option<ArrivalOrder>,
}

/// Solved policy with its objective.
pub struct FairstopPolicy {
    inner: FairPolicy,
}

pub const FAIRSTOP_OK: i32 = 0;
pub const FAIRSTOP_ERR_NULL_POINTER: i32 = 1;
pub const FAIRSTOP_ERR_INVALID_UTF8: i32 = 2;
pub const FAIRSTOP_ERR_PARSE: i32 = 3;
pub const FAIRSTOP_ERR_INVALID_ARGUMENT: i32 = 4;
pub const FAIRSTOP_ERR_INFEASIBLE: i32 = 5;
pub const FAIRSTOP_ERR_INTERNAL: i32 = 6;

pub const FAIRSTOP_SETTING_ONLINE_IIF: i32 = 0;
pub const FAIRSTOP_SETTING_ONLINE_TIF: i32 = 1;
pub const FAIRSTOP_SETTING_OFFLINE_RELAXATION: i32 = 2;
pub const FAIRSTOP_SETTING_MUST_HIRE_IIF: i32 = 3;
pub const FAIRSTOP_SETTING_MUST_HIRE_TIF: i32 = 4;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(i32, String);

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FAIRSTOP_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            FAIRSTOP_ERR_INTERNAL
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(FAIRSTOP_ERR_NULL_POINTER, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(FAIRSTOP_ERR_INVALID_UTF8, format!("{what}: {e}")))
}

unsafe fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn setting_from_code(code: i32) -> Result<Setting, Failure> {
    Ok(match code {
        FAIRSTOP_SETTING_ONLINE_IIF => Setting::OnlineIif,
        FAIRSTOP_SETTING_ONLINE_TIF => Setting::OnlineTif,
        FAIRSTOP_SETTING_OFFLINE_RELAXATION => Setting::OfflineRelaxation,
        FAIRSTOP_SETTING_MUST_HIRE_IIF => Setting::MustHireIif,
        FAIRSTOP_SETTING_MUST_HIRE_TIF => Setting::MustHireTif,
        other => return Err(Failure(FAIRSTOP_ERR_INVALID_ARGUMENT, format!("unknown setting {other}"))),
    })
}

fn lp_failure(e: LpError) -> Failure {
    let code = match e {
        LpError::Infeasible => FAIRSTOP_ERR_INFEASIBLE,
        _ => FAIRSTOP_ERR_INVALID_ARGUMENT,
    };
    Failure(code, e.to_string())
}

/// Parses an instance JSON (`{"dists": [...], "order": [...]}`, order
/// optional and 1-based).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fairstop_instance_from_json(json: *const c_char, out: *mut *mut FairstopInstance) -> i32 {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        let file = InstanceFile::parse(text).map_err(|e| Failure(FAIRSTOP_ERR_PARSE, e.to_string()))?;
        *out = Box::into_raw(Box::new(FairstopInstance {
            inner: file.instance,
            order: file.order,
        }));
        Ok(())
    })
}

/// # Safety
/// `instance` must come from [`fairstop_instance_from_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn fairstop_instance_free(instance: *mut FairstopInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// Number of candidates, or 0 for a null handle.
///
/// # Safety
/// `instance` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fairstop_instance_n(instance: *const FairstopInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.n())
}

/// # Safety
/// `instance` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fairstop_expected_max(instance: *const FairstopInstance, out: *mut f64) -> i32 {
    guard(|| {
        let inst = handle(instance, "instance")?;
        *out_arg(out, "out")? = inst.inner.expected_max();
        Ok(())
    })
}

/// Solves one program. `order` holds `order_len` 1-based positions; pass a
/// null pointer to use the instance's own order (or the identity).
///
/// # Safety
/// `instance` must be a live handle; `order` must point to `order_len`
/// readable values or be null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fairstop_solve(
    instance: *const FairstopInstance,
    setting: i32,
    order: *const u32,
    order_len: usize,
    out: *mut *mut FairstopPolicy,
) -> i32 {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let inst = handle(instance, "instance")?;
        let setting = setting_from_code(setting)?;
        let order = if order.is_null() {
            inst.order
                .clone()
                .unwrap_or_else(|| ArrivalOrder::identity(inst.inner.n()))
        } else {
            let raw: Vec<usize> = std::slice::from_raw_parts(order, order_len)
                .iter()
                .map(|&k| k as usize)
                .collect();
            ArrivalOrder::from_one_based(&raw).map_err(|e| Failure(FAIRSTOP_ERR_INVALID_ARGUMENT, e.to_string()))?
        };
        order
            .check_for(&inst.inner)
            .map_err(|e| Failure(FAIRSTOP_ERR_INVALID_ARGUMENT, e.to_string()))?;
        let solved = solve_setting(&inst.inner, setting, &order).map_err(lp_failure)?;
        *out = Box::into_raw(Box::new(FairstopPolicy { inner: solved.policy }));
        Ok(())
    })
}

/// Optimal objective, or NaN for a null handle.
///
/// # Safety
/// `policy` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn fairstop_policy_objective(policy: *const FairstopPolicy) -> f64 {
    policy.as_ref().map_or(f64::NAN, |p| p.inner.objective_value)
}

/// Serializes the policy; free the string with [`fairstop_string_free`].
///
/// # Safety
/// `policy` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fairstop_policy_to_json(policy: *const FairstopPolicy, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let p = handle(policy, "policy")?;
        let text = serde_json::to_string(&p.inner).map_err(|e| Failure(FAIRSTOP_ERR_INTERNAL, e.to_string()))?;
        *out = CString::new(text)
            .map_err(|e| Failure(FAIRSTOP_ERR_INTERNAL, e.to_string()))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn fairstop_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `policy` must come from [`fairstop_solve`] or be null.
#[no_mangle]
pub unsafe extern "C" fn fairstop_policy_free(policy: *mut FairstopPolicy) {
    if !policy.is_null() {
        drop(Box::from_raw(policy));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn fairstop_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}
