use std::ffi::{CStr, CString};
use std::ptr;

use unitfrac_ffi::*;
use UfStatus::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(uf_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned();
    unsafe { uf_string_free(p) };
    s
}

#[test]
fn verify() {
    assert_eq!(uf_verify_u64(409, 104, 6544, 85072), 1);
    assert_eq!(uf_verify_u64(7, 2, 2, 2), 0);
    assert_eq!(uf_verify_u64(0, 1, 1, 1), 0);
    let s = |v: &str| CString::new(v).unwrap();
    let (n, x, y, z) = (
        s("1726201"),
        s("431566"),
        s("13447105790"),
        s("98022323785"),
    );
    let mut holds = -1;
    let st = unsafe { uf_verify_str(n.as_ptr(), x.as_ptr(), y.as_ptr(), z.as_ptr(), &mut holds) };
    assert_eq!((st, holds), (UF_OK, 1));
    let bad = s("12x");
    let st = unsafe { uf_verify_str(bad.as_ptr(), x.as_ptr(), y.as_ptr(), z.as_ptr(), &mut holds) };
    assert_eq!(st, UF_INVALID_ARGUMENT);
    assert!(last_error().contains("12x"));
    let st = unsafe { uf_verify_str(ptr::null(), x.as_ptr(), y.as_ptr(), z.as_ptr(), &mut holds) };
    assert_eq!(st, UF_NULL_POINTER);
}

#[test]
fn solve_with_defaults_and_config() {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { uf_solve(ptr::null(), 6, &mut d) }, UF_OK);
    assert_eq!(last_error(), "");
    let (mut n, mut x, mut y, mut z) = (0, 0, 0, 0);
    assert_eq!(
        unsafe { uf_decomposition_values(d, &mut n, &mut x, &mut y, &mut z) },
        UF_OK
    );
    assert_eq!((n, x, y, z), (6, 6, 6, 3));
    assert_eq!(
        take_string(unsafe { uf_decomposition_method(d) }),
        "identity:F1"
    );
    assert!(take_string(unsafe { uf_decomposition_json(d) }).starts_with("{\"n\":6,"));
    unsafe { uf_decomposition_free(d) };

    let cfg = uf_config_new();
    let m = CString::new("split,multiplier").unwrap();
    assert_eq!(unsafe { uf_config_set_methods(cfg, m.as_ptr()) }, UF_OK);
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { uf_solve(cfg, 409, &mut d) }, UF_OK);
    assert_eq!(
        take_string(unsafe { uf_decomposition_method(d) }),
        "multiplier-split"
    );
    unsafe { uf_decomposition_free(d) };

    // r1 <= 1 leaves 409 unsolved
    assert_eq!(
        unsafe { uf_config_set_bound(cfg, UfBound::UF_BOUND_R1_MAX as u32, 1) },
        UF_OK
    );
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { uf_solve(cfg, 409, &mut d) }, UF_NOT_FOUND);
    assert!(d.is_null());
    assert!(last_error().contains("409"));

    assert_eq!(
        unsafe { uf_config_set_bound(cfg, 99, 5) },
        UF_INVALID_ARGUMENT
    );
    assert_eq!(
        unsafe { uf_config_set_bound(cfg, 0, 0) },
        UF_INVALID_ARGUMENT
    );
    let bad = CString::new("split,magic").unwrap();
    assert_eq!(
        unsafe { uf_config_set_methods(cfg, bad.as_ptr()) },
        UF_INVALID_ARGUMENT
    );
    unsafe { uf_config_free(cfg) };
}

#[test]
fn solve_str_and_errors() {
    let n = CString::new("1726201").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { uf_solve_str(ptr::null(), n.as_ptr(), &mut d) },
        UF_OK
    );
    unsafe { uf_decomposition_free(d) };
    assert_eq!(
        unsafe { uf_solve(ptr::null(), 1, &mut d) },
        UF_INVALID_ARGUMENT
    );
    assert_eq!(
        unsafe { uf_solve(ptr::null(), 5, ptr::null_mut()) },
        UF_NULL_POINTER
    );

    // the identity stage alone, with no factoring budget, cannot settle this semiprime
    let toml = CString::new("methods = [\"identity\"]\nwork_budget = 1\n").unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(
        unsafe { uf_config_from_toml(toml.as_ptr(), &mut cfg) },
        UF_OK
    );
    let n = CString::new((2147483693u128 * 2147483813).to_string()).unwrap();
    assert_eq!(
        unsafe { uf_solve_str(cfg, n.as_ptr(), &mut d) },
        UF_RESOURCE_LIMIT
    );
    unsafe { uf_config_free(cfg) };

    let bad = CString::new("r1_max = 0").unwrap();
    assert_eq!(
        unsafe { uf_config_from_toml(bad.as_ptr(), &mut cfg) },
        UF_INVALID_ARGUMENT
    );
}

#[test]
fn wide_values_are_out_of_range() {
    // 4/n with n > 2^64: the triple does not fit 64-bit outputs
    let n = CString::new("36893488147419103234").unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(
        unsafe { uf_solve_str(ptr::null(), n.as_ptr(), &mut d) },
        UF_OK
    );
    let mut x = 0;
    let st = unsafe {
        uf_decomposition_values(d, ptr::null_mut(), &mut x, ptr::null_mut(), ptr::null_mut())
    };
    assert_eq!(st, UF_OUT_OF_RANGE);
    assert!(take_string(unsafe { uf_decomposition_json(d) }).contains("36893488147419103234"));
    unsafe { uf_decomposition_free(d) };
}

#[test]
fn counts() {
    let mut c = 0;
    assert_eq!(unsafe { uf_oracle_count(13, &mut c) }, UF_OK);
    assert_eq!(c, 4);
    assert_eq!(unsafe { uf_oracle_count(1, &mut c) }, UF_INVALID_ARGUMENT);
    assert_eq!(
        unsafe { uf_parametric_count(409, 1000, 1000, &mut c) },
        UF_OK
    );
    assert_eq!(c, 11);
    assert_eq!(
        unsafe { uf_parametric_count(7, 10, 10, &mut c) },
        UF_INVALID_ARGUMENT
    );
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/unitfrac.h"))
        .unwrap();
    for name in [
        "uf_last_error",
        "uf_string_free",
        "uf_config_new",
        "uf_config_from_toml",
        "uf_config_set_methods",
        "uf_config_set_bound",
        "uf_config_free",
        "uf_verify_u64",
        "uf_verify_str",
        "uf_solve",
        "uf_solve_str",
        "uf_decomposition_values",
        "uf_decomposition_method",
        "uf_decomposition_json",
        "uf_decomposition_free",
        "uf_oracle_count",
        "uf_parametric_count",
        "typedef struct UfConfig UfConfig",
        "UF_BOUND_R1_MAX",
        "UF_RESOURCE_LIMIT = 3",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}
