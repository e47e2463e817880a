use std::ffi::CStr;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use guesswho_ffi::*;

fn frac(num: i64, den: i64) -> GwFraction {
    GwFraction { num, den }
}

#[test]
fn scalar_functions() {
    unsafe {
        let mut f = frac(0, 0);
        assert_eq!(gw_closed_form_value(7, 4, &mut f), GwStatus::Ok);
        assert_eq!(f, frac(5, 14));
        assert_eq!(gw_bid_value(7, 4, 3, &mut f), GwStatus::Ok);
        assert_eq!(f, frac(2, 7));
        assert_eq!(gw_bid_value(7, 4, 7, &mut f), GwStatus::InvalidBid);
        assert_eq!(gw_bid_value(1, 4, 1, &mut f), GwStatus::TerminalState);

        let mut bid = 0u64;
        assert_eq!(gw_optimal_bid(24, 24, &mut bid), GwStatus::Ok);
        assert_eq!(bid, 12);

        let mut region = GwRegion {
            kind: GwRegionKind::TerminalLoss,
            level: 99,
        };
        assert_eq!(gw_classify(7, 4, &mut region), GwStatus::Ok);
        assert_eq!(
            region,
            GwRegion {
                kind: GwRegionKind::Weeds,
                level: 1
            }
        );
        assert_eq!(gw_classify(1, 1, &mut region), GwStatus::InvalidState);
        assert_eq!(gw_classify(7, 4, ptr::null_mut()), GwStatus::NullPointer);

        let mut x = 0.0;
        assert_eq!(gw_p_infinity(4.0, 2.0, &mut x), GwStatus::Ok);
        assert!((x - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(gw_p_infinity(0.5, 2.0, &mut x), GwStatus::Domain);
        assert_eq!(gw_fair_factor(2.0, &mut x), GwStatus::Ok);
        assert!((x - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(gw_equal_pool_advantage(4.0 / 3.0, &mut x), GwStatus::Ok);
        assert!((x - 0.625).abs() < 1e-12);
    }
}

#[test]
fn overflowing_fraction_is_reported() {
    let mut f = frac(0, 0);
    let big = 1u64 << 40;
    assert_eq!(
        unsafe { gw_closed_form_value(big + 1, big - 1, &mut f) },
        GwStatus::Overflow
    );
}

#[test]
fn table_handle_lifecycle() {
    unsafe {
        let mut table: *mut GwSolveTable = ptr::null_mut();
        assert_eq!(gw_solve_table_new(2, &mut table), GwStatus::Domain);
        assert!(table.is_null());
        assert_eq!(gw_solve_table_new(11, &mut table), GwStatus::Ok);
        assert!(!table.is_null());

        let mut f = frac(0, 0);
        assert_eq!(gw_solve_table_value(table, 3, 2, &mut f), GwStatus::Ok);
        assert_eq!(f, frac(1, 3));
        assert_eq!(
            gw_solve_table_value(table, 30, 2, &mut f),
            GwStatus::OutOfTable
        );

        let mut count = 0usize;
        assert_eq!(
            gw_solve_table_bids(table, 7, 4, ptr::null_mut(), 0, &mut count),
            GwStatus::Ok
        );
        assert_eq!(count, 2);
        let mut bids = [0u64; 1];
        assert_eq!(
            gw_solve_table_bids(table, 7, 4, bids.as_mut_ptr(), 1, &mut count),
            GwStatus::Ok
        );
        assert_eq!((bids[0], count), (2, 2));

        gw_solve_table_free(table);
        gw_solve_table_free(ptr::null_mut());
        assert_eq!(
            gw_solve_table_value(ptr::null(), 3, 2, &mut f),
            GwStatus::NullPointer
        );
    }
}

#[test]
fn status_messages() {
    let msg = |s| {
        unsafe { CStr::from_ptr(gw_status_message(s)) }
            .to_str()
            .unwrap()
    };
    assert_eq!(msg(GwStatus::Ok), "ok");
    assert_eq!(msg(GwStatus::OutOfTable), "state outside the solved table");
}

fn header() -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/guesswho.h");
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn header_declares_the_api() {
    let h = header();
    for name in [
        "gw_classify",
        "gw_closed_form_value",
        "gw_optimal_bid",
        "gw_bid_value",
        "gw_p_infinity",
        "gw_fair_factor",
        "gw_equal_pool_advantage",
        "gw_solve_table_new",
        "gw_solve_table_value",
        "gw_solve_table_bids",
        "gw_solve_table_free",
        "gw_status_message",
    ] {
        assert!(
            h.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(h.contains("typedef struct GwSolveTable GwSolveTable;"));
    assert!(h.contains("GW_STATUS_OK = 0"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "guesswho.h"

int main(void) {
    GwFraction f;
    if (gw_closed_form_value(9, 9, &f) != GW_STATUS_OK) return 1;
    GwSolveTable *t = NULL;
    if (gw_solve_table_new(20, &t) != GW_STATUS_OK) return 2;
    GwFraction g;
    if (gw_solve_table_value(t, 9, 9, &g) != GW_STATUS_OK) return 3;
    gw_solve_table_free(t);
    printf("%lld/%lld %lld/%lld %s\n", (long long)f.num, (long long)f.den,
           (long long)g.num, (long long)g.den, gw_status_message(gw_classify(1, 1, NULL)));
    return 0;
}
"#;

/// Builds a C program against the header and the static library.
#[test]
fn links_from_c() {
    let exe = std::env::current_exe().unwrap();
    let target_dir = exe.parent().unwrap().parent().unwrap();
    let lib = target_dir.join("libguesswho_ffi.a");
    assert!(
        lib.exists(),
        "static library not built at {}",
        lib.display()
    );
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "53/81 53/81 invalid state\n"
    );
}
