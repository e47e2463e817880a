//! C ABI for the guesswho solver.
//!
//! Every function returns a [`GwStatus`] and writes its result through an
//! out-pointer. Solve tables are opaque handles created by
//! [`gw_solve_table_new`] and released with [`gw_solve_table_free`].

use std::ffi::c_char;
use std::panic::{catch_unwind, UnwindSafe};

use guesswho::continuous::{equal_pool_advantage, fair_factor, p_infinity};
use guesswho::{
    bid_value_closed_form, classify, closed_form_value, optimal_bid, solve_dp, Error, Rational,
    Region, SolveTable,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidState = 2,
    TerminalState = 3,
    InvalidBid = 4,
    Overflow = 5,
    Domain = 6,
    OutOfTable = 7,
    Internal = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GwFraction {
    pub num: i64,
    pub den: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GwRegionKind {
    Weeds = 0,
    UpperHand = 1,
    TerminalWin = 2,
    TerminalLoss = 3,
}

/// `level` is meaningful only for `Weeds` and `UpperHand`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GwRegion {
    pub kind: GwRegionKind,
    pub level: u32,
}

/// Opaque DP table.
pub struct GwSolveTable {
    inner: SolveTable,
}

fn status_of(e: &Error) -> GwStatus {
    match e {
        Error::InvalidState { .. } => GwStatus::InvalidState,
        Error::TerminalState { .. } => GwStatus::TerminalState,
        Error::InvalidBid { .. } => GwStatus::InvalidBid,
        Error::Overflow { .. } | Error::DivisionByZero => GwStatus::Overflow,
        Error::OutOfTable { .. } => GwStatus::OutOfTable,
        _ => GwStatus::Domain,
    }
}

fn guarded<F: FnOnce() -> Result<(), GwStatus> + UnwindSafe>(f: F) -> GwStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => GwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => GwStatus::Internal,
    }
}

fn fraction(r: Rational) -> Result<GwFraction, GwStatus> {
    match (i64::try_from(r.numer()), i64::try_from(r.denom())) {
        (Ok(num), Ok(den)) => Ok(GwFraction { num, den }),
        _ => Err(GwStatus::Overflow),
    }
}

/// # Safety
/// `out` must be null or valid for a write of `T`.
unsafe fn write<T>(out: *mut T, value: T) -> Result<(), GwStatus> {
    if out.is_null() {
        return Err(GwStatus::NullPointer);
    }
    out.write(value);
    Ok(())
}

/// Region of the mover at `(n, m)`.
///
/// # Safety
/// `out` must be null or point to writable memory for a `GwRegion`.
#[no_mangle]
pub unsafe extern "C" fn gw_classify(n: u64, m: u64, out: *mut GwRegion) -> GwStatus {
    guarded(|| {
        let region = match classify(n, m).map_err(|e| status_of(&e))? {
            Region::Weeds(k) => GwRegion {
                kind: GwRegionKind::Weeds,
                level: k,
            },
            Region::UpperHand(k) => GwRegion {
                kind: GwRegionKind::UpperHand,
                level: k,
            },
            Region::TerminalWin => GwRegion {
                kind: GwRegionKind::TerminalWin,
                level: 0,
            },
            Region::TerminalLoss => GwRegion {
                kind: GwRegionKind::TerminalLoss,
                level: 0,
            },
        };
        write(out, region)
    })
}

/// Optimal winning probability of the mover at `(n, m)`.
///
/// # Safety
/// `out` must be null or point to writable memory for a `GwFraction`.
#[no_mangle]
pub unsafe extern "C" fn gw_closed_form_value(n: u64, m: u64, out: *mut GwFraction) -> GwStatus {
    guarded(|| {
        write(
            out,
            fraction(closed_form_value(n, m).map_err(|e| status_of(&e))?)?,
        )
    })
}

/// # Safety
/// `out` must be null or point to writable memory for a `uint64_t`.
#[no_mangle]
pub unsafe extern "C" fn gw_optimal_bid(n: u64, m: u64, out: *mut u64) -> GwStatus {
    guarded(|| write(out, optimal_bid(n, m).map_err(|e| status_of(&e))?.value()))
}

/// Mover's winning probability after bidding `bid` at `(n, m)` and playing
/// optimally afterwards.
///
/// # Safety
/// `out` must be null or point to writable memory for a `GwFraction`.
#[no_mangle]
pub unsafe extern "C" fn gw_bid_value(n: u64, m: u64, bid: u64, out: *mut GwFraction) -> GwStatus {
    guarded(|| {
        let v = bid_value_closed_form(n, m, bid).map_err(|e| status_of(&e))?;
        write(out, fraction(v)?)
    })
}

/// # Safety
/// `out` must be null or point to writable memory for a `double`.
#[no_mangle]
pub unsafe extern "C" fn gw_p_infinity(x: f64, y: f64, out: *mut f64) -> GwStatus {
    guarded(|| write(out, p_infinity(x, y).map_err(|e| status_of(&e))?))
}

/// # Safety
/// `out` must be null or point to writable memory for a `double`.
#[no_mangle]
pub unsafe extern "C" fn gw_fair_factor(beta: f64, out: *mut f64) -> GwStatus {
    guarded(|| {
        write(
            out,
            fair_factor(beta).map_err(|e| status_of(&e))?.fair_factor,
        )
    })
}

/// # Safety
/// `out` must be null or point to writable memory for a `double`.
#[no_mangle]
pub unsafe extern "C" fn gw_equal_pool_advantage(alpha: f64, out: *mut f64) -> GwStatus {
    guarded(|| write(out, equal_pool_advantage(alpha).map_err(|e| status_of(&e))?))
}

/// Solves every state with `n + m <= max_sum` and stores a new handle in `out`.
///
/// # Safety
/// `out` must be null or point to writable memory for a pointer.
#[no_mangle]
pub unsafe extern "C" fn gw_solve_table_new(max_sum: u64, out: *mut *mut GwSolveTable) -> GwStatus {
    guarded(|| {
        if out.is_null() {
            return Err(GwStatus::NullPointer);
        }
        let inner = solve_dp(max_sum).map_err(|e| status_of(&e))?;
        write(out, Box::into_raw(Box::new(GwSolveTable { inner })))
    })
}

/// # Safety
/// `table` must be null or a live handle from [`gw_solve_table_new`]; `out`
/// must be null or point to writable memory for a `GwFraction`.
#[no_mangle]
pub unsafe extern "C" fn gw_solve_table_value(
    table: *const GwSolveTable,
    n: u64,
    m: u64,
    out: *mut GwFraction,
) -> GwStatus {
    guarded(|| {
        let table = table.as_ref().ok_or(GwStatus::NullPointer)?;
        let v = table.inner.value(n, m).map_err(|e| status_of(&e))?;
        write(out, fraction(v)?)
    })
}

/// Copies up to `capacity` maximizing bids at `(n, m)` into `bids`, in
/// ascending order, and stores the total count in `count`. Call with
/// `capacity = 0` to query the count.
///
/// # Safety
/// `table` must be null or a live handle; `bids` must be valid for
/// `capacity` writes when `capacity > 0`; `count` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn gw_solve_table_bids(
    table: *const GwSolveTable,
    n: u64,
    m: u64,
    bids: *mut u64,
    capacity: usize,
    count: *mut usize,
) -> GwStatus {
    guarded(|| {
        let table = table.as_ref().ok_or(GwStatus::NullPointer)?;
        let all = table.inner.bids(n, m).map_err(|e| status_of(&e))?;
        if capacity > 0 {
            if bids.is_null() {
                return Err(GwStatus::NullPointer);
            }
            let k = capacity.min(all.len());
            std::ptr::copy_nonoverlapping(all.as_ptr(), bids, k);
        }
        write(count, all.len())
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `table` must be null or a handle from [`gw_solve_table_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gw_solve_table_free(table: *mut GwSolveTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn gw_status_message(status: GwStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        GwStatus::Ok => b"ok\0",
        GwStatus::NullPointer => b"null pointer argument\0",
        GwStatus::InvalidState => b"invalid state\0",
        GwStatus::TerminalState => b"state is terminal\0",
        GwStatus::InvalidBid => b"bid out of range\0",
        GwStatus::Overflow => b"result does not fit\0",
        GwStatus::Domain => b"argument out of domain\0",
        GwStatus::OutOfTable => b"state outside the solved table\0",
        GwStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}
