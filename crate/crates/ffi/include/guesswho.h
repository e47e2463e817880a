#ifndef GUESSWHO_H
#define GUESSWHO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GwStatus {
  GW_STATUS_OK = 0,
  GW_STATUS_NULL_POINTER = 1,
  GW_STATUS_INVALID_STATE = 2,
  GW_STATUS_TERMINAL_STATE = 3,
  GW_STATUS_INVALID_BID = 4,
  GW_STATUS_OVERFLOW = 5,
  GW_STATUS_DOMAIN = 6,
  GW_STATUS_OUT_OF_TABLE = 7,
  GW_STATUS_INTERNAL = 8,
} GwStatus;

typedef enum GwRegionKind {
  GW_REGION_KIND_WEEDS = 0,
  GW_REGION_KIND_UPPER_HAND = 1,
  GW_REGION_KIND_TERMINAL_WIN = 2,
  GW_REGION_KIND_TERMINAL_LOSS = 3,
} GwRegionKind;

// Opaque DP table.
typedef struct GwSolveTable GwSolveTable;

// `level` is meaningful only for `Weeds` and `UpperHand`.
typedef struct GwRegion {
  enum GwRegionKind kind;
  uint32_t level;
} GwRegion;

typedef struct GwFraction {
  int64_t num;
  int64_t den;
} GwFraction;

// Region of the mover at `(n, m)`.
//
// # Safety
// `out` must be null or point to writable memory for a `GwRegion`.
enum GwStatus gw_classify(uint64_t n, uint64_t m, struct GwRegion *out);

// Optimal winning probability of the mover at `(n, m)`.
//
// # Safety
// `out` must be null or point to writable memory for a `GwFraction`.
enum GwStatus gw_closed_form_value(uint64_t n, uint64_t m, struct GwFraction *out);

// # Safety
// `out` must be null or point to writable memory for a `uint64_t`.
enum GwStatus gw_optimal_bid(uint64_t n, uint64_t m, uint64_t *out);

// Mover's winning probability after bidding `bid` at `(n, m)` and playing
// optimally afterwards.
//
// # Safety
// `out` must be null or point to writable memory for a `GwFraction`.
enum GwStatus gw_bid_value(uint64_t n, uint64_t m, uint64_t bid, struct GwFraction *out);

// # Safety
// `out` must be null or point to writable memory for a `double`.
enum GwStatus gw_p_infinity(double x, double y, double *out);

// # Safety
// `out` must be null or point to writable memory for a `double`.
enum GwStatus gw_fair_factor(double beta, double *out);

// # Safety
// `out` must be null or point to writable memory for a `double`.
enum GwStatus gw_equal_pool_advantage(double alpha, double *out);

// Solves every state with `n + m <= max_sum` and stores a new handle in `out`.
//
// # Safety
// `out` must be null or point to writable memory for a pointer.
enum GwStatus gw_solve_table_new(uint64_t max_sum, struct GwSolveTable **out);

// # Safety
// `table` must be null or a live handle from [`gw_solve_table_new`]; `out`
// must be null or point to writable memory for a `GwFraction`.
enum GwStatus gw_solve_table_value(const struct GwSolveTable *table,
                                   uint64_t n,
                                   uint64_t m,
                                   struct GwFraction *out);

// Copies up to `capacity` maximizing bids at `(n, m)` into `bids`, in
// ascending order, and stores the total count in `count`. Call with
// `capacity = 0` to query the count.
//
// # Safety
// `table` must be null or a live handle; `bids` must be valid for
// `capacity` writes when `capacity > 0`; `count` must be null or writable.
enum GwStatus gw_solve_table_bids(const struct GwSolveTable *table,
                                  uint64_t n,
                                  uint64_t m,
                                  uint64_t *bids,
                                  size_t capacity,
                                  size_t *count);

// Releases a handle. Null is ignored.
//
// # Safety
// `table` must be null or a handle from [`gw_solve_table_new`] not yet freed.
void gw_solve_table_free(struct GwSolveTable *table);

// Static, NUL-terminated description of a status code.
const char *gw_status_message(enum GwStatus status);

#endif  /* GUESSWHO_H */
