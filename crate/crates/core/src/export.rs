//! Deterministic CSV and JSON renderings of tables, plot grids and batch
//! results. Every emitter writes into a `String` so output is byte-stable.

use std::fmt::Write;

use serde::Serialize;

use crate::continuous::{fair_factor, p_infinity};
use crate::error::{Error, Result};
use crate::rational::{format_significant, Rational};
use crate::simulation::MatrixCell;
use crate::solver::{solve_dp, SolveTable};

/// Significant digits for every decimal written by this module.
pub const DIGITS: usize = 12;

fn dec(x: f64) -> String {
    format_significant(x, DIGITS)
}

fn join_bids(bids: &[u64]) -> String {
    bids.iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join("|")
}

/// `n,m,p_num,p_den,bids` in stage order; bids are `|`-separated and empty at
/// terminal states.
pub fn table_csv(table: &SolveTable) -> String {
    let mut out = String::from("n,m,p_num,p_den,bids\n");
    for e in table.entries() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            e.n,
            e.m,
            e.value.numer(),
            e.value.denom(),
            join_bids(e.bids)
        );
    }
    out
}

#[derive(Serialize)]
struct TableRow<'a> {
    n: u64,
    m: u64,
    p: Rational,
    bids: &'a [u64],
}

#[derive(Serialize)]
struct TableDoc<'a> {
    max_sum: u64,
    states: Vec<TableRow<'a>>,
}

pub fn table_json(table: &SolveTable) -> String {
    let doc = TableDoc {
        max_sum: table.max_sum(),
        states: table
            .entries()
            .map(|e| TableRow {
                n: e.n,
                m: e.m,
                p: e.value,
                bids: e.bids,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("table serializes") + "\n"
}

/// `n,m,p,p_num,p_den` for `1 <= n <= max_n`, `1 <= m <= max_m`, row-major in
/// `n`. The undefined state `(1, 1)` is written as `nan` with empty fractions.
pub fn heatmap_csv(max_n: u64, max_m: u64) -> Result<String> {
    if max_n == 0 || max_m == 0 {
        return Err(Error::Domain("heatmap dimensions must be >= 1".into()));
    }
    let table = solve_dp((max_n + max_m).max(3))?;
    let mut out = String::from("n,m,p,p_num,p_den\n");
    for n in 1..=max_n {
        for m in 1..=max_m {
            if n == 1 && m == 1 {
                out.push_str("1,1,nan,,\n");
                continue;
            }
            let p = table.value(n, m)?;
            let _ = writeln!(
                out,
                "{n},{m},{},{},{}",
                dec(p.to_f64()),
                p.numer(),
                p.denom()
            );
        }
    }
    Ok(out)
}

/// Sampling of the scale-free continuous value over the L-shaped region
/// `{alpha > 2, 1 < beta <= 2} U {1 < alpha <= 2, beta > 1}` at level 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContinuousGrid {
    pub alpha_max: f64,
    pub beta_max: f64,
    pub alpha_steps: u32,
    pub beta_steps: u32,
}

impl ContinuousGrid {
    pub fn square(max: f64, steps: u32) -> Self {
        ContinuousGrid {
            alpha_max: max,
            beta_max: max,
            alpha_steps: steps,
            beta_steps: steps,
        }
    }
}

impl Default for ContinuousGrid {
    fn default() -> Self {
        ContinuousGrid::square(4.0, 96)
    }
}

/// `x,y,p_infinity` at `alpha = 1 + i (alpha_max - 1) / alpha_steps`,
/// `beta = 1 + j (beta_max - 1) / beta_steps` for every grid point in the
/// L-region.
pub fn continuous_heatmap_csv(grid: &ContinuousGrid) -> Result<String> {
    if !(grid.alpha_max > 2.0
        && grid.beta_max > 2.0
        && grid.alpha_max.is_finite()
        && grid.beta_max.is_finite())
    {
        return Err(Error::Domain("continuous grid bounds must exceed 2".into()));
    }
    if grid.alpha_steps == 0 || grid.beta_steps == 0 {
        return Err(Error::Domain(
            "continuous grid needs >= 1 step per axis".into(),
        ));
    }
    let mut out = String::from("x,y,p_infinity\n");
    for i in 1..=grid.alpha_steps {
        let x = 1.0 + f64::from(i) * (grid.alpha_max - 1.0) / f64::from(grid.alpha_steps);
        for j in 1..=grid.beta_steps {
            let y = 1.0 + f64::from(j) * (grid.beta_max - 1.0) / f64::from(grid.beta_steps);
            if x > 2.0 && y > 2.0 {
                continue;
            }
            let _ = writeln!(out, "{},{},{}", dec(x), dec(y), dec(p_infinity(x, y)?));
        }
    }
    Ok(out)
}

/// `beta,c` at `beta = 1 + i / points` for `i = 1..=points`.
pub fn fairness_csv(points: u32) -> Result<String> {
    if points == 0 {
        return Err(Error::Domain("fairness grid needs >= 1 point".into()));
    }
    let mut out = String::from("beta,c\n");
    for i in 1..=points {
        let beta = 1.0 + f64::from(i) / f64::from(points);
        let r = fair_factor(beta)?;
        let _ = writeln!(out, "{},{}", dec(r.beta), dec(r.fair_factor));
    }
    Ok(out)
}

/// `p1,p2,trials,wins,p_hat,std_err` for a strategy matrix.
pub fn matrix_csv(cells: &[MatrixCell]) -> String {
    let mut out = String::from("p1,p2,trials,wins,p_hat,std_err\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            c.p1,
            c.p2,
            c.report.trials,
            c.report.wins,
            dec(c.report.p_hat),
            dec(c.report.std_err)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_csv_small() {
        let csv = table_csv(&solve_dp(4).unwrap());
        assert_eq!(
            csv,
            "n,m,p_num,p_den,bids\n1,2,1,1,\n2,1,0,1,\n1,3,1,1,\n2,2,1,1,1\n3,1,0,1,\n"
        );
    }

    #[test]
    fn table_json_carries_fractions() {
        let json = table_json(&solve_dp(5).unwrap());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        let states = v["states"].as_array().unwrap();
        let s = states.iter().find(|s| s["n"] == 3 && s["m"] == 2).unwrap();
        assert_eq!(s["p"]["num"], 1);
        assert_eq!(s["p"]["den"], 3);
        assert_eq!(s["bids"], serde_json::json!([1, 2]));
    }

    #[test]
    fn heatmap_spot_checks() {
        let csv = heatmap_csv(32, 32).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 32 * 32);
        assert_eq!(lines[1], "1,1,nan,,");
        let row = |n: u64, m: u64| lines[(1 + (n - 1) * 32 + (m - 1)) as usize];
        for m in 2..=32 {
            assert!(row(1, m).ends_with(",1,1"), "{}", row(1, m));
        }
        assert!(row(2, 2).ends_with(",1,1"));
        assert_eq!(row(7, 4), "7,4,0.357142857143,5,14");
        assert_eq!(csv, heatmap_csv(32, 32).unwrap());
    }

    #[test]
    fn continuous_grid_is_l_shaped() {
        let grid = ContinuousGrid::square(4.0, 6);
        let csv = continuous_heatmap_csv(&grid).unwrap();
        // Axis points 1.5, 2, ..., 4: 2 of them <= 2, so 6*6 - 4*4 cells remain.
        assert_eq!(csv.lines().count(), 1 + 36 - 16);
        assert!(csv.contains("\n4.00000000000,2.00000000000,0.333333333333\n"));
        assert_eq!(csv, continuous_heatmap_csv(&grid).unwrap());
    }

    #[test]
    fn fairness_endpoints() {
        let csv = fairness_csv(6).unwrap();
        let last = csv.lines().last().unwrap();
        assert_eq!(last, "2.00000000000,1.33333333333");
        assert!(csv
            .lines()
            .any(|l| l.starts_with("1.33333333333,1.50000000000")));
    }
}
