//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Run with `cargo test --release --test acceptance`.

use std::time::Instant;

use guesswho::continuous::{equal_pool_advantage, fair_factor};
use guesswho::export::{continuous_heatmap_csv, heatmap_csv, ContinuousGrid};
use guesswho::simulation::{
    estimate_escape, estimate_win_prob, simulate_continuous, to_big, BuiltinStrategy,
    ContinuousConfig, PolicyTable, SimConfig,
};
use guesswho::verify::{verify_all, VerificationReport, Violation};
use guesswho::{bid_value_closed_form, closed_form_value, Rational};

const MAX_SUM: u64 = 128;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn r(n: i128, d: i128) -> Rational {
    Rational::new(n, d).unwrap()
}

fn count(report: &VerificationReport, pick: fn(&Violation) -> bool) -> usize {
    report.violations.iter().filter(|v| pick(v)).count()
}

fn exact_equivalence(report: &VerificationReport, secs: f64) -> Outcome {
    let bad = count(report, |v| matches!(v, Violation::Value { .. }));
    outcome(
        bad == 0 && report.checks.values == report.states && secs < 120.0,
        format!(
            "{} states with n+m <= {MAX_SUM}, {bad} value mismatches, solved and checked in {secs:.1}s",
            report.checks.values
        ),
    )
}

fn maximizer_membership(report: &VerificationReport) -> Outcome {
    let bad = count(report, |v| {
        matches!(
            v,
            Violation::Maximizer { .. } | Violation::CaseTwoDeficit { .. }
        )
    });
    let b3 = bid_value_closed_form(7, 4, 3).unwrap();
    let p = closed_form_value(7, 4).unwrap();
    let gap = p.checked_sub(&b3).unwrap();
    let ok = bad == 0 && b3 == r(2, 7) && gap == r(1, 14) && gap == r(2, 7 * 4);
    outcome(
        ok,
        format!(
            "{} non-terminal states, {} deficit bids checked, {bad} violations; bid_value(7,4,3) = {b3}, p*(7,4) - that = {gap}",
            report.checks.maximizers, report.checks.case_two_bids
        ),
    )
}

fn correction_identity(report: &VerificationReport) -> Outcome {
    let bad = count(report, |v| matches!(v, Violation::Correction { .. }));
    outcome(
        bad == 0 && report.checks.corrections > 0,
        format!("{} states, {bad} mismatches", report.checks.corrections),
    )
}

fn continuous_results() -> Outcome {
    let report =
        simulate_continuous(&ContinuousConfig::new(4.0, 2.0, 1_000_000, 20_240_101)).unwrap();
    let loss = report.loss_report();
    let z_loss = loss.z_score(2.0 / 3.0);
    let escape = estimate_escape(4.0, 2.0, 1_000_000, 1e-9, 20_240_102, None).unwrap();
    let z_escape = escape.z_score(0.5);
    let ok = z_loss <= 4.0 && report.undecided_fraction < 1e-6 && z_escape <= 4.0;
    outcome(
        ok,
        format!(
            "loss from (4,2) {:.6} (z={z_loss:.2}), undecided {:e}; escape at alpha=4 {:.6} (z={z_escape:.2})",
            loss.p_hat, report.undecided_fraction, escape.p_hat
        ),
    )
}

fn fairness_bands() -> Outcome {
    let points = 10_000u32;
    let (lo, hi) = (5.0 / 8.0 - 1e-9, 2.0 / 3.0 + 1e-9);
    let mut min = (f64::INFINITY, 0.0);
    let mut in_band = true;
    for i in 1..=points {
        let alpha = 1.0 + f64::from(i) / f64::from(points);
        let v = equal_pool_advantage(alpha).unwrap();
        in_band &= (lo..=hi).contains(&v);
        if v < min.0 {
            min = (v, alpha);
        }
    }
    let min_ok =
        (min.1 - 4.0 / 3.0).abs() <= 1.0 / f64::from(points) && (min.0 - 5.0 / 8.0).abs() <= 1e-8;

    let (clo, chi) = (4.0 / 3.0 - 1e-9, 1.5 + 1e-9);
    let mut c_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut c_ok = true;
    for i in 1..=points {
        let beta = 1.0 + f64::from(i) / f64::from(points);
        match fair_factor(beta) {
            Ok(f) => {
                c_ok &= (clo..=chi).contains(&f.fair_factor);
                c_range = (c_range.0.min(f.fair_factor), c_range.1.max(f.fair_factor));
            }
            Err(_) => c_ok = false,
        }
    }
    outcome(
        in_band && min_ok && c_ok,
        format!(
            "advantage min {:.12} at alpha={:.4}; fair factor range [{:.12}, {:.12}] over {points} betas",
            min.0, min.1, c_range.0, c_range.1
        ),
    )
}

fn heatmap_output() -> Outcome {
    let csv = heatmap_csv(32, 32).unwrap();
    let again = heatmap_csv(32, 32).unwrap();
    let rows: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    let cell = |n: usize, m: usize| &rows[(n - 1) * 32 + (m - 1)];
    let full = rows.len() == 32 * 32;
    let ones = (2..=32).all(|m| cell(1, m)[3..] == ["1", "1"]);
    let two_two = cell(2, 2)[3..] == ["1", "1"];
    let seven_four = cell(7, 4)[3..] == ["5", "14"];

    let grid = ContinuousGrid::default();
    let cont = continuous_heatmap_csv(&grid).unwrap();
    let cont_again = continuous_heatmap_csv(&grid).unwrap();
    let mut l_shaped = true;
    let mut cells = 0;
    for line in cont.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        l_shaped &=
            v[0] > 1.0 && v[1] > 1.0 && (v[0] <= 2.0 || v[1] <= 2.0) && v[2] > 0.0 && v[2] < 1.0;
        cells += 1;
    }
    let steps = grid.alpha_steps as usize;
    let below_two = steps / 3; // axis points in (1, 2] when the axis runs to 4
    let expected_cells = steps * steps - (steps - below_two) * (steps - below_two);
    let ok = full
        && ones
        && two_two
        && seven_four
        && csv == again
        && l_shaped
        && cells == expected_cells
        && cont == cont_again;
    outcome(
        ok,
        format!(
            "{} discrete cells (1,m)=1:{ones} (2,2)=1:{two_two} (7,4)=5/14:{seven_four}; {cells} L-region cells; byte-stable: {}",
            rows.len(),
            csv == again && cont == cont_again
        ),
    )
}

fn monte_carlo_consistency() -> Outcome {
    let expected = closed_form_value(16, 16).unwrap();
    let config = SimConfig {
        n: 16,
        m: 16,
        p1: BuiltinStrategy::Optimal,
        p2: BuiltinStrategy::Optimal,
        trials: 1_000_000,
        seed: 20_240_103,
        workers: None,
    };
    let report = estimate_win_prob(&config).unwrap();
    let z = report.z_score(expected.to_f64());

    let mut dominated = true;
    let mut states = 0u64;
    for s in BuiltinStrategy::ALL {
        let table = PolicyTable::build(64, &s, &BuiltinStrategy::Optimal).unwrap();
        for total in 4..=64u64 {
            for n in 2..total - 1 {
                let m = total - n;
                dominated &=
                    table.p1_value(n, m).unwrap() <= to_big(&closed_form_value(n, m).unwrap());
                states += 1;
            }
        }
    }
    let halving = PolicyTable::build(11, &BuiltinStrategy::Halving, &BuiltinStrategy::Optimal)
        .unwrap()
        .p1_value(7, 4)
        .unwrap();
    let strict = halving < to_big(&closed_form_value(7, 4).unwrap());
    outcome(
        expected == r(43, 64) && z <= 4.0 && dominated && strict,
        format!(
            "(16,16) p_hat {:.6} vs {expected} (z={z:.2}); dominance over {states} strategy-states: {dominated}; halving at (7,4) = {halving}",
            report.p_hat
        ),
    )
}

fn main() {
    let started = Instant::now();
    let report = verify_all(MAX_SUM).expect("table solves");
    let secs = started.elapsed().as_secs_f64();

    let results = [
        ("exact equivalence", exact_equivalence(&report, secs)),
        ("maximizer membership", maximizer_membership(&report)),
        ("correction identity", correction_identity(&report)),
        ("continuous results", continuous_results()),
        ("fairness bands", fairness_bands()),
        ("heatmap output", heatmap_output()),
        ("monte carlo consistency", monte_carlo_consistency()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
