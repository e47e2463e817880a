//! Cross-checks of the DP table against the closed forms.

use serde::Serialize;

use crate::continuous::{expected_correction, p_infinity_exact};
use crate::error::Result;
use crate::game::{classify, closed_form_value, optimal_bid, Region};
use crate::rational::Rational;
use crate::solver::{solve_dp, SolveTable};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Violation {
    /// DP value differs from the closed form.
    Value {
        n: u64,
        m: u64,
        dp: String,
        closed_form: String,
    },
    /// The closed-form bid is not among the maximizers.
    Maximizer { n: u64, m: u64, bid: u64 },
    /// A bid whose two outcomes both give the opponent the upper hand at
    /// the mover's weeds level should fall short by exactly `2/(nm)`.
    CaseTwoDeficit {
        n: u64,
        m: u64,
        bid: u64,
        deficit: String,
    },
    /// `p* - p_inf` differs from `-2/(3nm)` (weeds) or `4/(3nm)` (upper hand).
    Correction {
        n: u64,
        m: u64,
        observed: String,
        expected: String,
    },
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckCounts {
    pub values: u64,
    pub maximizers: u64,
    pub case_two_bids: u64,
    pub corrections: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub max_sum: u64,
    pub states: u64,
    pub checks: CheckCounts,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn values_and_maximizers(
    table: &SolveTable,
    counts: &mut CheckCounts,
    out: &mut Vec<Violation>,
) -> Result<()> {
    for e in table.entries() {
        let closed = closed_form_value(e.n, e.m)?;
        counts.values += 1;
        if closed != e.value {
            out.push(Violation::Value {
                n: e.n,
                m: e.m,
                dp: e.value.to_string(),
                closed_form: closed.to_string(),
            });
        }
        if e.n > 1 && e.m > 1 {
            let bid = optimal_bid(e.n, e.m)?.value();
            counts.maximizers += 1;
            if e.bids.binary_search(&bid).is_err() {
                out.push(Violation::Maximizer {
                    n: e.n,
                    m: e.m,
                    bid,
                });
            }
        }
    }
    Ok(())
}

/// DP value equals the closed form at every stored state, and the closed-form
/// bid is a maximizer at every non-terminal one.
pub fn verify_closed_form(max_sum: u64) -> Result<VerificationReport> {
    let table = solve_dp(max_sum)?;
    let mut checks = CheckCounts::default();
    let mut violations = Vec::new();
    values_and_maximizers(&table, &mut checks, &mut violations)?;
    Ok(VerificationReport {
        max_sum,
        states: table.len() as u64,
        checks,
        violations,
    })
}

/// All table checks: values, maximizers, the weeds Case II deficit and the
/// correction identity.
pub fn verify_table(table: &SolveTable) -> Result<VerificationReport> {
    let mut checks = CheckCounts::default();
    let mut violations = Vec::new();
    values_and_maximizers(table, &mut checks, &mut violations)?;

    for e in table.entries().filter(|e| e.n > 1 && e.m > 1) {
        let (n, m) = (e.n, e.m);
        let observed = e
            .value
            .checked_sub(&p_infinity_exact(n, m)?)
            .map_err(|err| err.at(n, m))?;
        let expected = expected_correction(n, m)?;
        checks.corrections += 1;
        if observed != expected {
            violations.push(Violation::Correction {
                n,
                m,
                observed: observed.to_string(),
                expected: expected.to_string(),
            });
        }

        let Region::Weeds(k) = classify(n, m)? else {
            continue;
        };
        let deficit =
            Rational::new(2, i128::from(n) * i128::from(m)).map_err(|err| err.at(n, m))?;
        for b in 1..n {
            let lands_upper = |pool: u64| classify(m, pool) == Ok(Region::UpperHand(k));
            if !(lands_upper(b) && lands_upper(n - b)) {
                continue;
            }
            checks.case_two_bids += 1;
            let gap = e
                .value
                .checked_sub(&table.bid_value(n, m, b)?)
                .map_err(|err| err.at(n, m))?;
            if gap != deficit {
                violations.push(Violation::CaseTwoDeficit {
                    n,
                    m,
                    bid: b,
                    deficit: gap.to_string(),
                });
            }
        }
    }

    Ok(VerificationReport {
        max_sum: table.max_sum(),
        states: table.len() as u64,
        checks,
        violations,
    })
}

pub fn verify_all(max_sum: u64) -> Result<VerificationReport> {
    verify_table(&solve_dp(max_sum)?)
}
