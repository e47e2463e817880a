//! The continuous game: real-valued pools played forever under the
//! bold/halving ansatz, its closed-form winning probability `p_inf`, the
//! finite-size correction against the discrete game, and first-mover
//! fairness numbers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{classify, closed_form_value, Region};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContinuousKind {
    Weeds,
    UpperHand,
}

/// `x = 2^level * alpha`, `y = 2^level * beta` with
/// weeds: `alpha > 2`, `1 < beta <= 2`; upper hand: `1 < alpha <= 2`, `beta > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContinuousRegion {
    pub kind: ContinuousKind,
    pub level: i32,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessResult {
    pub beta: f64,
    pub fair_factor: f64,
}

/// Absolute tolerance of [`fair_factor`].
pub const FAIR_FACTOR_TOLERANCE: f64 = 1e-12;

fn pow2(e: i32) -> f64 {
    2f64.powi(e)
}

/// The unique integer `k` with `2^k < v <= 2^(k+1)`, for finite `v > 0`.
pub(crate) fn level_of(v: f64) -> i32 {
    debug_assert!(v > 0.0 && v.is_finite());
    let mut k = v.log2().ceil() as i32 - 1;
    while pow2(k) >= v {
        k -= 1;
    }
    while pow2(k + 1) < v {
        k += 1;
    }
    k
}

/// Decomposition for any positive finite pools; used by the simulator, which
/// rescales states freely.
pub(crate) fn decompose_positive(x: f64, y: f64) -> ContinuousRegion {
    let (kx, ky) = (level_of(x), level_of(y));
    if kx > ky {
        let scale = pow2(-ky);
        ContinuousRegion {
            kind: ContinuousKind::Weeds,
            level: ky,
            alpha: x * scale,
            beta: y * scale,
        }
    } else {
        let scale = pow2(-kx);
        ContinuousRegion {
            kind: ContinuousKind::UpperHand,
            level: kx,
            alpha: x * scale,
            beta: y * scale,
        }
    }
}

fn check_pools(x: f64, y: f64) -> Result<()> {
    if !(x.is_finite() && y.is_finite() && x > 1.0 && y > 1.0) {
        return Err(Error::Domain(format!(
            "continuous pools must be finite and > 1, got ({x}, {y})"
        )));
    }
    Ok(())
}

pub fn decompose(x: f64, y: f64) -> Result<ContinuousRegion> {
    check_pools(x, y)?;
    Ok(decompose_positive(x, y))
}

/// `2/alpha - (4/3)/(alpha beta)`: the weeds formula in scale-free form.
pub fn weeds_branch(alpha: f64, beta: f64) -> f64 {
    2.0 / alpha - (4.0 / 3.0) / (alpha * beta)
}

/// `1 - 1/beta + (2/3)/(alpha beta)`: the upper-hand formula in scale-free form.
pub fn upper_hand_branch(alpha: f64, beta: f64) -> f64 {
    1.0 - 1.0 / beta + (2.0 / 3.0) / (alpha * beta)
}

fn p_infinity_of(region: &ContinuousRegion) -> f64 {
    match region.kind {
        ContinuousKind::Weeds => weeds_branch(region.alpha, region.beta),
        ContinuousKind::UpperHand => upper_hand_branch(region.alpha, region.beta),
    }
}

/// Winning probability of the mover in the continuous game under the ansatz.
pub fn p_infinity(x: f64, y: f64) -> Result<f64> {
    Ok(p_infinity_of(&decompose(x, y)?))
}

/// `p_inf(n, m)` in exact arithmetic at integer pools `n, m >= 2`.
///
/// For integers the continuous level coincides with the discrete one, so the
/// region comes from [`classify`].
pub fn p_infinity_exact(n: u64, m: u64) -> Result<Rational> {
    if n < 2 || m < 2 {
        return Err(Error::Domain(format!(
            "exact p_inf needs pools >= 2, got ({n}, {m})"
        )));
    }
    let overflow = || Error::Overflow { n, m };
    let (ni, mi) = (i128::from(n), i128::from(m));
    let den = ni
        .checked_mul(mi)
        .and_then(|x| x.checked_mul(3))
        .ok_or_else(overflow)?;
    let pow = |e: u32| 2i128.checked_pow(e).ok_or_else(overflow);
    let num = match classify(n, m)? {
        // 2^(k+1)/n - (2/3) 2^(2k+1)/(nm)
        Region::Weeds(k) => pow(k + 1)?
            .checked_mul(3 * mi)
            .zip(pow(2 * k + 1)?.checked_mul(2))
            .and_then(|(a, b)| a.checked_sub(b))
            .ok_or_else(overflow)?,
        // 1 - 2^k/m + (2/3) 2^(2k)/(nm)
        Region::UpperHand(k) => pow(k)?
            .checked_mul(3 * ni)
            .zip(pow(2 * k)?.checked_mul(2))
            .and_then(|(a, b)| den.checked_sub(a)?.checked_add(b))
            .ok_or_else(overflow)?,
        Region::TerminalWin | Region::TerminalLoss => unreachable!("pools >= 2"),
    };
    Rational::new(num, den).map_err(|e| e.at(n, m))
}

/// `p*(n, m) - p_inf(n, m)`, exactly.
pub fn correction_identity(n: u64, m: u64) -> Result<Rational> {
    closed_form_value(n, m)?
        .checked_sub(&p_infinity_exact(n, m)?)
        .map_err(|e| e.at(n, m))
}

/// The predicted gap: `-2/(3nm)` in the weeds, `+4/(3nm)` with the upper hand.
pub fn expected_correction(n: u64, m: u64) -> Result<Rational> {
    if n < 2 || m < 2 {
        return Err(Error::Domain(format!(
            "correction needs pools >= 2, got ({n}, {m})"
        )));
    }
    let den = i128::from(n)
        .checked_mul(i128::from(m))
        .and_then(|x| x.checked_mul(3))
        .ok_or(Error::Overflow { n, m })?;
    let num = match classify(n, m)? {
        Region::Weeds(_) => -2,
        _ => 4,
    };
    Rational::new(num, den).map_err(|e| e.at(n, m))
}

/// Probability that a player in the weeds with scaled pool `alpha` ever
/// gets out: `2 / alpha`.
pub fn escape_probability(alpha: f64) -> Result<f64> {
    if !(alpha.is_finite() && alpha > 2.0) {
        return Err(Error::Domain(format!(
            "escape probability needs alpha > 2, got {alpha}"
        )));
    }
    Ok(2.0 / alpha)
}

/// Player 1's winning probability when both pools equal `2^k alpha`.
pub fn equal_pool_advantage(alpha: f64) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!(
            "alpha must be in (1, 2], got {alpha}"
        )));
    }
    p_infinity(alpha, alpha)
}

/// The factor `c` by which Player 1's pool must exceed Player 2's pool
/// `y = beta` for an even game, `p_inf(c y, y) = 1/2`, found by bisection.
pub fn fair_factor(beta: f64) -> Result<FairnessResult> {
    if !(beta > 1.0 && beta <= 2.0) {
        return Err(Error::Domain(format!("beta must be in (1, 2], got {beta}")));
    }
    let excess = |c: f64| p_infinity(c * beta, beta).map(|p| p - 0.5);
    let (mut lo, mut hi) = (1.0f64, 3.0f64);
    // p_inf is decreasing in c on both branches.
    if !(excess(lo)? > 0.0 && excess(hi)? < 0.0) {
        return Err(Error::Bracketing { beta });
    }
    while hi - lo > FAIR_FACTOR_TOLERANCE / 4.0 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if excess(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let c = 0.5 * (lo + hi);
    if !(4.0 / 3.0 - 1e-9..=1.5 + 1e-9).contains(&c) {
        return Err(Error::Domain(format!(
            "fair factor {c} for beta {beta} left the band [4/3, 3/2]"
        )));
    }
    Ok(FairnessResult {
        beta,
        fair_factor: c,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let d = decompose(4.0, 2.0).unwrap();
        assert_eq!(
            (d.kind, d.level, d.alpha, d.beta),
            (ContinuousKind::Weeds, 0, 4.0, 2.0)
        );
        let d = decompose(8.0, 4.0).unwrap();
        assert_eq!(
            (d.kind, d.level, d.alpha, d.beta),
            (ContinuousKind::Weeds, 1, 4.0, 2.0)
        );
        let d = decompose(5.0, 4.0).unwrap();
        assert_eq!(
            (d.kind, d.level, d.alpha, d.beta),
            (ContinuousKind::Weeds, 1, 2.5, 2.0)
        );
        let d = decompose(3.0, 7.0).unwrap();
        assert_eq!(
            (d.kind, d.level, d.alpha, d.beta),
            (ContinuousKind::UpperHand, 1, 1.5, 3.5)
        );
        assert!(decompose(1.0, 3.0).is_err());
        assert!(decompose(3.0, 0.5).is_err());
        assert!(decompose(f64::NAN, 3.0).is_err());
        assert!(decompose(f64::INFINITY, 3.0).is_err());
    }

    #[test]
    fn level_boundaries() {
        assert_eq!(level_of(2.0), 0);
        assert_eq!(level_of(2.0f64.next_up()), 1);
        assert_eq!(level_of(1.0), -1);
        assert_eq!(level_of(0.25), -3);
        assert_eq!(level_of(1e300), 996);
    }

    #[test]
    fn p_infinity_examples() {
        assert!((p_infinity(4.0, 2.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(p_infinity(8.0, 4.0).unwrap(), p_infinity(4.0, 2.0).unwrap());
        assert!((p_infinity(5.0, 4.0).unwrap() - 8.0 / 15.0).abs() < 1e-15);
        assert_eq!(p_infinity_exact(4, 2).unwrap(), r(1, 3));
        assert_eq!(p_infinity_exact(5, 4).unwrap(), r(8, 15));
        assert_eq!(p_infinity_exact(7, 4).unwrap(), r(8, 21));
        assert_eq!(p_infinity_exact(5, 5).unwrap(), r(47, 75));
    }

    #[test]
    fn exact_and_float_agree_on_integers() {
        for n in 2..80u64 {
            for m in 2..80u64 {
                let exact = p_infinity_exact(n, m).unwrap().to_f64();
                let float = p_infinity(n as f64, m as f64).unwrap();
                assert!((exact - float).abs() < 1e-14, "({n}, {m})");
            }
        }
    }

    #[test]
    fn scale_invariance_is_exact() {
        for &(x, y) in &[
            (4.0, 2.0),
            (5.0, 4.0),
            (1.3, 7.9),
            (17.25, 3.5),
            (1.01, 1.02),
        ] {
            let base = p_infinity(x, y).unwrap();
            for j in 0..40 {
                let s = pow2(j);
                assert_eq!(p_infinity(x * s, y * s).unwrap(), base);
            }
        }
    }

    #[test]
    fn branches_meet_on_boundaries() {
        for i in 1..=200 {
            let t = 1.0 + i as f64 / 200.0;
            // alpha = 2 seen from the weeds side and the upper-hand side.
            assert!((weeds_branch(2.0, t) - upper_hand_branch(2.0, t)).abs() < 1e-12);
            // beta = 2 in the weeds meets level k+1 with beta' -> 1.
            let alpha = 2.0 + 6.0 * i as f64 / 200.0;
            let next = if alpha / 2.0 <= 2.0 {
                upper_hand_branch(alpha / 2.0, 1.0)
            } else {
                weeds_branch(alpha / 2.0, 1.0)
            };
            assert!((weeds_branch(alpha, 2.0) - next).abs() < 1e-12);
        }
    }

    #[test]
    fn range_on_log_grid() {
        let steps = 120;
        let lo = 1.01f64.ln();
        let hi = 4096f64.ln();
        for i in 0..=steps {
            for j in 0..=steps {
                let x = (lo + (hi - lo) * i as f64 / steps as f64).exp();
                let y = (lo + (hi - lo) * j as f64 / steps as f64).exp();
                let p = p_infinity(x, y).unwrap();
                assert!(p > 0.0 && p < 1.0, "p_inf({x}, {y}) = {p}");
            }
        }
    }

    #[test]
    fn escape_probability_examples() {
        assert_eq!(escape_probability(4.0).unwrap(), 0.5);
        assert_eq!(escape_probability(8.0 / 3.0).unwrap(), 0.75);
        assert!(escape_probability(1e12).unwrap() < 1e-11);
        assert!(escape_probability(2.0).is_err());
        assert!(escape_probability(1.5).is_err());
    }

    #[test]
    fn correction_examples() {
        assert_eq!(correction_identity(7, 4).unwrap(), r(-1, 42));
        assert_eq!(correction_identity(5, 5).unwrap(), r(4, 75));
        assert_eq!(correction_identity(4, 2).unwrap(), r(-1, 12));
        assert_eq!(closed_form_value(4, 2).unwrap(), r(1, 4));
        for (n, m) in [(7, 4), (5, 5), (4, 2), (100, 3), (3, 100)] {
            assert_eq!(
                correction_identity(n, m).unwrap(),
                expected_correction(n, m).unwrap()
            );
        }
    }

    #[test]
    fn equal_pool_advantage_examples() {
        assert!((equal_pool_advantage(2.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((equal_pool_advantage(4.0 / 3.0).unwrap() - 5.0 / 8.0).abs() < 1e-15);
        assert!((equal_pool_advantage(1.0 + 1e-12).unwrap() - 2.0 / 3.0).abs() < 1e-9);
        assert!(equal_pool_advantage(1.0).is_err());
        assert!(equal_pool_advantage(2.5).is_err());
    }

    /// Solving `p_inf(c beta, beta) = 1/2` by hand on each branch.
    fn analytic_fair_factor(beta: f64) -> f64 {
        if beta <= 4.0 / 3.0 {
            4.0 / (3.0 * beta * (2.0 - beta))
        } else {
            (4.0 - 8.0 / (3.0 * beta)) / beta
        }
    }

    #[test]
    fn fair_factor_matches_analytic_solution() {
        let c = fair_factor(2.0).unwrap().fair_factor;
        assert!((c - 4.0 / 3.0).abs() < 1e-12);
        let c = fair_factor(4.0 / 3.0).unwrap().fair_factor;
        assert!((c - 1.5).abs() < 1e-12);
        for i in 1..=500 {
            let beta = 1.0 + i as f64 / 500.0;
            let c = fair_factor(beta).unwrap().fair_factor;
            assert!(
                (c - analytic_fair_factor(beta)).abs() < 1e-12,
                "beta {beta}"
            );
        }
        assert!(fair_factor(1.0).is_err());
        assert!(fair_factor(2.1).is_err());
    }
}
