//! Exact reduced fractions backed by checked `i128` arithmetic.
//!
//! Every game probability in this crate has a denominator dividing `3nm`,
//! so 128-bit integers leave a very wide margin. Overflow is still checked
//! on every operation and surfaces as [`ArithmeticError::Overflow`].

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ArithmeticError;

type ArithResult<T> = std::result::Result<T, ArithmeticError>;

/// A fraction `num / den` in lowest terms with `den > 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i128,
    den: i128,
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    pub fn new(num: i128, den: i128) -> ArithResult<Self> {
        if den == 0 {
            return Err(ArithmeticError::DivisionByZero);
        }
        let (mut num, mut den) = (num, den);
        if den < 0 {
            num = num.checked_neg().ok_or(ArithmeticError::Overflow)?;
            den = den.checked_neg().ok_or(ArithmeticError::Overflow)?;
        }
        let g = num.gcd(&den);
        Ok(Rational {
            num: num / g,
            den: den / g,
        })
    }

    pub fn from_integer(value: i128) -> Self {
        Rational { num: value, den: 1 }
    }

    /// `num / den` for unsigned counts, e.g. a transition probability `b / n`.
    pub fn ratio(num: u64, den: u64) -> ArithResult<Self> {
        Rational::new(i128::from(num), i128::from(den))
    }

    pub fn numer(&self) -> i128 {
        self.num
    }

    pub fn denom(&self) -> i128 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn checked_add(&self, rhs: &Rational) -> ArithResult<Rational> {
        let g = self.den.gcd(&rhs.den);
        let lhs_scale = rhs.den / g;
        let rhs_scale = self.den / g;
        let num = self
            .num
            .checked_mul(lhs_scale)
            .and_then(|a| {
                rhs.num
                    .checked_mul(rhs_scale)
                    .and_then(|b| a.checked_add(b))
            })
            .ok_or(ArithmeticError::Overflow)?;
        let den = rhs_scale
            .checked_mul(rhs.den)
            .ok_or(ArithmeticError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_neg(&self) -> ArithResult<Rational> {
        Ok(Rational {
            num: self.num.checked_neg().ok_or(ArithmeticError::Overflow)?,
            den: self.den,
        })
    }

    pub fn checked_sub(&self, rhs: &Rational) -> ArithResult<Rational> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_mul(&self, rhs: &Rational) -> ArithResult<Rational> {
        // Cross-reduce first so intermediate products stay small.
        let g1 = self.num.gcd(&rhs.den).max(1);
        let g2 = rhs.num.gcd(&self.den).max(1);
        let num = (self.num / g1)
            .checked_mul(rhs.num / g2)
            .ok_or(ArithmeticError::Overflow)?;
        let den = (self.den / g2)
            .checked_mul(rhs.den / g1)
            .ok_or(ArithmeticError::Overflow)?;
        Rational::new(num, den)
    }

    pub fn checked_recip(&self) -> ArithResult<Rational> {
        Rational::new(self.den, self.num)
    }

    pub fn checked_div(&self, rhs: &Rational) -> ArithResult<Rational> {
        self.checked_mul(&rhs.checked_recip()?)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        format_significant(self.to_f64(), digits)
    }
}

/// Formats `x` with a fixed number of significant digits (plain notation).
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Exact comparison of `a/b` and `c/d` (`b, d > 0`) by continued-fraction
/// expansion; never overflows.
fn cmp_fractions(mut a: i128, mut b: i128, mut c: i128, mut d: i128) -> Ordering {
    loop {
        let (q1, r1) = (a.div_euclid(b), a.rem_euclid(b));
        let (q2, r2) = (c.div_euclid(d), c.rem_euclid(d));
        if q1 != q2 {
            return q1.cmp(&q2);
        }
        match (r1 == 0, r2 == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            (false, false) => {}
        }
        // r1/b vs r2/d has the opposite order of b/r1 vs d/r2.
        (a, b, c, d) = (d, r2, b, r1);
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_fractions(self.num, self.den, other.num, other.den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Serialize, Deserialize)]
struct WireFraction {
    num: i128,
    den: i128,
    #[serde(default, skip_deserializing)]
    approx: f64,
}

/// Wire form: `{"num":5,"den":14,"approx":0.3571428571}`; `approx` is
/// rounded to ten decimals and ignored when reading.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let approx = format!("{:.10}", self.to_f64())
            .parse::<f64>()
            .unwrap_or(f64::NAN);
        WireFraction {
            num: self.num,
            den: self.den,
            approx,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let wire = WireFraction::deserialize(deserializer)?;
        Rational::new(wire.num, wire.den).map_err(D::Error::custom)
    }
}
