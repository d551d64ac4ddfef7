//! Exact rationals and 2-adic valuations.
//!
//! `ExactRational` is `num_rational::BigRational`, which already keeps values
//! in lowest terms with a strictly positive denominator. This module adds the
//! 2-adic valuation, checked division that names its call site, and the
//! canonical `p/q` text form.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational in lowest terms, denominator ≥ 1.
pub type ExactRational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero in {context}")]
    DivisionByZero { context: String },
    #[error("cannot parse rational {input:?}")]
    Parse { input: String },
}

/// 2-adic valuation of a rational; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

// Saturates at +∞.
impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl Neg for Valuation {
    type Output = Valuation;
    /// Only meaningful on finite values; negating +∞ is kept at +∞ so that
    /// `a - b` on a finite `a` and infinite `b` is never silently finite.
    fn neg(self) -> Valuation {
        match self {
            Valuation::Finite(a) => Valuation::Finite(-a),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl Sub for Valuation {
    type Output = Valuation;
    fn sub(self, rhs: Valuation) -> Valuation {
        self + (-rhs)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

fn nu2_int(n: &BigInt) -> i64 {
    // n is nonzero here
    n.trailing_zeros().map(|z| z as i64).unwrap_or(0)
}

/// Exponent of 2 in `x`; +∞ for zero.
pub fn nu2(x: &ExactRational) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    Valuation::Finite(nu2_int(x.numer()) - nu2_int(x.denom()))
}

/// `x / y`, reporting a zero divisor together with `context`.
pub fn checked_div(
    x: &ExactRational,
    y: &ExactRational,
    context: impl FnOnce() -> String,
) -> Result<ExactRational, ArithError> {
    if y.is_zero() {
        return Err(ArithError::DivisionByZero { context: context() });
    }
    Ok(x / y)
}

pub fn rational(p: i64, q: i64) -> ExactRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn integer(n: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// Parses `p/q` or `p`; the result is canonicalized.
pub fn parse_rational(s: &str) -> Result<ExactRational, ArithError> {
    let err = || ArithError::Parse { input: s.to_string() };
    let t = s.trim();
    let value = match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            BigRational::new(p, q)
        }
        None => BigRational::from_integer(BigInt::from_str(t).map_err(|_| err())?),
    };
    Ok(value)
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rational(x: &ExactRational) -> String {
    x.to_string()
}

/// Natural logarithm of a positive ratio `a/b` of big integers.
///
/// A 64-bit exact quotient supplies the mantissa and the binary exponent is
/// added back separately, so the result keeps full `f64` relative accuracy
/// for operands of any size, including ratios close to 1.
pub fn ln_ratio(a: &BigInt, b: &BigInt) -> f64 {
    assert!(a.is_positive() && b.is_positive(), "ln_ratio needs positive operands");
    let diff = a - b;
    if (&diff << 2u8).magnitude() < b.magnitude() {
        // |a/b − 1| < 1/4
        return ratio_to_f64(&diff, b).ln_1p();
    }
    let (f, e) = mantissa_exponent(a, b);
    // a/b ≈ f * 2^e with f in [1, 2); recentre f into (0.75, 1.5]
    let (f, e) = if f > 1.5 { (f / 2.0, e + 1) } else { (f, e) };
    (f - 1.0).ln_1p() + e as f64 * std::f64::consts::LN_2
}

/// `(f, e)` with `|a|/b ≈ f · 2^e`, `f ∈ [1, 2)`, from a 64-bit exact quotient.
fn mantissa_exponent(a: &BigInt, b: &BigInt) -> (f64, i64) {
    let a = a.abs();
    // choose s so that floor(a * 2^s / b) has exactly 64 bits
    let mut s = 64 - (a.bits() as i64 - b.bits() as i64);
    let quotient = |s: i64| {
        if s >= 0 {
            (&a << s as u64) / b
        } else {
            &a / (b << (-s) as u64)
        }
    };
    let mut q = quotient(s);
    if q.bits() > 64 {
        s -= 1;
        q = quotient(s);
    }
    let q = u64::try_from(&q).expect("64-bit quotient");
    (q as f64 / 2f64.powi(63), 63 - s)
}

/// Nearest `f64` to `a/b` for `b > 0` (underflows to zero, overflows to ±∞).
pub fn ratio_to_f64(a: &BigInt, b: &BigInt) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    let (f, e) = mantissa_exponent(a, b);
    let e = e.clamp(-2000, 2000) as i32;
    // split the scaling so that intermediate powers stay representable
    let magnitude = f * 2f64.powi(e / 2) * 2f64.powi(e - e / 2);
    if a.is_negative() {
        -magnitude
    } else {
        magnitude
    }
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(n: &BigInt) -> f64 {
    ln_ratio(n, &BigInt::from(1))
}

pub fn ln_rational(x: &ExactRational) -> f64 {
    ln_ratio(x.numer(), x.denom())
}

/// Rounds to 15 significant digits, nearest.
pub fn round_sig15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

/// Serializes any `Display` value (big integers, rationals) as a string.
pub fn serialize_display<T: fmt::Display, S: serde::Serializer>(value: &T, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
