//! Exact rational arithmetic helpers.
//!
//! Every probability, payoff and utility in this crate is a [`Q`]
//! (an arbitrary-precision rational). No floating point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number used throughout the engine.
pub type Q = BigRational;

/// Shorthand for the rational `n/d`.
///
/// Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    assert!(d != 0, "zero denominator");
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer rational `n/1`.
pub fn qi(n: i64) -> Q {
    Q::from(BigInt::from(n))
}

pub fn q0() -> Q {
    Q::zero()
}

pub fn q1() -> Q {
    Q::one()
}

/// Parses a rational literal: an optionally signed integer or `p/q` pair,
/// e.g. `7`, `-3`, `2/3`, `-14/5`.
pub fn parse_q(s: &str) -> Result<Q, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational literal".into());
    }
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.parse::<BigInt>()
            .map_err(|_| format!("not an integer: `{t}`"))
    };
    match s.split_once('/') {
        None => Ok(Q::from(parse_int(s)?)),
        Some((n, d)) => {
            let num = parse_int(n)?;
            let den = parse_int(d)?;
            if den.is_zero() {
                return Err(format!("zero denominator in `{s}`"));
            }
            Ok(Q::new(num, den))
        }
    }
}

/// Renders a rational as `p/q` (or a bare integer when the denominator is 1).
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Sum of a slice of rationals.
pub fn sum(xs: &[Q]) -> Q {
    xs.iter().fold(Q::zero(), |a, b| a + b)
}

/// True iff `xs` are nonnegative and sum to exactly one.
pub fn is_distribution(xs: &[Q]) -> bool {
    xs.iter().all(|x| !x.is_negative()) && sum(xs).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "7", "-3", "2/3", "-14/5", "28/60"] {
            let x = parse_q(s).unwrap();
            let y = parse_q(&fmt_q(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(parse_q("28/60").unwrap(), q(7, 15));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("").is_err());
        assert!(parse_q("a/b").is_err());
    }

    #[test]
    fn distribution_check() {
        assert!(is_distribution(&[q(1, 3), q(2, 3)]));
        assert!(!is_distribution(&[q(1, 3), q(1, 3)]));
        assert!(!is_distribution(&[q(-1, 3), q(4, 3)]));
    }
}
