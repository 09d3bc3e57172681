//! Exact rational scalars and their `p/q` text form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The scalar type used throughout: arbitrary-precision rationals.
pub type Rat = BigRational;

/// Shorthand for `n/d` as a [`Rat`].
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer [`Rat`].
pub fn rint(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Sign of a rational as `-1`, `0`, or `1`.
pub fn sgn(r: &Rat) -> i64 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Absolute value.
pub fn rabs(r: &Rat) -> Rat {
    r.abs()
}

/// Formats a rational as `p/q`, or plain `p` when the denominator is 1.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or a bare integer `p`. Whitespace around parts is rejected.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let (num_s, den_s) = match s.find('/') {
        Some(i) => (&s[..i], Some(&s[i + 1..])),
        None => (s, None),
    };
    let num: BigInt = num_s
        .parse()
        .map_err(|_| bad(0, "expected integer numerator"))?;
    let den: BigInt = match den_s {
        Some(d) => d
            .parse()
            .map_err(|_| bad(num_s.len() + 1, "expected integer denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad(num_s.len() + 1, "zero denominator"));
    }
    Ok(Rat::new(num, den))
}

/// Best-effort conversion to `f64` (used only for reporting, never for math).
pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a quotient of lossy conversions for huge operands.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}
