//! Exact rationals and additive angles on the circle ℝ/ℤ.
//!
//! An angle `q` stands for the unit complex number `exp(2πi·q)`; the sign `-1`
//! is the angle `1/2`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn half() -> Rational {
    rat(1, 2)
}

/// Representative of `q mod 1` in `[0, 1)`.
pub fn mod_one(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn is_integral(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Angle of a sign: `+1 ↦ 0`, `-1 ↦ 1/2`.
pub fn sign_angle(negative: bool) -> Rational {
    if negative {
        half()
    } else {
        Rational::zero()
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    pub input: String,
    pub reason: &'static str,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: {}", self.input, self.reason)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `"p"` or `"p/q"` with `q > 0` and `gcd(p, q) = 1`.
pub fn parse_rational(input: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        input: input.to_string(),
        reason,
    };
    let parse_int = |s: &str| -> Result<BigInt, ParseRationalError> {
        let digits = s.strip_prefix('-').unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(err("expected an integer or p/q"));
        }
        s.parse::<BigInt>().map_err(|_| err("expected an integer or p/q"))
    };
    match input.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(input)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if !q.is_positive() {
                return Err(err("denominator must be positive"));
            }
            if !p.gcd(&q).is_one() {
                return Err(err("not in lowest terms"));
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

/// Least common multiple of the denominators (1 for an empty slice).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
