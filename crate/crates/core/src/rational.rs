//! Exact rational values and the handful of integer helpers the bounds need.
//!
//! `BigRational` keeps every value in lowest terms with a positive
//! denominator, so structural equality is value equality. Formatting prints
//! integers bare and everything else as `p/q`.

use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type ExactRational = BigRational;

pub fn from_int(v: impl Into<BigInt>) -> ExactRational {
    BigRational::from_integer(v.into())
}

pub fn from_uint(v: &BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

pub fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

/// Integer part `[x]`: floor for `x >= 0`, ceiling for `x < 0`.
pub fn integer_part(x: &ExactRational) -> BigInt {
    // `trunc` rounds toward zero, which is exactly that definition.
    x.trunc().to_integer()
}

pub fn floor(x: &ExactRational) -> BigInt {
    x.floor().to_integer()
}

pub fn ceil(x: &ExactRational) -> BigInt {
    x.ceil().to_integer()
}

/// Fractional part `{x} = x - floor(x)`, always in `[0, 1)`.
pub fn fract(x: &ExactRational) -> ExactRational {
    x - x.floor()
}

pub fn pow(x: &ExactRational, exp: u32) -> ExactRational {
    num_traits::pow(x.clone(), exp as usize)
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn format(x: &ExactRational) -> String {
    x.to_string()
}

/// Parses `p`, `-p` or `p/q` (surrounding whitespace allowed).
pub fn parse(s: &str) -> Result<ExactRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        None => BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
    }
}

/// Exact integer test for a rational known to be integral.
pub fn to_integer(x: &ExactRational) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Least integer `t` with `t >= 0` and `t^exp >= target`, i.e. `ceil(target^(1/exp))`
/// for `target >= 0`.
pub fn ceil_root(target: &BigUint, exp: u32) -> BigUint {
    assert!(exp >= 1);
    let r = num_integer::Roots::nth_root(target, exp);
    if num_traits::pow(r.clone(), exp as usize) == *target {
        r
    } else {
        r + 1u32
    }
}

/// Least integer `n` such that `n + shift >= target^(1/exp)`, computed with
/// exact power comparisons only.
pub fn ceil_root_minus(target: &BigUint, exp: u32, shift: &ExactRational) -> BigInt {
    let holds = |n: &BigInt| {
        let t = from_int(n.clone()) + shift;
        !t.is_negative() && pow(&t, exp) >= from_uint(target)
    };
    // ceil(root) - ceil(shift) is within one of the answer.
    let mut n = BigInt::from(ceil_root(target, exp)) - ceil(shift) - 1;
    while holds(&n) {
        n -= 1;
    }
    while !holds(&n) {
        n += 1;
    }
    n
}

pub fn is_nonneg_integer(x: &ExactRational) -> bool {
    x.is_integer() && !x.is_negative()
}
