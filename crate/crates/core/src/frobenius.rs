//! Frobenius numbers: an exact sieve plus the bounds that follow from the
//! denumerant inequalities.
//!
//! Every `n > s-_k` is representable, which gives both the upper bound
//! `g <= s-_k` and the sieve cutoff. The lower bounds are the root bounds
//! `g >= ((k-1)! P)^{1/(k-1)} - s+_k` and `g >= (k! P)^{1/k} - r_k`, reported
//! as the least integer not below the real value, found with exact power
//! comparisons.

use num_bigint::BigInt;
use serde::Serialize;

use crate::bounds::{bound_sequences, ser_rational};
use crate::error::Result;
use crate::rational::{self, factorial, ExactRational};
use crate::tuple::CoefficientTuple;

/// Largest non-representable natural number, or `-1` when every natural
/// number is representable (some `a_i = 1`).
pub fn frobenius_exact(a: &CoefficientTuple) -> Result<i64> {
    a.require_len(2)?;
    a.require_coprime()?;
    if a.contains_one() {
        return Ok(-1);
    }
    let s_minus = bound_sequences(a)?.s_minus_k().clone();
    let cutoff = rational::to_integer(&s_minus).expect("s-_k is an integer for integer coefficients");
    let cutoff = usize::try_from(cutoff.max(BigInt::from(0))).expect("sieve cutoff fits in memory");

    let mut representable = vec![false; cutoff + 1];
    representable[0] = true;
    for n in 1..=cutoff {
        representable[n] = a
            .as_slice()
            .iter()
            .any(|&ai| ai as usize <= n && representable[n - ai as usize]);
    }
    Ok(representable.iter().rposition(|&r| !r).map_or(-1, |g| g as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrobeniusReport {
    pub coeffs: CoefficientTuple,
    pub g: i64,
    #[serde(serialize_with = "ser_rational")]
    pub brauer_upper: ExactRational,
    #[serde(serialize_with = "crate::frobenius::ser_bigint")]
    pub root_lower_1: BigInt,
    #[serde(serialize_with = "crate::frobenius::ser_bigint")]
    pub root_lower_2: BigInt,
}

impl FrobeniusReport {
    /// Whether `g` is a genuine Frobenius number (not the `-1` sentinel).
    pub fn g_defined(&self) -> bool {
        self.g >= 0
    }

    pub fn bounds_hold(&self) -> bool {
        let g = BigInt::from(self.g);
        let upper_ok = rational::from_int(g.clone()) <= self.brauer_upper;
        let lower_ok = !self.g_defined() || (self.root_lower_1 <= g && self.root_lower_2 <= g);
        upper_ok && lower_ok
    }
}

pub fn bound_frobenius(a: &CoefficientTuple) -> Result<FrobeniusReport> {
    let g = frobenius_exact(a)?;
    let seq = bound_sequences(a)?;
    let k = a.len() as u32;
    let p = a.product();
    let root_lower_1 = rational::ceil_root_minus(&(factorial(k - 1) * &p), k - 1, seq.s_plus_k());
    let root_lower_2 = rational::ceil_root_minus(&(factorial(k) * &p), k, seq.r_k());
    Ok(FrobeniusReport {
        coeffs: a.clone(),
        g,
        brauer_upper: seq.s_minus_k().clone(),
        root_lower_1,
        root_lower_2,
    })
}

pub(crate) fn ser_bigint<S: serde::Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
