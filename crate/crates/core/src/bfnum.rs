//! Blom-Fröberg numbers `[[m, l]]^a_r`.
//!
//! Defined by `[[m, l]] = 0` for `l < 0` or `l > m`, `[[0, 0]] = 1`, and
//! otherwise `[[m, l]] = [[m-1, l]] + (a_{m+r} / 2) [[m-1, l-1]]`. Unrolled,
//! this is the elementary symmetric polynomial `e_l(a_{1+r}, .., a_{m+r})`
//! scaled by `2^-l`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, ExactRational};
use crate::tuple::CoefficientTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BfQuery {
    pub r: usize,
    pub m: i64,
    pub l: i64,
}

impl BfQuery {
    pub fn new(r: usize, m: i64, l: i64) -> Self {
        Self { r, m, l }
    }

    /// Largest coefficient index the definition can touch, if any.
    pub fn max_index(&self) -> Option<usize> {
        (self.m >= 1).then(|| self.m as usize + self.r)
    }

    pub fn check(&self, a: &CoefficientTuple) -> Result<()> {
        match self.max_index() {
            Some(index) if index > a.len() => Err(Error::IndexOutOfRange { index, len: a.len() }),
            _ => Ok(()),
        }
    }
}

/// Memoized evaluation of the defining recurrence.
pub fn bf_recursive(a: &CoefficientTuple, q: BfQuery) -> Result<ExactRational> {
    q.check(a)?;
    let mut memo = HashMap::new();
    Ok(recurse(a, q.r, q.m, q.l, &mut memo))
}

fn recurse(
    a: &CoefficientTuple,
    r: usize,
    m: i64,
    l: i64,
    memo: &mut HashMap<(i64, i64), ExactRational>,
) -> ExactRational {
    if l < 0 || l > m {
        return ExactRational::zero();
    }
    if l == 0 && m == 0 {
        return ExactRational::one();
    }
    if let Some(v) = memo.get(&(m, l)) {
        return v.clone();
    }
    let coeff = a.get(m as usize + r).expect("range checked up front");
    let v = recurse(a, r, m - 1, l, memo)
        + rational::ratio(coeff, 2) * recurse(a, r, m - 1, l - 1, memo);
    memo.insert((m, l), v.clone());
    v
}

/// `e_0..=e_max_l` of `values`, via `e_l(x_1..x_j) = e_l(x_1..x_{j-1}) + x_j e_{l-1}(x_1..x_{j-1})`.
pub fn elementary_symmetric(values: &[u64], max_l: usize) -> Vec<BigUint> {
    let mut e = vec![BigUint::zero(); max_l + 1];
    e[0] = BigUint::one();
    for (j, &x) in values.iter().enumerate() {
        for l in (1..=max_l.min(j + 1)).rev() {
            let add = &e[l - 1] * x;
            e[l] += add;
        }
    }
    e
}

/// `2^-l e_l(a_{1+r}, .., a_{m+r})`, with `1` for `l = 0` and `0` outside `0 <= l <= m`.
pub fn bf_explicit(a: &CoefficientTuple, q: BfQuery) -> Result<ExactRational> {
    q.check(a)?;
    let BfQuery { r, m, l } = q;
    if l < 0 || l > m {
        return Ok(ExactRational::zero());
    }
    if l == 0 {
        return Ok(ExactRational::one());
    }
    let values = &a.as_slice()[r..r + m as usize];
    let e = elementary_symmetric(values, l as usize);
    let scale = BigUint::one() << (l as usize);
    Ok(rational::ratio(e[l as usize].clone(), scale))
}

/// Both sides of `[[m, l]]_{r-1} - delta_{m,0} = [[m-1, l]]_r + (a_r/2) [[m-1, l-1]]_r`
/// for `r >= 1`.
///
/// At `m = 0` the identity only holds for `l = 0` (otherwise the left side
/// is `-1` and the right side `0`), so `m = 0, l != 0` is a domain error.
pub fn shift_identity_sides(a: &CoefficientTuple, q: BfQuery) -> Result<(ExactRational, ExactRational)> {
    if q.r == 0 {
        return Err(Error::Domain("shift identity needs r >= 1".into()));
    }
    if q.m == 0 && q.l != 0 {
        return Err(Error::Domain("shift identity at m = 0 needs l = 0".into()));
    }
    let delta = if q.m == 0 { ExactRational::one() } else { ExactRational::zero() };
    let lhs = bf_explicit(a, BfQuery::new(q.r - 1, q.m, q.l))? - delta;
    let a_r = a.get(q.r)?;
    let rhs = bf_explicit(a, BfQuery::new(q.r, q.m - 1, q.l))?
        + rational::ratio(a_r, 2) * bf_explicit(a, BfQuery::new(q.r, q.m - 1, q.l - 1))?;
    Ok((lhs, rhs))
}

/// Both sides of `[[m, l]]^a_r <= d^l [[m, l]]^c_r`, where `c` has its first
/// `m + 1` entries divided by their gcd `d`.
pub fn scaling_bound_sides(a: &CoefficientTuple, q: BfQuery) -> Result<(ExactRational, ExactRational)> {
    if q.m < 0 {
        return Err(Error::Domain("scaling bound needs m >= 0".into()));
    }
    let (c, d) = a.reduce_prefix(q.m as usize + 1)?;
    let lhs = bf_explicit(a, q)?;
    let rhs = if q.l >= 0 {
        rational::from_int(num_traits::pow(num_bigint::BigInt::from(d), q.l as usize))
            * bf_explicit(&c, q)?
    } else {
        ExactRational::zero()
    };
    Ok((lhs, rhs))
}
