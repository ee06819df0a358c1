//! Exact checks of the power-sum inequalities
//! `(x+c)^{k+1}/(k+1) <= (x+c)^{k+1}/(k+1) + (x+c)^k/2 <= f_k(x) <= (x+c+1/2)^{k+1}/(k+1)`
//! where `f_k(x) = sum_{l=0}^{[x]} (x - l + c)^k`, for `c in [0, 1/2]` and `x >= -c`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{from_int, integer_part, pow, ratio, ExactRational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSumQuery {
    pub x: ExactRational,
    pub c: ExactRational,
    pub k: u32,
}

impl PowerSumQuery {
    pub fn new(x: ExactRational, c: ExactRational, k: u32) -> Result<Self> {
        let q = Self { x, c, k };
        q.validate()?;
        Ok(q)
    }

    fn validate(&self) -> Result<()> {
        if self.c.is_negative() || self.c > ratio(1, 2) {
            return Err(Error::Domain(format!("c = {} is outside [0, 1/2]", self.c)));
        }
        if self.x < -self.c.clone() {
            return Err(Error::Domain(format!("x = {} is below -c = {}", self.x, -self.c.clone())));
        }
        if self.k == 0 {
            return Err(Error::Domain("k must be at least 1".into()));
        }
        Ok(())
    }

    fn shifted(&self) -> ExactRational {
        &self.x + &self.c
    }
}

/// `f_k(x)`.
pub fn power_sum(q: &PowerSumQuery) -> Result<ExactRational> {
    q.validate()?;
    let top = integer_part(&q.x);
    let mut total = ExactRational::zero();
    let mut l = num_bigint::BigInt::zero();
    while l <= top {
        total += pow(&(&q.x - from_int(l.clone()) + &q.c), q.k);
        l += 1;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SumBoundCheck {
    pub lower_le_middle: bool,
    pub middle_le_sum: bool,
    pub sum_le_upper: bool,
}

impl SumBoundCheck {
    pub fn all(&self) -> bool {
        self.lower_le_middle && self.middle_le_sum && self.sum_le_upper
    }
}

/// The four expressions of the chain, in order.
pub fn sum_bound_terms(q: &PowerSumQuery) -> Result<[ExactRational; 4]> {
    if q.k < 2 {
        return Err(Error::Domain("the power-sum bounds need k >= 2".into()));
    }
    let f = power_sum(q)?;
    let y = q.shifted();
    let k1 = from_int(q.k + 1);
    let lower = pow(&y, q.k + 1) / &k1;
    let middle = &lower + pow(&y, q.k) / from_int(2);
    let upper = pow(&(&y + ratio(1, 2)), q.k + 1) / &k1;
    Ok([lower, middle, f, upper])
}

pub fn check_sum_bounds(q: &PowerSumQuery) -> Result<SumBoundCheck> {
    let [lower, middle, f, upper] = sum_bound_terms(q)?;
    Ok(SumBoundCheck { lower_le_middle: lower <= middle, middle_le_sum: middle <= f, sum_le_upper: f <= upper })
}

/// Both sides of the sharper upper estimate
/// `f_k(x) <= (x+c)^{k+1}/(k+1) + (x+c)^k/2 + k (x+c)^{k-1}/8`.
pub fn refined_upper_sides(q: &PowerSumQuery) -> Result<(ExactRational, ExactRational)> {
    if q.k < 2 {
        return Err(Error::Domain("the refined bound needs k >= 2".into()));
    }
    let f = power_sum(q)?;
    let y = q.shifted();
    let rhs = pow(&y, q.k + 1) / from_int(q.k + 1) + pow(&y, q.k) / from_int(2)
        + from_int(q.k) * pow(&y, q.k - 1) / from_int(8);
    Ok((f, rhs))
}

/// Both sides of `f_k(n+1) - f_k(n) = (n+1+c)^k` at integer `n >= 0`.
pub fn step_sides(n: u64, c: &ExactRational, k: u32) -> Result<(ExactRational, ExactRational)> {
    let at = |x: u64| PowerSumQuery::new(from_int(x), c.clone(), k).and_then(|q| power_sum(&q));
    let lhs = at(n + 1)? - at(n)?;
    let rhs = pow(&(from_int(n + 1) + c), k);
    Ok((lhs, rhs))
}
