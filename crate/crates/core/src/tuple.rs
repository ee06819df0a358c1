//! Coefficient tuples and their prefix-gcd chains.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The coefficients `a_1..a_k` of the form `a_1 x_1 + ... + a_k x_k`.
///
/// Only finitely many entries are ever stored; indexing past `k` is an error
/// rather than an implicit extension. Indices in the public API are 1-based
/// to line up with the usual notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct CoefficientTuple(Vec<u64>);

impl CoefficientTuple {
    pub fn new(coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyTuple);
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| c == 0) {
            return Err(Error::NonPositiveCoefficient(bad));
        }
        Ok(Self(coeffs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// `a_i` with 1-based `i`.
    pub fn get(&self, i: usize) -> Result<u64> {
        if i == 0 || i > self.0.len() {
            return Err(Error::IndexOutOfRange { index: i, len: self.0.len() });
        }
        Ok(self.0[i - 1])
    }

    pub fn require_len(&self, needed: usize) -> Result<()> {
        if self.len() < needed {
            return Err(Error::TooShortTuple { needed, got: self.len() });
        }
        Ok(())
    }

    pub fn gcd(&self) -> u64 {
        self.0.iter().fold(0, |g, &a| g.gcd(&a))
    }

    pub fn is_coprime(&self) -> bool {
        self.gcd() == 1
    }

    pub fn require_coprime(&self) -> Result<()> {
        match self.gcd() {
            1 => Ok(()),
            gcd => Err(Error::NotCoprime { gcd }),
        }
    }

    pub fn product(&self) -> BigUint {
        self.0.iter().map(|&a| BigUint::from(a)).product()
    }

    pub fn sum(&self) -> BigUint {
        self.0.iter().map(|&a| BigUint::from(a)).sum()
    }

    pub fn min(&self) -> u64 {
        *self.0.iter().min().expect("non-empty")
    }

    pub fn contains_one(&self) -> bool {
        self.0.contains(&1)
    }

    /// `c^(m)`: the first `m` entries divided by their gcd, the rest untouched.
    pub fn reduce_prefix(&self, m: usize) -> Result<(Self, u64)> {
        self.require_len(m.max(1))?;
        let d = self.0[..m].iter().fold(0, |g, &a| g.gcd(&a)).max(1);
        let mut out = self.0.clone();
        for a in &mut out[..m] {
            *a /= d;
        }
        Ok((Self(out), d))
    }

    /// The whole tuple divided by its gcd.
    pub fn reduced(&self) -> (Self, u64) {
        self.reduce_prefix(self.len()).expect("full prefix is in range")
    }

    pub fn prefix(&self, m: usize) -> Result<Self> {
        self.require_len(m.max(1))?;
        Self::new(self.0[..m].to_vec())
    }

    pub fn gcd_chain(&self) -> GcdChain {
        gcd_chain(self)
    }
}

impl TryFrom<Vec<u64>> for CoefficientTuple {
    type Error = Error;

    fn try_from(v: Vec<u64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CoefficientTuple> for Vec<u64> {
    fn from(t: CoefficientTuple) -> Self {
        t.0
    }
}

impl FromStr for CoefficientTuple {
    type Err = Error;

    /// Comma-separated positive integers, e.g. `3,5,7`.
    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("invalid coefficient {:?}", p.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

impl fmt::Display for CoefficientTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

/// Prefix gcds `d_1..d_k` with `d_i = gcd(a_1, .., a_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GcdChain(Vec<u64>);

impl GcdChain {
    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// `d_i`, 1-based.
    pub fn get(&self, i: usize) -> u64 {
        self.0[i - 1]
    }

    pub fn last(&self) -> u64 {
        *self.0.last().expect("non-empty")
    }

    pub fn is_coprime(&self) -> bool {
        self.last() == 1
    }
}

pub fn gcd_chain(a: &CoefficientTuple) -> GcdChain {
    let mut d = Vec::with_capacity(a.len());
    let mut g = 0u64;
    for &ai in a.as_slice() {
        g = g.gcd(&ai);
        d.push(g);
    }
    GcdChain(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: &[u64]) -> CoefficientTuple {
        CoefficientTuple::new(v.to_vec()).unwrap()
    }

    #[test]
    fn gcd_chain_examples() {
        assert_eq!(gcd_chain(&t(&[4, 6, 9])).as_slice(), &[4, 2, 1]);
        assert_eq!(gcd_chain(&t(&[1, 8, 12, 30])).as_slice(), &[1, 1, 1, 1]);
        assert_eq!(gcd_chain(&t(&[6, 10])).as_slice(), &[6, 2]);
        assert!(!gcd_chain(&t(&[6, 10])).is_coprime());
    }

    #[test]
    fn rejects_bad_tuples() {
        assert_eq!(CoefficientTuple::new(vec![]), Err(Error::EmptyTuple));
        assert_eq!(CoefficientTuple::new(vec![3, 0]), Err(Error::NonPositiveCoefficient(0)));
        assert!("3,x".parse::<CoefficientTuple>().is_err());
        assert_eq!("3, 5".parse::<CoefficientTuple>().unwrap(), t(&[3, 5]));
    }

    #[test]
    fn indexing_past_k_is_an_error() {
        let a = t(&[2, 3]);
        assert_eq!(a.get(2), Ok(3));
        assert_eq!(a.get(3), Err(Error::IndexOutOfRange { index: 3, len: 2 }));
        assert!(a.get(0).is_err());
    }

    #[test]
    fn reduce_prefix_divides_only_the_prefix() {
        let (c, d) = t(&[4, 6, 9]).reduce_prefix(2).unwrap();
        assert_eq!(d, 2);
        assert_eq!(c, t(&[2, 3, 9]));
    }

    proptest! {
        #[test]
        fn chain_divides_downward(v in proptest::collection::vec(1u64..200, 1..8)) {
            let a = t(&v);
            let d = gcd_chain(&a);
            prop_assert_eq!(d.get(1), v[0]);
            for (i, x) in v.iter().enumerate().skip(1) {
                prop_assert_eq!(d.as_slice()[i - 1] % d.as_slice()[i], 0);
                prop_assert_eq!(d.as_slice()[i], d.as_slice()[i - 1].gcd(x));
            }
            for &ai in &v {
                prop_assert_eq!(ai % d.last(), 0);
            }
        }
    }
}
