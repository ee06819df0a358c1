//! Exact denumerant counts.
//!
//! Three independent routes are provided: brute-force enumeration
//! ([`oracle_count`]), gcd reduction followed by the prefix recurrence
//! ([`denumerant`]), and the closed form for two coprime coefficients
//! ([`popoviciu`]). [`extended_count`] counts solutions of `<= n` by turning
//! them into an equality with a slack variable of coefficient 1.

use std::env;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, ExactRational};
use crate::tuple::CoefficientTuple;

/// Environment variable overriding the oracle enumeration budget.
pub const ORACLE_BUDGET_VAR: &str = "DENUM_MAX_ORACLE";
pub const DEFAULT_ORACLE_BUDGET: u128 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Oracle,
    Recursion,
    Popoviciu,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Oracle => "oracle",
            CountMethod::Recursion => "recursion",
            CountMethod::Popoviciu => "popoviciu",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    pub value: BigUint,
    pub method: CountMethod,
}

impl CountResult {
    fn new(value: BigUint, method: CountMethod) -> Self {
        Self { value, method }
    }
}

/// Budget read from `DENUM_MAX_ORACLE`, falling back to the default.
pub fn oracle_budget() -> u128 {
    env::var(ORACLE_BUDGET_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

/// Number of points the oracle would visit: every variable except the one
/// with the smallest coefficient is enumerated up to `n / a_i`.
pub fn oracle_cost(a: &CoefficientTuple, n: u64) -> u128 {
    let mut sorted = a.as_slice().to_vec();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    sorted[..sorted.len() - 1]
        .iter()
        .fold(1u128, |acc, &ai| acc.saturating_mul(u128::from(n / ai) + 1))
}

pub fn oracle_count(a: &CoefficientTuple, n: u64) -> Result<CountResult> {
    oracle_count_with_budget(a, n, oracle_budget())
}

/// Brute-force count of `{x in N^k : sum a_i x_i = n}`.
///
/// Variables are enumerated largest coefficient outermost; the innermost
/// (smallest coefficient) variable is fixed by a divisibility test.
pub fn oracle_count_with_budget(a: &CoefficientTuple, n: u64, budget: u128) -> Result<CountResult> {
    let estimate = oracle_cost(a, n);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    let mut sorted = a.as_slice().to_vec();
    sorted.sort_unstable_by(|x, y| y.cmp(x));

    fn walk(coeffs: &[u64], rest: u64) -> u64 {
        match coeffs {
            [last] => u64::from(rest.is_multiple_of(*last)),
            [first, tail @ ..] => (0..=rest / first).map(|x| walk(tail, rest - x * first)).sum(),
            [] => unreachable!("tuple is non-empty"),
        }
    }

    Ok(CountResult::new(BigUint::from(walk(&sorted, n)), CountMethod::Oracle))
}

/// `D^a_k(n)` by gcd reduction and the prefix recurrence.
pub fn denumerant(a: &CoefficientTuple, n: u64) -> CountResult {
    let value = denumerant_table(a, n).pop().expect("table covers n");
    CountResult::new(value, CountMethod::Recursion)
}

/// `D^a_k(m)` for every `m` in `0..=max_n`.
///
/// The tuple is first divided by `d_k` (counts vanish off multiples of
/// `d_k`). Rows are then built prefix by prefix: row 1 is the divisibility
/// indicator of `a_1`, and row `i + 1` is the recurrence
/// `D_{i+1}(m) = sum_{l=0}^{[m/a_{i+1}]} D_i(m - a_{i+1} l)`, accumulated as
/// `D_{i+1}(m) = D_i(m) + D_{i+1}(m - a_{i+1})`. Each row is the memo for
/// one prefix length over all residuals up to `max_n`.
pub fn denumerant_table(a: &CoefficientTuple, max_n: u64) -> Vec<BigUint> {
    let (c, d) = a.reduced();
    let reduced_max = (max_n / d) as usize;
    let coeffs = c.as_slice();

    let a1 = coeffs[0] as usize;
    let mut row: Vec<BigUint> = (0..=reduced_max)
        .map(|m| if m % a1 == 0 { BigUint::one() } else { BigUint::zero() })
        .collect();
    for &ai in &coeffs[1..] {
        let ai = ai as usize;
        for m in ai..=reduced_max {
            let prev = row[m - ai].clone();
            row[m] += prev;
        }
    }

    if d == 1 {
        return row;
    }
    (0..=max_n)
        .map(|m| if m % d == 0 { row[(m / d) as usize].clone() } else { BigUint::zero() })
        .collect()
}

/// Modular inverse of `x` modulo `m` in `[0, m)`; `0` when `m == 1`.
pub fn modular_inverse(x: u64, m: u64) -> Result<u64> {
    if m == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    if m == 1 {
        return Ok(0);
    }
    let ext = BigInt::from(x).extended_gcd(&BigInt::from(m));
    if !ext.gcd.is_one() {
        return Err(Error::NotInvertible { x, modulus: m });
    }
    let inv = ext.x.mod_floor(&BigInt::from(m));
    Ok(u64::try_from(inv).expect("inverse below modulus"))
}

/// Popoviciu's closed form for two coprime coefficients:
/// `n/(a1 a2) - {a2^-1 n / a1} - {a1^-1 n / a2} + 1`.
pub fn popoviciu(a1: u64, a2: u64, n: u64) -> Result<CountResult> {
    if a1 == 0 || a2 == 0 {
        return Err(Error::NonPositiveCoefficient(0));
    }
    let g = a1.gcd(&a2);
    if g != 1 {
        return Err(Error::NotCoprime { gcd: g });
    }
    let inv2 = modular_inverse(a2 % a1, a1)?;
    let inv1 = modular_inverse(a1 % a2, a2)?;
    // {inv * n / m} computed as ((inv * n) mod m) / m
    let frac = |inv: u64, m: u64| {
        let r = (u128::from(inv) * u128::from(n)) % u128::from(m);
        rational::ratio(BigInt::from(r), BigInt::from(m))
    };
    let value: ExactRational = rational::ratio(n, BigInt::from(a1) * a2) - frac(inv2, a1)
        - frac(inv1, a2)
        + rational::from_int(1);
    assert!(
        rational::is_nonneg_integer(&value),
        "Popoviciu form produced {value} for ({a1}, {a2}, {n})"
    );
    let value = value.to_integer();
    debug_assert!(!value.is_negative());
    Ok(CountResult::new(value.to_biguint().expect("non-negative"), CountMethod::Popoviciu))
}

/// The slack-variable tuple `(1, a_1/d, .., a_k/d)` and `d = gcd(a)`.
pub fn slack_tuple(a: &CoefficientTuple) -> (CoefficientTuple, u64) {
    let (c, d) = a.reduced();
    let mut b = Vec::with_capacity(a.len() + 1);
    b.push(1);
    b.extend_from_slice(c.as_slice());
    (CoefficientTuple::new(b).expect("positive entries"), d)
}

/// `D^_a_k(n) = |{x in N^k : sum a_i x_i <= n}|`, computed as
/// `D^b_{k+1}(floor(n/d))` with `b = (1, a_1/d, .., a_k/d)`.
pub fn extended_count(a: &CoefficientTuple, n: u64) -> CountResult {
    let (b, d) = slack_tuple(a);
    denumerant(&b, n / d)
}

/// `D^_a_k(m)` for every `m` in `0..=max_n`.
pub fn extended_count_table(a: &CoefficientTuple, max_n: u64) -> Vec<BigUint> {
    let (b, d) = slack_tuple(a);
    let table = denumerant_table(&b, max_n / d);
    (0..=max_n).map(|m| table[(m / d) as usize].clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: &[u64]) -> CoefficientTuple {
        CoefficientTuple::new(v.to_vec()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Independent brute force: every x in the box, no divisibility shortcut.
    fn full_box_count(a: &[u64], n: u64, le: bool) -> u64 {
        fn rec(a: &[u64], rest: i64, le: bool) -> u64 {
            match a.split_first() {
                None => u64::from(rest == 0 || (le && rest >= 0)),
                Some((&first, tail)) => {
                    let mut total = 0;
                    let mut r = rest;
                    while r >= 0 {
                        total += rec(tail, r, le);
                        r -= first as i64;
                    }
                    total
                }
            }
        }
        rec(a, n as i64, le)
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(oracle_count(&t(&[3, 5]), 8).unwrap().value, big(1));
        assert_eq!(oracle_count(&t(&[2, 3, 5]), 10).unwrap().value, big(4));
        for n in 0..20 {
            assert_eq!(oracle_count(&t(&[1, 1]), n).unwrap().value, big(n + 1));
        }
    }

    #[test]
    fn oracle_respects_budget() {
        let err = oracle_count_with_budget(&t(&[1, 1, 1, 1]), 1000, 1000).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn denumerant_examples() {
        assert_eq!(denumerant(&t(&[4, 6]), 7).value, big(0));
        assert_eq!(denumerant(&t(&[2, 3, 5]), 10).value, big(4));
        assert_eq!(denumerant(&t(&[1, 2, 3]), 10).value, big(14));
        assert_eq!(denumerant(&t(&[1, 2, 3]), 10).method, CountMethod::Recursion);
        // k = 1 base case is the divisibility test
        assert_eq!(denumerant(&t(&[3]), 9).value, big(1));
        assert_eq!(denumerant(&t(&[3]), 10).value, big(0));
    }

    #[test]
    fn popoviciu_examples() {
        assert_eq!(popoviciu(3, 5, 8).unwrap().value, big(1));
        assert_eq!(popoviciu(3, 5, 7).unwrap().value, big(0));
        for n in 0..30 {
            assert_eq!(popoviciu(1, 1, n).unwrap().value, big(n + 1));
        }
        assert_eq!(popoviciu(4, 6, 10), Err(Error::NotCoprime { gcd: 2 }));
    }

    #[test]
    fn modular_inverse_examples() {
        assert_eq!(modular_inverse(5, 3), Ok(2));
        assert_eq!(modular_inverse(3, 5), Ok(2));
        for m in 2..20 {
            assert_eq!(modular_inverse(1, m), Ok(1));
        }
        assert_eq!(modular_inverse(7, 1), Ok(0));
        assert_eq!(modular_inverse(4, 6), Err(Error::NotInvertible { x: 4, modulus: 6 }));
    }

    #[test]
    fn extended_examples() {
        assert_eq!(extended_count(&t(&[2, 3]), 6).value, big(7));
        assert_eq!(extended_count(&t(&[4, 6]), 7).value, big(3));
        for n in 0..15 {
            assert_eq!(extended_count(&t(&[1]), n).value, big(n + 1));
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let a = t(&[4, 6, 10]);
        let table = denumerant_table(&a, 60);
        for (n, v) in table.iter().enumerate() {
            assert_eq!(*v, big(full_box_count(a.as_slice(), n as u64, false)));
        }
    }

    fn tuple_strategy(max_k: usize, max_c: u64) -> impl Strategy<Value = Vec<u64>> {
        proptest::collection::vec(1..=max_c, 1..=max_k)
    }

    proptest! {
        #[test]
        fn recursion_matches_oracle(v in tuple_strategy(4, 12), n in 0u64..=200) {
            let a = t(&v);
            let expected = big(full_box_count(&v, n, false));
            prop_assert_eq!(&oracle_count(&a, n).unwrap().value, &expected);
            prop_assert_eq!(denumerant(&a, n).value, expected);
        }

        #[test]
        fn popoviciu_matches_oracle(a1 in 1u64..=12, a2 in 1u64..=12, n in 0u64..=200) {
            prop_assume!(a1.gcd(&a2) == 1);
            prop_assert_eq!(
                popoviciu(a1, a2, n).unwrap().value,
                oracle_count(&t(&[a1, a2]), n).unwrap().value
            );
        }

        #[test]
        fn reduction_both_branches(v in tuple_strategy(4, 12), n in 0u64..=200) {
            let a = t(&v);
            let (c, d) = a.reduced();
            let direct = big(full_box_count(&v, n, false));
            if n % d == 0 {
                prop_assert_eq!(denumerant(&c, n / d).value, direct);
            } else {
                prop_assert_eq!(direct, BigUint::zero());
            }
        }

        #[test]
        fn prefix_recurrence_holds(v in tuple_strategy(4, 12), extra in 1u64..=12, n in 0u64..=150) {
            let a = t(&v);
            let mut longer = v.clone();
            longer.push(extra);
            let summed: BigUint = (0..=n / extra).map(|l| denumerant(&a, n - extra * l).value).sum();
            prop_assert_eq!(denumerant(&t(&longer), n).value, summed);
        }

        #[test]
        fn permutation_invariant(mut v in tuple_strategy(4, 12), n in 0u64..=150, rot in 0usize..4) {
            let before = denumerant(&t(&v), n).value;
            let len = v.len();
            v.rotate_left(rot % len);
            v.reverse();
            prop_assert_eq!(denumerant(&t(&v), n).value, before);
        }

        #[test]
        fn extended_is_prefix_sum(v in tuple_strategy(3, 12), n in 0u64..=120) {
            let a = t(&v);
            let table = denumerant_table(&a, n);
            let prefix: BigUint = table.iter().sum();
            let ext = extended_count(&a, n).value;
            prop_assert_eq!(&ext, &prefix);
            prop_assert_eq!(&ext, &big(full_box_count(&v, n, true)));
            prop_assert!(extended_count(&a, n + 1).value >= ext);
        }
    }
}
