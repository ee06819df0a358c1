//! Upper and lower bounds for the denumerant and the extended denumerant.
//!
//! With `P = (k-1)! a_1 .. a_k`, every coprime tuple satisfies
//! `(n - s-_k)^{k-1} / P <= D(n) <= (n + s+_k)^{k-1} / P`, the lower side for
//! `n >= s-_k` only. The lower side is sharpened by weighting the lower-order
//! powers of `n - s-_k` with Blom-Fröberg numbers. All values are exact
//! rationals; nothing here rounds.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bfnum::{bf_explicit, BfQuery};
use crate::error::{Error, Result};
use crate::rational::{self, factorial, from_int, from_uint, pow, ratio, ExactRational};
use crate::tuple::{gcd_chain, CoefficientTuple};

/// The shift sequences `s+`, `s-`, `r` and the value `T` of a tuple.
///
/// ```text
/// s+_1 = a_1 a_2 / (2 d_2)    s+_{i+1} = s+_i + d_i a_{i+1} / (2 d_{i+1})
/// s-_1 = -a_1                 s-_{i+1} = s-_i + (d_i / d_{i+1} - 1) a_{i+1}
/// r_1  = a_1                  r_{i+1}  = r_i + a_{i+1} / 2
/// T    = sum_{i<k} a_{i+1} d_i / d_{i+1}
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundSequences {
    #[serde(serialize_with = "ser_rationals")]
    pub s_plus: Vec<ExactRational>,
    #[serde(serialize_with = "ser_rationals")]
    pub s_minus: Vec<ExactRational>,
    #[serde(serialize_with = "ser_rationals")]
    pub r: Vec<ExactRational>,
    #[serde(serialize_with = "ser_rational")]
    pub t: ExactRational,
}

impl BoundSequences {
    pub fn s_plus_k(&self) -> &ExactRational {
        self.s_plus.last().expect("k >= 2")
    }

    pub fn s_minus_k(&self) -> &ExactRational {
        self.s_minus.last().expect("k >= 2")
    }

    pub fn r_k(&self) -> &ExactRational {
        self.r.last().expect("k >= 1")
    }
}

pub fn bound_sequences(a: &CoefficientTuple) -> Result<BoundSequences> {
    a.require_len(2)?;
    let v = a.as_slice();
    let d = gcd_chain(a);
    let d = d.as_slice();

    let mut s_plus = Vec::with_capacity(v.len());
    let mut s_minus = Vec::with_capacity(v.len());
    s_plus.push(ratio(BigInt::from(v[0]) * v[1], BigInt::from(2 * d[1])));
    s_minus.push(from_int(-BigInt::from(v[0])));
    for i in 1..v.len() {
        let next_plus = &s_plus[i - 1] + ratio(BigInt::from(d[i - 1]) * v[i], BigInt::from(2 * d[i]));
        let next_minus = &s_minus[i - 1] + ratio(d[i - 1], d[i]) * from_int(v[i]) - from_int(v[i]);
        s_plus.push(next_plus);
        s_minus.push(next_minus);
    }
    Ok(BoundSequences { s_plus, s_minus, r: r_sequence(a), t: t_value(a) })
}

pub fn r_sequence(a: &CoefficientTuple) -> Vec<ExactRational> {
    let v = a.as_slice();
    let mut r = Vec::with_capacity(v.len());
    r.push(from_int(v[0]));
    for i in 1..v.len() {
        let next = &r[i - 1] + ratio(v[i], 2);
        r.push(next);
    }
    r
}

/// `T(a_1..a_k)`; zero for a single coefficient.
pub fn t_value(a: &CoefficientTuple) -> ExactRational {
    let v = a.as_slice();
    let d = gcd_chain(a);
    let d = d.as_slice();
    (1..v.len()).map(|i| ratio(BigInt::from(v[i]) * d[i - 1], d[i])).sum()
}

fn denominator(a: &CoefficientTuple, exp: u32) -> ExactRational {
    from_uint(&(factorial(exp) * a.product()))
}

/// `(n + s)^e / (e! a_1 .. a_k)`.
fn power_bound(a: &CoefficientTuple, base: &ExactRational, exp: u32) -> ExactRational {
    pow(base, exp) / denominator(a, exp)
}

/// The data of one (tuple, n) evaluation of Inequalities A and B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub coeffs: CoefficientTuple,
    pub n: u64,
    #[serde(serialize_with = "ser_opt_uint")]
    pub exact: Option<BigUint>,
    #[serde(serialize_with = "ser_rational")]
    pub lower_a: ExactRational,
    #[serde(serialize_with = "ser_rational")]
    pub upper_a: ExactRational,
    #[serde(serialize_with = "ser_opt_rational")]
    pub lower_b: Option<ExactRational>,
    /// `n >= s-_k`, i.e. whether the lower bounds are claimed at all.
    pub applicable_lower: bool,
    pub sandwich_ok: Option<bool>,
}

impl BoundReport {
    fn finish(mut self) -> Self {
        self.sandwich_ok = self.exact.as_ref().map(|e| {
            let e = from_uint(e);
            let upper_ok = e <= self.upper_a;
            let lower_ok = !self.applicable_lower
                || match &self.lower_b {
                    Some(b) => self.lower_a <= *b && *b <= e,
                    None => self.lower_a <= e,
                };
            upper_ok && lower_ok
        });
        self
    }
}

fn require_bounds_input(a: &CoefficientTuple) -> Result<()> {
    a.require_len(2)?;
    a.require_coprime()
}

/// Inequality A (both sides) and, where it applies, the Inequality B lower bound.
pub fn inequality_a(a: &CoefficientTuple, n: u64, exact: Option<BigUint>) -> Result<BoundReport> {
    Ok(BoundEvaluator::new(a)?.report(n, exact))
}

/// Per-tuple data of Inequalities A and B, for evaluating many `n`.
#[derive(Debug, Clone)]
pub struct BoundEvaluator {
    coeffs: CoefficientTuple,
    seq: BoundSequences,
    denom: ExactRational,
    /// `[[k-2, i]]^a_2 / ((k-1-i)! prod a_i)` for `i = 0..k-1`.
    weights: Vec<ExactRational>,
}

impl BoundEvaluator {
    pub fn new(a: &CoefficientTuple) -> Result<Self> {
        require_bounds_input(a)?;
        let seq = bound_sequences(a)?;
        let top = a.len() as u32 - 1;
        let p = from_uint(&a.product());
        let weights = (0..top)
            .map(|i| {
                let w = bf_explicit(a, BfQuery::new(2, i64::from(top) - 1, i64::from(i)))?;
                Ok(w / from_uint(&factorial(top - i)) / &p)
            })
            .collect::<Result<_>>()?;
        Ok(Self { coeffs: a.clone(), denom: denominator(a, top), seq, weights })
    }

    pub fn sequences(&self) -> &BoundSequences {
        &self.seq
    }

    pub fn report(&self, n: u64, exact: Option<BigUint>) -> BoundReport {
        let e = self.coeffs.len() as u32 - 1;
        let nq = from_int(n);
        let s_minus = self.seq.s_minus_k();
        let applicable = nq >= *s_minus;
        let x = &nq - s_minus;
        let lower_b = applicable.then(|| {
            self.weights.iter().enumerate().map(|(i, w)| w * pow(&x, e - i as u32)).sum::<ExactRational>()
        });
        BoundReport {
            coeffs: self.coeffs.clone(),
            n,
            exact,
            lower_a: pow(&x, e) / &self.denom,
            upper_a: pow(&(&nq + self.seq.s_plus_k()), e) / &self.denom,
            lower_b,
            applicable_lower: applicable,
            sandwich_ok: None,
        }
        .finish()
    }
}

/// `(1 / prod a_i) sum_{i=0}^{k-2} [[k-2, i]]^a_2 (n - s-_k)^{k-1-i} / (k-1-i)!`.
pub fn inequality_b_lower(a: &CoefficientTuple, n: u64) -> Result<ExactRational> {
    require_bounds_input(a)?;
    let seq = bound_sequences(a)?;
    let s_minus = seq.s_minus_k();
    let nq = from_int(n);
    if nq < *s_minus {
        return Err(Error::NotApplicable { n, threshold: rational::format(s_minus) });
    }
    weighted_lower(a, 2, &(nq - s_minus), a.len() as u32 - 1)
}

/// `(1 / prod a_i) sum_{i=0}^{top-1} [[top-1, i]]^a_offset x^{top-i} / (top-i)!`.
fn weighted_lower(a: &CoefficientTuple, offset: usize, x: &ExactRational, top: u32) -> Result<ExactRational> {
    let m = i64::from(top) - 1;
    let mut total = ExactRational::zero();
    for i in 0..top {
        let w = bf_explicit(a, BfQuery::new(offset, m, i64::from(i)))?;
        total += w * pow(x, top - i) / from_uint(&factorial(top - i));
    }
    Ok(total / from_uint(&a.product()))
}

/// Leading term `n^{k-1} / ((k-1)! prod a_i)`.
pub fn main_term(a: &CoefficientTuple, n: u64) -> Result<ExactRational> {
    a.require_len(2)?;
    Ok(power_bound(a, &from_int(n), a.len() as u32 - 1))
}

/// Divides out `d = gcd(a)`. `None` when `d` does not divide `n` (the count is zero).
pub fn reduce_instance(a: &CoefficientTuple, n: u64) -> Option<(CoefficientTuple, u64)> {
    let (c, d) = a.reduced();
    n.is_multiple_of(d).then(|| (c, n / d))
}

/// Bounds for the extended denumerant, valid for any gcd `d`:
/// `(dm + d)^k / (k! P) <= middle <= D^(n) <= (dm + r_k)^k / (k! P)` with `m = floor(n/d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DhatReport {
    pub coeffs: CoefficientTuple,
    pub n: u64,
    pub d: u64,
    #[serde(serialize_with = "ser_opt_uint")]
    pub exact: Option<BigUint>,
    #[serde(serialize_with = "ser_rational")]
    pub lower: ExactRational,
    #[serde(serialize_with = "ser_rational")]
    pub middle: ExactRational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: ExactRational,
    pub lower_le_middle: bool,
    pub chain_ok: Option<bool>,
}

pub fn dhat_bounds(a: &CoefficientTuple, n: u64, exact: Option<BigUint>) -> Result<DhatReport> {
    let k = a.len() as u32;
    let d = a.gcd();
    let base = from_int(BigInt::from(n / d) * d);
    let lower = power_bound(a, &(&base + from_int(d)), k);
    let middle = weighted_lower(a, 1, &(&base + from_int(d)), k)?;
    let upper = power_bound(a, &(&base + r_sequence(a).pop().expect("k >= 1")), k);
    let lower_le_middle = lower <= middle;
    let chain_ok = exact.as_ref().map(|e| {
        let e = from_uint(e);
        lower_le_middle && middle <= e && e <= upper
    });
    Ok(DhatReport { coeffs: a.clone(), n, d, exact, lower, middle, upper, lower_le_middle, chain_ok })
}

/// Pairs `([[k-1, i]]^b_2, [[k-1, i]]^a_1 / d^i)` for `i = 0..k-1`, where
/// `b = (1, a_1/d, .., a_k/d)`. The two entries of each pair coincide.
pub fn slack_weight_pairs(a: &CoefficientTuple) -> Result<Vec<(ExactRational, ExactRational)>> {
    let (b, d) = crate::exact::slack_tuple(a);
    let m = a.len() as i64 - 1;
    (0..a.len() as i64)
        .map(|i| {
            let via_b = bf_explicit(&b, BfQuery::new(2, m, i))?;
            let via_a = bf_explicit(a, BfQuery::new(1, m, i))?
                / from_int(num_traits::pow(BigInt::from(d), i as usize));
            Ok((via_b, via_a))
        })
        .collect()
}

/// The `a_1 = 1` chain
/// `(n+1)^{k-1}/P <= B-lower <= D(n) <= (n + s_k)^{k-1}/P`, `s_k = a_2 + (a_3 + .. + a_k)/2`.
pub fn blomfroberg_specialization(a: &CoefficientTuple, n: u64, exact: Option<BigUint>) -> Result<BoundReport> {
    a.require_len(2)?;
    if a.get(1)? != 1 {
        return Err(Error::Precondition(format!("a_1 must be 1, got {}", a.get(1)?)));
    }
    let seq = bound_sequences(a)?;
    assert!(
        seq.s_minus.iter().all(|s| *s == from_int(-1)),
        "s- must be constantly -1 when a_1 = 1"
    );
    let v = a.as_slice();
    let tail: u64 = v[2..].iter().sum();
    let s_k = from_int(v[1]) + ratio(tail, 2);
    debug_assert_eq!(&s_k, seq.s_plus_k());

    let k = a.len() as u32;
    let nq = from_int(n);
    Ok(BoundReport {
        coeffs: a.clone(),
        n,
        exact,
        lower_a: power_bound(a, &(&nq + ExactRational::one()), k - 1),
        upper_a: power_bound(a, &(&nq + s_k), k - 1),
        lower_b: Some(weighted_lower(a, 2, &(&nq + ExactRational::one()), k - 1)?),
        applicable_lower: true,
        sandwich_ok: None,
    }
    .finish())
}

/// `(1 - s-_k/n)^{k-1} <= D(n) (k-1)! P / n^{k-1} <= (1 + s+_k/n)^{k-1}` for `n > s-_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AsymptoticCheck {
    #[serde(serialize_with = "ser_rational")]
    pub low: ExactRational,
    #[serde(serialize_with = "ser_rational")]
    pub ratio: ExactRational,
    #[serde(serialize_with = "ser_rational")]
    pub high: ExactRational,
}

impl AsymptoticCheck {
    pub fn holds(&self) -> bool {
        self.low <= self.ratio && self.ratio <= self.high
    }
}

pub fn asymptotic_check(a: &CoefficientTuple, n: u64, exact: &BigUint) -> Result<AsymptoticCheck> {
    require_bounds_input(a)?;
    let seq = bound_sequences(a)?;
    let nq = from_int(n);
    if n == 0 || nq <= *seq.s_minus_k() {
        return Err(Error::NotApplicable { n, threshold: rational::format(seq.s_minus_k()) });
    }
    let e = a.len() as u32 - 1;
    let ratio = from_uint(exact) * denominator(a, e) / pow(&nq, e);
    let one = ExactRational::one();
    Ok(AsymptoticCheck {
        low: pow(&(&one - seq.s_minus_k() / &nq), e),
        ratio,
        high: pow(&(&one + seq.s_plus_k() / &nq), e),
    })
}

pub(crate) fn ser_rational<S: serde::Serializer>(x: &ExactRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(x))
}

pub(crate) fn ser_rationals<S: serde::Serializer>(
    xs: &[ExactRational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(rational::format))
}

pub(crate) fn ser_opt_rational<S: serde::Serializer>(
    x: &Option<ExactRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&rational::format(x)),
        None => s.serialize_none(),
    }
}

pub(crate) fn ser_opt_uint<S: serde::Serializer>(x: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_str(&x.to_string()),
        None => s.serialize_none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{denumerant, denumerant_table, extended_count};
    use proptest::prelude::*;

    fn t(v: &[u64]) -> CoefficientTuple {
        CoefficientTuple::new(v.to_vec()).unwrap()
    }

    fn q(p: i64, d: i64) -> ExactRational {
        ratio(p, d)
    }

    #[test]
    fn sequences_for_two_three() {
        let s = bound_sequences(&t(&[2, 3])).unwrap();
        assert_eq!(s.s_plus, vec![q(3, 1), q(6, 1)]);
        assert_eq!(s.s_minus, vec![q(-2, 1), q(1, 1)]);
        assert_eq!(s.r, vec![q(2, 1), q(7, 2)]);
    }

    #[test]
    fn sequences_for_four_six_nine() {
        let s = bound_sequences(&t(&[4, 6, 9])).unwrap();
        assert_eq!(s.s_minus, vec![q(-4, 1), q(2, 1), q(11, 1)]);
        assert_eq!(s.t, q(30, 1));
    }

    #[test]
    fn unit_first_coefficient_pins_s_minus() {
        let s = bound_sequences(&t(&[1, 7, 4, 9, 2])).unwrap();
        assert!(s.s_minus.iter().all(|x| *x == q(-1, 1)));
    }

    #[test]
    fn sequences_need_two_coefficients() {
        assert_eq!(bound_sequences(&t(&[5])), Err(Error::TooShortTuple { needed: 2, got: 1 }));
        assert_eq!(t_value(&t(&[5])), ExactRational::zero());
        assert_eq!(r_sequence(&t(&[5])), vec![q(5, 1)]);
    }

    #[test]
    fn inequality_a_examples() {
        let r = inequality_a(&t(&[3, 5]), 8, Some(BigUint::from(1u32))).unwrap();
        assert_eq!(r.upper_a, q(23, 15));
        assert_eq!(r.lower_a, q(1, 15));
        assert!(r.applicable_lower);
        assert_eq!(r.sandwich_ok, Some(true));

        let r = inequality_a(&t(&[1, 1]), 5, Some(BigUint::from(6u32))).unwrap();
        assert_eq!((r.lower_a.clone(), r.upper_a.clone()), (q(6, 1), q(6, 1)));
        assert_eq!(r.sandwich_ok, Some(true));

        let r = inequality_a(&t(&[2, 3]), 0, Some(BigUint::from(1u32))).unwrap();
        assert_eq!(r.upper_a, q(1, 1));
        assert_eq!(r.sandwich_ok, Some(true));
        assert!(!r.applicable_lower);
        assert_eq!(r.lower_b, None);
    }

    #[test]
    fn inequality_a_rejects_bad_input() {
        assert_eq!(inequality_a(&t(&[4, 6]), 8, None), Err(Error::NotCoprime { gcd: 2 }));
        assert!(matches!(inequality_a(&t(&[4]), 8, None), Err(Error::TooShortTuple { .. })));
    }

    #[test]
    fn inequality_b_examples() {
        assert_eq!(inequality_b_lower(&t(&[1, 2, 3]), 10).unwrap(), q(77, 6));
        assert_eq!(inequality_b_lower(&t(&[1, 1]), 0).unwrap(), q(1, 1));
        assert!(matches!(inequality_b_lower(&t(&[3, 5]), 6), Err(Error::NotApplicable { .. })));
        for n in 7..40u64 {
            assert_eq!(inequality_b_lower(&t(&[3, 5]), n).unwrap(), q(n as i64 - 7, 15));
        }
    }

    #[test]
    fn main_term_examples() {
        assert_eq!(main_term(&t(&[3, 5]), 30).unwrap(), q(2, 1));
        assert_eq!(main_term(&t(&[1, 1]), 7).unwrap(), q(7, 1));
        assert_eq!(main_term(&t(&[2, 3, 5]), 100).unwrap(), q(500, 3));
    }

    #[test]
    fn dhat_examples() {
        let r = dhat_bounds(&t(&[2, 3]), 6, Some(BigUint::from(7u32))).unwrap();
        assert_eq!((r.lower.clone(), r.middle.clone(), r.upper.clone()), (q(49, 12), q(35, 6), q(361, 48)));
        assert_eq!(r.chain_ok, Some(true));

        let r = dhat_bounds(&t(&[1]), 5, Some(BigUint::from(6u32))).unwrap();
        assert_eq!(r.lower, q(6, 1));
        assert_eq!(r.chain_ok, Some(true));

        let r = dhat_bounds(&t(&[4, 6]), 7, Some(extended_count(&t(&[4, 6]), 7).value)).unwrap();
        assert_eq!(r.d, 2);
        assert_eq!(r.lower, q(4, 3));
        assert_eq!(r.exact, Some(BigUint::from(3u32)));
        assert_eq!(r.chain_ok, Some(true));
    }

    #[test]
    fn blomfroberg_examples() {
        let r = blomfroberg_specialization(&t(&[1, 2]), 4, Some(BigUint::from(3u32))).unwrap();
        assert_eq!((r.lower_a.clone(), r.upper_a.clone()), (q(5, 2), q(3, 1)));
        assert_eq!(r.sandwich_ok, Some(true));

        let r = blomfroberg_specialization(&t(&[1, 1, 1]), 0, Some(BigUint::from(1u32))).unwrap();
        assert_eq!((r.lower_a.clone(), r.upper_a.clone()), (q(1, 2), q(9, 8)));
        assert_eq!(r.sandwich_ok, Some(true));

        assert!(matches!(blomfroberg_specialization(&t(&[2, 3]), 4, None), Err(Error::Precondition(_))));
    }

    #[test]
    fn reduce_instance_branches() {
        assert_eq!(reduce_instance(&t(&[4, 6]), 8), Some((t(&[2, 3]), 4)));
        assert_eq!(reduce_instance(&t(&[4, 6]), 7), None);
    }

    fn coprime_tuple(max_k: usize, max_c: u64) -> impl Strategy<Value = CoefficientTuple> {
        proptest::collection::vec(1..=max_c, 2..=max_k).prop_map(|v| t(&v).reduced().0)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn sandwich_over_a_range(a in coprime_tuple(5, 15)) {
            let table = denumerant_table(&a, 150);
            for (n, exact) in table.into_iter().enumerate() {
                let r = inequality_a(&a, n as u64, Some(exact)).unwrap();
                prop_assert_eq!(r.sandwich_ok, Some(true), "{:?}", r);
                if a.len() == 2 && r.applicable_lower {
                    prop_assert_eq!(r.lower_b.as_ref(), Some(&r.lower_a));
                }
            }
        }

        #[test]
        fn evaluator_lower_b_matches_direct_sum(a in coprime_tuple(5, 15), n in 0u64..300) {
            let r = inequality_a(&a, n, None).unwrap();
            match inequality_b_lower(&a, n) {
                Ok(b) => prop_assert_eq!(r.lower_b, Some(b)),
                Err(_) => prop_assert!(r.lower_b.is_none() && !r.applicable_lower),
            }
        }

        #[test]
        fn t_identities(a in coprime_tuple(6, 40)) {
            let s = bound_sequences(&a).unwrap();
            let v = a.as_slice();
            let sum = from_uint(&a.sum());
            prop_assert_eq!(s.s_minus_k(), &(&s.t - sum));
            let d2 = gcd_chain(&a).get(2);
            prop_assert_eq!(s.s_plus_k().clone(), &s.t / from_int(2) + ratio(v[0] * v[1], 2 * d2));
            for w in s.s_plus.windows(2) { prop_assert!(w[0] < w[1]); }
            for w in s.s_minus.windows(2) { prop_assert!(w[0] <= w[1]); }
        }

        #[test]
        fn dhat_chain_any_gcd(v in proptest::collection::vec(1u64..=12, 1..=4), n in 0u64..=80) {
            let a = t(&v);
            let exact = extended_count(&a, n).value;
            let r = dhat_bounds(&a, n, Some(exact)).unwrap();
            prop_assert_eq!(r.chain_ok, Some(true), "{:?}", r);
            for (via_b, via_a) in slack_weight_pairs(&a).unwrap() {
                prop_assert_eq!(via_b, via_a);
            }
        }

        #[test]
        fn blomfroberg_chain(tail in proptest::collection::vec(1u64..=10, 1..=4), n in 0u64..=80) {
            let mut v = vec![1];
            v.extend(tail);
            let a = t(&v);
            let r = blomfroberg_specialization(&a, n, Some(denumerant(&a, n).value)).unwrap();
            prop_assert_eq!(r.sandwich_ok, Some(true));
            prop_assert!(r.lower_a <= *r.lower_b.as_ref().unwrap());
        }
    }
}
