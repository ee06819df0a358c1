//! Seeded verification sweeps.
//!
//! Instances are drawn from a SplitMix64 stream so that any port can
//! reproduce them from the seed alone:
//!
//! ```text
//! state <- state + 0x9E3779B97F4A7C15
//! z <- state
//! z <- (z xor (z >> 30)) * 0xBF58476D1CE4E5B9
//! z <- (z xor (z >> 27)) * 0x94D049BB133111EB
//! output z xor (z >> 31)
//! ```
//!
//! A value in `[lo, hi]` is `lo + output mod (hi - lo + 1)`. Each instance
//! draws `k` first, then the `k` coefficients in order, then (where the
//! suite uses a single `n`) `n`. Coprime suites divide the drawn tuple by
//! its gcd. Instances are generated sequentially and evaluated in parallel;
//! results are merged in instance order, so reports are byte-identical for
//! a fixed configuration.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::bfnum::{bf_explicit, bf_recursive, scaling_bound_sides, shift_identity_sides, BfQuery};
use crate::bounds::{self, asymptotic_check, dhat_bounds, slack_weight_pairs, BoundEvaluator};
use crate::error::{Error, Result};
use crate::exact::{denumerant_table, extended_count_table, oracle_count, popoviciu};
use crate::frobenius::bound_frobenius;
use crate::powersum::{check_sum_bounds, refined_upper_sides, step_sides, PowerSumQuery};
use crate::rational::{self, from_int, from_uint, ratio, ExactRational};
use crate::tuple::CoefficientTuple;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform-ish draw from `lo..=hi`.
    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        debug_assert!(lo <= hi);
        let span = hi - lo;
        if span == u64::MAX {
            return self.next_u64();
        }
        lo + self.next_u64() % (span + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    OracleEq,
    InequalityA,
    InequalityB,
    Powersum,
    Popoviciu,
    Dhat,
    Frobenius,
    BfIdentities,
    Asymptotic,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::OracleEq,
        Suite::InequalityA,
        Suite::InequalityB,
        Suite::Powersum,
        Suite::Popoviciu,
        Suite::Dhat,
        Suite::Frobenius,
        Suite::BfIdentities,
        Suite::Asymptotic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::OracleEq => "oracle-eq",
            Suite::InequalityA => "inequality-a",
            Suite::InequalityB => "inequality-b",
            Suite::Powersum => "powersum",
            Suite::Popoviciu => "popoviciu",
            Suite::Dhat => "dhat",
            Suite::Frobenius => "frobenius",
            Suite::BfIdentities => "bf-identities",
            Suite::Asymptotic => "asymptotic",
        }
    }

    fn needs_coprime(self) -> bool {
        matches!(
            self,
            Suite::InequalityA | Suite::InequalityB | Suite::Popoviciu | Suite::Frobenius | Suite::Asymptotic
        )
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepConfig {
    pub suite: Suite,
    pub seed: u64,
    pub trials: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub max_coeff: u64,
    pub n_max: u64,
}

impl SweepConfig {
    pub fn new(suite: Suite) -> Self {
        Self { suite, seed: 1, trials: 200, k_min: 2, k_max: 4, max_coeff: 12, n_max: 120 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Domain("trials must be positive".into()));
        }
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(Error::Domain(format!("invalid k range {}..={}", self.k_min, self.k_max)));
        }
        if self.max_coeff == 0 {
            return Err(Error::Domain("max coefficient must be positive".into()));
        }
        if self.suite.needs_coprime() && self.k_min < 2 {
            return Err(Error::Domain(format!("suite {} needs k >= 2", self.suite)));
        }
        Ok(())
    }
}

/// One violated relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub instance: String,
    pub expected_relation: String,
    pub lhs: String,
    pub rhs: String,
}

impl Failure {
    fn new(instance: impl Into<String>, relation: &str, lhs: impl ToString, rhs: impl ToString) -> Self {
        Self { instance: instance.into(), expected_relation: relation.into(), lhs: lhs.to_string(), rhs: rhs.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub config: SweepConfig,
    pub instances: usize,
    pub checks: u64,
    pub failures: Vec<Failure>,
    pub passed: bool,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    /// Deterministic JSON (wall time excluded).
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Outcome of checking one instance.
#[derive(Debug, Default)]
struct Outcome {
    checks: u64,
    failures: Vec<Failure>,
}

impl Outcome {
    fn check(&mut self, ok: bool, failure: impl FnOnce() -> Failure) {
        self.checks += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    fn le(&mut self, instance: &str, relation: &str, lhs: &ExactRational, rhs: &ExactRational) {
        self.check(lhs <= rhs, || Failure::new(instance, relation, rational::format(lhs), rational::format(rhs)));
    }

    fn eq<T: PartialEq + ToString>(&mut self, instance: &str, relation: &str, lhs: &T, rhs: &T) {
        self.check(lhs == rhs, || Failure::new(instance, relation, lhs.to_string(), rhs.to_string()));
    }

    fn error(&mut self, instance: &str, relation: &str, err: &Error) {
        self.check(false, || Failure::new(instance, relation, err, "no error"));
    }
}

fn label(a: &CoefficientTuple, n: Option<u64>) -> String {
    match n {
        Some(n) => format!("a=({a}) n={n}"),
        None => format!("a=({a})"),
    }
}

#[derive(Debug, Clone)]
struct Instance {
    a: CoefficientTuple,
    n: u64,
}

fn draw_tuple(rng: &mut SplitMix64, k: usize, max_coeff: u64, coprime: bool) -> CoefficientTuple {
    let coeffs: Vec<u64> = (0..k).map(|_| rng.range(1, max_coeff)).collect();
    let a = CoefficientTuple::new(coeffs).expect("draws are positive");
    if coprime {
        a.reduced().0
    } else {
        a
    }
}

fn generate(cfg: &SweepConfig) -> Vec<Instance> {
    let mut rng = SplitMix64::new(cfg.seed);
    let coprime = cfg.suite.needs_coprime();
    (0..cfg.trials)
        .map(|_| {
            let k = match cfg.suite {
                Suite::Popoviciu => 2,
                Suite::BfIdentities => BF_TUPLE_LEN,
                _ => rng.range(cfg.k_min as u64, cfg.k_max as u64) as usize,
            };
            let a = draw_tuple(&mut rng, k, cfg.max_coeff, coprime);
            let n = if cfg.suite == Suite::OracleEq { rng.range(0, cfg.n_max) } else { 0 };
            Instance { a, n }
        })
        .collect()
}

const BF_TUPLE_LEN: usize = 8;
const BF_MAX_M: i64 = 6;
pub const ASYMPTOTIC_POINTS: [u64; 2] = [1_000, 10_000];

pub fn run_verify(cfg: &SweepConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let outcomes: Vec<Outcome> = if cfg.suite == Suite::Powersum {
        powersum_grid()
    } else {
        let instances = generate(cfg);
        instances.par_iter().map(|inst| check_instance(cfg, inst)).collect()
    };
    let instances = outcomes.len();
    let checks = outcomes.iter().map(|o| o.checks).sum();
    let failures: Vec<Failure> = outcomes.into_iter().flat_map(|o| o.failures).collect();
    Ok(VerificationReport {
        suite: cfg.suite,
        config: cfg.clone(),
        instances,
        checks,
        passed: failures.is_empty(),
        failures,
        wall_time: start.elapsed(),
    })
}

fn check_instance(cfg: &SweepConfig, inst: &Instance) -> Outcome {
    let mut out = Outcome::default();
    let a = &inst.a;
    match cfg.suite {
        Suite::OracleEq => {
            let first = oracle_eq_failure(a, inst.n);
            out.checks += 1;
            if first.is_some() {
                let (a, n) = shrink(a.clone(), inst.n, |a, n| oracle_eq_failure(a, n).is_some());
                out.failures.extend(oracle_eq_failure(&a, n));
            }
        }
        Suite::Popoviciu => {
            for n in 0..=cfg.n_max {
                let first = popoviciu_failure(a, n);
                out.checks += 1;
                if first.is_some() {
                    let (a, n) = shrink(a.clone(), n, |a, n| popoviciu_failure(a, n).is_some());
                    out.failures.extend(popoviciu_failure(&a, n));
                    break;
                }
            }
        }
        Suite::InequalityA | Suite::InequalityB => {
            let eval = match BoundEvaluator::new(a) {
                Ok(e) => e,
                Err(e) => {
                    out.error(&label(a, None), "bounds", &e);
                    return out;
                }
            };
            let table = denumerant_table(a, cfg.n_max);
            for (n, exact) in table.into_iter().enumerate() {
                check_inequalities(cfg.suite, &eval, a, n as u64, exact, &mut out);
            }
        }
        Suite::Dhat => check_dhat(a, cfg.n_max, &mut out),
        Suite::Frobenius => check_frobenius(a, &mut out),
        Suite::BfIdentities => check_bf(a, &mut out),
        Suite::Asymptotic => check_asymptotic(a, &mut out),
        Suite::Powersum => unreachable!("grid suite"),
    }
    out
}

/// Greedy counterexample minimization: lower `n` while the instance still
/// fails, then lower each coefficient in turn.
pub fn shrink(
    mut a: CoefficientTuple,
    mut n: u64,
    fails: impl Fn(&CoefficientTuple, u64) -> bool,
) -> (CoefficientTuple, u64) {
    while n > 0 && fails(&a, n - 1) {
        n -= 1;
    }
    for i in 0..a.len() {
        loop {
            let mut v = a.as_slice().to_vec();
            if v[i] <= 1 {
                break;
            }
            v[i] -= 1;
            let candidate = CoefficientTuple::new(v).expect("positive");
            if fails(&candidate, n) {
                a = candidate;
            } else {
                break;
            }
        }
    }
    (a, n)
}

fn oracle_eq_failure(a: &CoefficientTuple, n: u64) -> Option<Failure> {
    let id = label(a, Some(n));
    let oracle = match oracle_count(a, n) {
        Ok(v) => v.value,
        Err(e) => return Some(Failure::new(id, "oracle_count", e, "a count")),
    };
    let recursion = crate::exact::denumerant(a, n).value;
    if recursion != oracle {
        return Some(Failure::new(id, "denumerant = oracle_count", recursion, oracle));
    }
    if a.len() == 2 && a.is_coprime() {
        return popoviciu_failure(a, n);
    }
    None
}

fn popoviciu_failure(a: &CoefficientTuple, n: u64) -> Option<Failure> {
    let id = label(a, Some(n));
    let (a1, a2) = (a.as_slice()[0], a.as_slice()[1]);
    let oracle = match oracle_count(a, n) {
        Ok(v) => v.value,
        Err(e) => return Some(Failure::new(id, "oracle_count", e, "a count")),
    };
    match popoviciu(a1, a2, n) {
        Ok(v) if v.value == oracle => None,
        Ok(v) => Some(Failure::new(id, "popoviciu = oracle_count", v.value, oracle)),
        Err(e) => Some(Failure::new(id, "popoviciu", e, "a count")),
    }
}

fn check_inequalities(suite: Suite, eval: &BoundEvaluator, a: &CoefficientTuple, n: u64, exact: BigUint, out: &mut Outcome) {
    let id = label(a, Some(n));
    let report = eval.report(n, Some(exact.clone()));
    let exact = from_uint(&exact);
    if suite == Suite::InequalityA {
        out.le(&id, "exact <= upper_a", &exact, &report.upper_a);
        if report.applicable_lower {
            out.le(&id, "lower_a <= exact", &report.lower_a, &exact);
        }
        return;
    }
    if !report.applicable_lower {
        return;
    }
    let Some(lower_b) = report.lower_b.as_ref() else {
        return out.error(&id, "inequality_b_lower", &Error::Precondition("missing lower_b".into()));
    };
    out.le(&id, "lower_a <= lower_b", &report.lower_a, lower_b);
    out.le(&id, "lower_b <= exact", lower_b, &exact);
    if a.len() == 2 {
        out.eq(&id, "lower_a = lower_b (k = 2)", &rational::format(&report.lower_a), &rational::format(lower_b));
    }
}

fn check_dhat(a: &CoefficientTuple, n_max: u64, out: &mut Outcome) {
    let ext = extended_count_table(a, n_max);
    let table = denumerant_table(a, n_max);
    let mut prefix = BigUint::zero();
    for (n, (e, d)) in ext.into_iter().zip(table).enumerate() {
        let id = label(a, Some(n as u64));
        prefix += d;
        out.eq(&id, "extended_count = prefix sum of denumerant", &e, &prefix);
        match dhat_bounds(a, n as u64, Some(e.clone())) {
            Ok(r) => {
                let e = from_uint(&e);
                out.le(&id, "dhat lower <= middle", &r.lower, &r.middle);
                out.le(&id, "dhat middle <= exact", &r.middle, &e);
                out.le(&id, "dhat exact <= upper", &e, &r.upper);
            }
            Err(err) => out.error(&id, "dhat_bounds", &err),
        }
    }
    let id = label(a, None);
    match slack_weight_pairs(a) {
        Ok(pairs) => {
            for (via_b, via_a) in pairs {
                out.eq(&id, "[[k-1,i]]^b_2 = [[k-1,i]]^a_1 / d^i", &rational::format(&via_b), &rational::format(&via_a));
            }
        }
        Err(err) => out.error(&id, "slack_weight_pairs", &err),
    }
}

fn check_frobenius(a: &CoefficientTuple, out: &mut Outcome) {
    let id = label(a, None);
    let report = match bound_frobenius(a) {
        Ok(r) => r,
        Err(e) => return out.error(&id, "bound_frobenius", &e),
    };
    let g = from_int(report.g);
    out.le(&id, "g <= s-_k", &g, &report.brauer_upper);
    if report.g_defined() {
        out.le(&id, "root_lower_1 <= g", &from_int(report.root_lower_1.clone()), &g);
        out.le(&id, "root_lower_2 <= g", &from_int(report.root_lower_2.clone()), &g);
    }
    // g is non-representable, everything in the window above it is representable
    let top = (report.g + a.min() as i64).max(0) as u64;
    let table = denumerant_table(a, top);
    if report.g_defined() {
        out.eq(&id, "denumerant(a, g) = 0", &table[report.g as usize], &BigUint::zero());
    }
    let first = (report.g + 1) as usize;
    for (n, v) in table.iter().enumerate().skip(first) {
        out.check(!v.is_zero(), || Failure::new(label(a, Some(n as u64)), "denumerant(a, n) > 0 for n > g", v, "0"));
    }
    if a.len() == 2 {
        let (a1, a2) = (a.as_slice()[0] as i64, a.as_slice()[1] as i64);
        out.eq(&id, "g = a1 a2 - a1 - a2", &report.g, &(a1 * a2 - a1 - a2));
    }
}

fn check_bf(a: &CoefficientTuple, out: &mut Outcome) {
    let len = a.len();
    let id = label(a, None);
    for r in 0..=2usize {
        for m in -1..=BF_MAX_M {
            if m >= 1 && m as usize + r > len {
                continue;
            }
            for l in -1..=m + 1 {
                let q = BfQuery::new(r, m, l);
                let qid = format!("{id} r={r} m={m} l={l}");
                match (bf_recursive(a, q), bf_explicit(a, q)) {
                    (Ok(x), Ok(y)) => out.eq(&qid, "bf_recursive = bf_explicit", &rational::format(&x), &rational::format(&y)),
                    (Err(e), _) | (_, Err(e)) => out.error(&qid, "bf", &e),
                }
                if r >= 1 && (m != 0 || l == 0) {
                    match shift_identity_sides(a, q) {
                        Ok((lhs, rhs)) => out.eq(&qid, "shift identity", &rational::format(&lhs), &rational::format(&rhs)),
                        Err(e) => out.error(&qid, "shift identity", &e),
                    }
                }
                if m >= 0 && (m as usize) < len {
                    match scaling_bound_sides(a, q) {
                        Ok((lhs, rhs)) => out.le(&qid, "scaling bound", &lhs, &rhs),
                        Err(e) => out.error(&qid, "scaling bound", &e),
                    }
                }
            }
        }
    }
}

fn check_asymptotic(a: &CoefficientTuple, out: &mut Outcome) {
    let top = *ASYMPTOTIC_POINTS.iter().max().expect("non-empty");
    let table = denumerant_table(a, top);
    let s_minus = match bounds::bound_sequences(a) {
        Ok(s) => s.s_minus_k().clone(),
        Err(e) => return out.error(&label(a, None), "bound_sequences", &e),
    };
    for n in ASYMPTOTIC_POINTS {
        if from_int(n) <= s_minus {
            continue;
        }
        let id = label(a, Some(n));
        match asymptotic_check(a, n, &table[n as usize]) {
            Ok(c) => {
                out.le(&id, "(1 - s-/n)^(k-1) <= ratio", &c.low, &c.ratio);
                out.le(&id, "ratio <= (1 + s+/n)^(k-1)", &c.ratio, &c.high);
            }
            Err(e) => out.error(&id, "asymptotic_check", &e),
        }
    }
}

pub const POWERSUM_KS: std::ops::RangeInclusive<u32> = 2..=8;
pub const POWERSUM_C_EIGHTHS: [i64; 5] = [0, 1, 2, 3, 4];
pub const POWERSUM_STEPS: i64 = 320;
const POWERSUM_STEP_N: u64 = 20;

/// One outcome per (k, c) pair; the grid does not depend on the seed.
fn powersum_grid() -> Vec<Outcome> {
    let pairs: Vec<(u32, i64)> =
        POWERSUM_KS.flat_map(|k| POWERSUM_C_EIGHTHS.iter().map(move |&c| (k, c))).collect();
    pairs
        .par_iter()
        .map(|&(k, c8)| {
            let mut out = Outcome::default();
            let c = ratio(c8, 8);
            for j in 0..=POWERSUM_STEPS {
                let x = -c.clone() + ratio(j, 16);
                let id = format!("k={k} c={} x={}", rational::format(&c), rational::format(&x));
                let q = match PowerSumQuery::new(x, c.clone(), k) {
                    Ok(q) => q,
                    Err(e) => {
                        out.error(&id, "power_sum query", &e);
                        continue;
                    }
                };
                match check_sum_bounds(&q) {
                    Ok(chk) => {
                        out.check(chk.lower_le_middle, || Failure::new(&id, "lower <= middle", "false", "true"));
                        out.check(chk.middle_le_sum, || Failure::new(&id, "middle <= f_k", "false", "true"));
                        out.check(chk.sum_le_upper, || Failure::new(&id, "f_k <= upper", "false", "true"));
                    }
                    Err(e) => out.error(&id, "check_sum_bounds", &e),
                }
                match refined_upper_sides(&q) {
                    Ok((f, h)) => out.le(&id, "f_k <= refined upper", &f, &h),
                    Err(e) => out.error(&id, "refined upper", &e),
                }
            }
            for n in 0..POWERSUM_STEP_N {
                let id = format!("k={k} c={} n={n}", rational::format(&c));
                match step_sides(n, &c, k) {
                    Ok((lhs, rhs)) => {
                        out.eq(&id, "f_k(n+1) - f_k(n) = (n+1+c)^k", &rational::format(&lhs), &rational::format(&rhs))
                    }
                    Err(e) => out.error(&id, "step identity", &e),
                }
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 0 of the reference SplitMix64.
        let mut rng = SplitMix64::new(0);
        assert_eq!(rng.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(rng.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(rng.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn generation_is_deterministic_and_coprime() {
        let mut cfg = SweepConfig::new(Suite::InequalityA);
        cfg.seed = 42;
        let a = generate(&cfg);
        let b = generate(&cfg);
        assert_eq!(a.len(), 200);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.a, y.a);
            assert!(x.a.is_coprime());
            assert!((2..=4).contains(&x.a.len()));
        }
    }

    #[test]
    fn shrink_minimizes_greedily() {
        // "fails" whenever n >= 5 and the first coefficient is at least 3
        let fails = |a: &CoefficientTuple, n: u64| n >= 5 && a.as_slice()[0] >= 3;
        let (a, n) = shrink(CoefficientTuple::new(vec![9, 7]).unwrap(), 40, fails);
        assert_eq!(n, 5);
        assert_eq!(a.as_slice(), &[3, 1]);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = SweepConfig::new(Suite::InequalityA);
        cfg.k_min = 1;
        assert!(run_verify(&cfg).is_err());
        cfg.k_min = 5;
        assert!(run_verify(&cfg).is_err());
        let mut cfg = SweepConfig::new(Suite::Dhat);
        cfg.trials = 0;
        assert!(run_verify(&cfg).is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        for suite in Suite::ALL {
            if suite == Suite::Powersum {
                continue;
            }
            let mut cfg = SweepConfig::new(suite);
            cfg.trials = 10;
            cfg.n_max = 40;
            let report = run_verify(&cfg).unwrap();
            assert!(report.passed, "{suite}: {:?}", report.failures);
            assert!(report.checks > 0);
        }
    }
}
