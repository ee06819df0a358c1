//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use denum_core::bounds::dhat_bounds;
use denum_core::exact::{extended_count, oracle_count, popoviciu};
use denum_core::frobenius::frobenius_exact;
use denum_core::rational::{from_int, ratio};
use denum_core::verify::{run_verify, Suite, SweepConfig, VerificationReport};
use denum_core::CoefficientTuple;

const SEED: u64 = 20_240_601;

fn t(v: &[u64]) -> CoefficientTuple {
    CoefficientTuple::new(v.to_vec()).unwrap()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn sweep(suite: Suite, trials: usize, k: (usize, usize), max_coeff: u64, n_max: u64) -> VerificationReport {
    let cfg = SweepConfig { suite, seed: SEED, trials, k_min: k.0, k_max: k.1, max_coeff, n_max };
    run_verify(&cfg).expect("valid sweep config")
}

fn summarize(reports: &[&VerificationReport], limit: Option<Duration>) -> Outcome {
    let failures: usize = reports.iter().map(|r| r.failures.len()).sum();
    let checks: u64 = reports.iter().map(|r| r.checks).sum();
    let instances: usize = reports.iter().map(|r| r.instances).sum();
    let time: Duration = reports.iter().map(|r| r.wall_time).sum();
    let in_time = limit.is_none_or(|l| time <= l);
    let mut detail = format!("{instances} instances, {checks} checks, {failures} failures, {:.2}s", time.as_secs_f64());
    if let Some(l) = limit {
        detail += &format!(" (limit {}s)", l.as_secs());
    }
    for r in reports {
        if let Some(f) = r.failures.first() {
            detail += &format!("; first failure: {} {}: {} vs {}", f.instance, f.expected_relation, f.lhs, f.rhs);
        }
    }
    Outcome { ok: failures == 0 && checks > 0 && in_time, detail }
}

fn spot(checks: &[(&str, bool)]) -> Outcome {
    let bad: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    Outcome {
        ok: bad.is_empty(),
        detail: if bad.is_empty() { format!("{} spot values exact", checks.len()) } else { format!("mismatch: {}", bad.join(", ")) },
    }
}

fn criterion_1() -> Outcome {
    let r = sweep(Suite::OracleEq, 500, (2, 4), 12, 120);
    summarize(&[&r], Some(Duration::from_secs(30)))
}

fn criterion_2() -> Outcome {
    let p = |n| popoviciu(3, 5, n).map(|c| c.value.to_string()).unwrap_or_default();
    let o = |n| oracle_count(&t(&[3, 5]), n).unwrap().value.to_string();
    spot(&[
        ("popoviciu(3,5,8) = 1", p(8) == "1"),
        ("popoviciu(3,5,7) = 0", p(7) == "0"),
        ("oracle(3,5,8) = 1", o(8) == "1"),
        ("oracle(3,5,7) = 0", o(7) == "0"),
    ])
}

fn criterion_3() -> Outcome {
    let r = sweep(Suite::InequalityA, 500, (2, 5), 15, 400);
    summarize(&[&r], Some(Duration::from_secs(60)))
}

fn criterion_4() -> Outcome {
    let r = sweep(Suite::InequalityB, 500, (2, 5), 15, 400);
    summarize(&[&r], None)
}

fn criterion_5() -> Outcome {
    let r = sweep(Suite::BfIdentities, 200, (2, 4), 12, 0);
    summarize(&[&r], None)
}

fn criterion_6() -> Outcome {
    let r = sweep(Suite::Powersum, 1, (2, 4), 12, 0);
    summarize(&[&r], Some(Duration::from_secs(10)))
}

fn criterion_7() -> Outcome {
    let spots = spot(&[
        ("g(2,3) = 1", frobenius_exact(&t(&[2, 3])) == Ok(1)),
        ("g(3,5) = 7", frobenius_exact(&t(&[3, 5])) == Ok(7)),
        ("g(4,6,9) = 11", frobenius_exact(&t(&[4, 6, 9])) == Ok(11)),
    ]);
    let r = sweep(Suite::Frobenius, 200, (2, 4), 25, 0);
    let s = summarize(&[&r], None);
    Outcome { ok: spots.ok && s.ok, detail: format!("{}; {}", spots.detail, s.detail) }
}

fn criterion_8() -> Outcome {
    let a = t(&[2, 3]);
    let e = extended_count(&a, 6).value;
    let rep = dhat_bounds(&a, 6, Some(e.clone())).unwrap();
    let spots = spot(&[
        ("dhat(2,3;6) = 7", e.to_string() == "7"),
        ("lower = 49/12", rep.lower == ratio(49, 12)),
        ("middle = 35/6", rep.middle == ratio(35, 6)),
        ("upper = 361/48", rep.upper == ratio(361, 48)),
        ("chain holds", rep.chain_ok == Some(true) && rep.middle <= from_int(7)),
    ]);
    let r = sweep(Suite::Dhat, 200, (1, 4), 12, 120);
    let s = summarize(&[&r], None);
    Outcome { ok: spots.ok && s.ok, detail: format!("{}; {}", spots.detail, s.detail) }
}

fn criterion_9() -> Outcome {
    let r = sweep(Suite::Asymptotic, 50, (2, 4), 12, 0);
    summarize(&[&r], None)
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_denum");
    let run = || {
        Command::new(bin)
            .args(["verify", "--suite", "inequality-b", "--seed", "7", "--trials", "60", "--n-max", "80"])
            .output()
            .expect("run denum")
    };
    let (first, second) = (run(), run());
    let same = first.stdout == second.stdout;
    let ok = first.status.success() && second.status.success() && same && !first.stdout.is_empty();
    let in_process = {
        let cfg = SweepConfig { seed: 7, trials: 60, n_max: 80, ..SweepConfig::new(Suite::Dhat) };
        run_verify(&cfg).unwrap().to_json() == run_verify(&cfg).unwrap().to_json()
    };
    Outcome {
        ok: ok && in_process,
        detail: format!(
            "binary reports {} ({} bytes), library reports {}",
            if same { "identical" } else { "differ" },
            first.stdout.len(),
            if in_process { "identical" } else { "differ" }
        ),
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", criterion_1),
        ("popoviciu spot values", criterion_2),
        ("inequality A sandwich", criterion_3),
        ("inequality B", criterion_4),
        ("Blom-Froberg identities", criterion_5),
        ("power-sum grid", criterion_6),
        ("Frobenius", criterion_7),
        ("extended denumerant", criterion_8),
        ("asymptotic ratio", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let tag = if o.ok { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag} {name}: {} [{:.2}s]", i + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.ok {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
