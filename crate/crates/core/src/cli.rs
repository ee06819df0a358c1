//! The `denum` command line.
//!
//! Exit codes: 0 success, 1 a verification sweep found failures, 2 bad
//! arguments or unparsable input, 3 a mathematical precondition failed
//! (non-coprime tuple, tuple too short, bound not applicable, ...).

use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{Map, Value};

use crate::bfnum::{bf_explicit, bf_recursive, BfQuery};
use crate::bounds::{dhat_bounds, reduce_instance, BoundEvaluator};
use crate::error::{Error, Result};
use crate::exact::{denumerant_table, extended_count_table, oracle_count, popoviciu, CountMethod};
use crate::frobenius::bound_frobenius;
use crate::rational::{self, from_uint, ExactRational};
use crate::tuple::CoefficientTuple;
use crate::verify::{run_verify, Suite, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "denum", version, about = "Denumerants, their bounds, and Frobenius numbers")]
pub struct Cli {
    /// Output format for result rows.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Seed for `verify` (default 1).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Oracle,
    Recursion,
    Popoviciu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Inequality {
    A,
    B,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BfMethod {
    Recursive,
    Explicit,
    Both,
}

#[derive(Debug, Args)]
pub struct NArgs {
    /// A single target value.
    #[arg(long, conflicts_with = "n_range", required_unless_present = "n_range")]
    pub n: Option<u64>,
    /// `LO..HI` (exclusive) or `LO..=HI` (inclusive).
    #[arg(long, value_parser = parse_range)]
    pub n_range: Option<RangeInclusive<u64>>,
}

impl NArgs {
    fn range(&self) -> RangeInclusive<u64> {
        match (&self.n, &self.n_range) {
            (Some(n), _) => *n..=*n,
            (None, Some(r)) => r.clone(),
            (None, None) => unreachable!("clap enforces one of --n / --n-range"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact number of non-negative solutions of a . x = n.
    Count {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: CoefficientTuple,
        #[command(flatten)]
        n: NArgs,
        #[arg(long, value_enum, default_value_t = Method::Recursion)]
        method: Method,
    },
    /// Lower and upper bounds next to the exact count.
    Bounds {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: CoefficientTuple,
        #[command(flatten)]
        n: NArgs,
        #[arg(long, value_enum, default_value_t = Inequality::Both)]
        inequality: Inequality,
        /// Divide a non-coprime tuple by its gcd instead of failing.
        #[arg(long)]
        auto_reduce: bool,
    },
    /// Exact Frobenius number with its bounds.
    Frobenius {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: CoefficientTuple,
    },
    /// A Blom-Fröberg number [[m, l]]^a_r.
    Bf {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: CoefficientTuple,
        #[arg(long)]
        r: usize,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
        #[arg(long, value_enum, default_value_t = BfMethod::Both)]
        method: BfMethod,
    },
    /// Solutions of a . x <= n, with bounds.
    Dhat {
        #[arg(long, value_parser = parse_coeffs)]
        coeffs: CoefficientTuple,
        #[command(flatten)]
        n: NArgs,
    },
    /// Seeded randomized sweep; prints a JSON report.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 4)]
        k_max: usize,
        #[arg(long, default_value_t = 12)]
        max_coeff: u64,
        #[arg(long, default_value_t = 120)]
        n_max: u64,
    },
}

fn parse_coeffs(s: &str) -> std::result::Result<CoefficientTuple, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("invalid bound {t:?} in range {s:?}"));
    let range = if let Some((lo, hi)) = s.split_once("..=") {
        num(lo)?..=num(hi)?
    } else if let Some((lo, hi)) = s.split_once("..") {
        let hi = num(hi)?.checked_sub(1).ok_or_else(|| format!("empty range {s:?}"))?;
        num(lo)?..=hi
    } else {
        return Err(format!("expected LO..HI or LO..=HI, got {s:?}"));
    };
    if range.is_empty() {
        return Err(format!("empty range {s:?}"));
    }
    Ok(range)
}

/// One output cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Null,
    Bool(bool),
    Uint(u64),
    Int(i64),
    /// Arbitrary-size integers and rationals, kept as strings in JSON.
    Exact(String),
    Coeffs(Vec<u64>),
    Text(String),
}

impl Cell {
    fn rational(x: &ExactRational) -> Self {
        Cell::Exact(rational::format(x))
    }

    fn opt_rational(x: Option<&ExactRational>) -> Self {
        x.map_or(Cell::Null, Cell::rational)
    }

    fn big(x: &BigUint) -> Self {
        Cell::Exact(x.to_string())
    }

    fn opt_bool(x: Option<bool>) -> Self {
        x.map_or(Cell::Null, Cell::Bool)
    }

    fn text(&self) -> String {
        match self {
            Cell::Null => String::new(),
            Cell::Bool(b) => b.to_string(),
            Cell::Uint(v) => v.to_string(),
            Cell::Int(v) => v.to_string(),
            Cell::Exact(s) | Cell::Text(s) => s.clone(),
            Cell::Coeffs(v) => v.iter().map(u64::to_string).collect::<Vec<_>>().join(","),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Null => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
            Cell::Uint(v) => Value::from(*v),
            Cell::Int(v) => Value::from(*v),
            Cell::Exact(s) | Cell::Text(s) => Value::String(s.clone()),
            Cell::Coeffs(v) => Value::from(v.clone()),
        }
    }
}

/// Named columns plus rows, rendered in any [`Format`].
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => self.render_table(),
            Format::Csv => self.render_csv(),
            Format::Json => self.render_json(),
        }
    }

    fn render_table(&self) -> String {
        let texts: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| texts.iter().map(|r| r[i].len()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = line(self.columns.clone());
        for row in &texts {
            out += &line(row.iter().map(String::as_str).collect());
        }
        out
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text)).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// JSON lines: one object per row.
    fn render_json(&self) -> String {
        self.rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> =
                    self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                Value::Object(obj).to_string() + "\n"
            })
            .collect()
    }
}

fn count_table(a: &CoefficientTuple, range: RangeInclusive<u64>, method: Method) -> Result<Table> {
    let mut t = Table::new(&["coeffs", "n", "value", "method"]);
    let values: Vec<(u64, BigUint, CountMethod)> = match method {
        Method::Recursion => {
            let table = denumerant_table(a, *range.end());
            range.map(|n| (n, table[n as usize].clone(), CountMethod::Recursion)).collect()
        }
        Method::Oracle => {
            range.map(|n| oracle_count(a, n).map(|c| (n, c.value, c.method))).collect::<Result<_>>()?
        }
        Method::Popoviciu => {
            a.require_len(2)?;
            if a.len() != 2 {
                return Err(Error::Precondition(format!("popoviciu needs exactly 2 coefficients, got {}", a.len())));
            }
            let (a1, a2) = (a.as_slice()[0], a.as_slice()[1]);
            range.map(|n| popoviciu(a1, a2, n).map(|c| (n, c.value, c.method))).collect::<Result<_>>()?
        }
    };
    for (n, value, method) in values {
        t.push(vec![Cell::Coeffs(a.as_slice().to_vec()), Cell::Uint(n), Cell::big(&value), Cell::Text(method.to_string())]);
    }
    Ok(t)
}

fn bounds_table(a: &CoefficientTuple, range: RangeInclusive<u64>, which: Inequality, auto_reduce: bool) -> Result<Table> {
    let mut t = Table::new(&["coeffs", "n", "exact", "lower_a", "lower_b", "upper_a", "applicable", "ok"]);
    let (c, d) = a.reduced();
    if d != 1 && !auto_reduce {
        return Err(Error::NotCoprime { gcd: d });
    }
    let table = denumerant_table(&c, *range.end() / d);
    let eval = BoundEvaluator::new(&c)?;
    let coeffs = Cell::Coeffs(a.as_slice().to_vec());
    for n in range {
        let Some((_, m)) = reduce_instance(a, n) else {
            // d does not divide n: no solutions, and the bounds say nothing
            t.push(vec![coeffs.clone(), Cell::Uint(n), Cell::Uint(0), Cell::Null, Cell::Null, Cell::Null, Cell::Bool(false), Cell::Null]);
            continue;
        };
        let exact = table[m as usize].clone();
        let r = eval.report(m, Some(exact.clone()));
        let e = from_uint(&exact);
        let show_a = which != Inequality::B;
        let show_b = which != Inequality::A;
        let mut ok = true;
        if show_a {
            ok &= e <= r.upper_a && (!r.applicable_lower || r.lower_a <= e);
        }
        if show_b {
            ok &= r.lower_b.as_ref().is_none_or(|b| *b <= e);
        }
        t.push(vec![
            coeffs.clone(),
            Cell::Uint(n),
            Cell::big(&exact),
            if show_a { Cell::rational(&r.lower_a) } else { Cell::Null },
            if show_b { Cell::opt_rational(r.lower_b.as_ref()) } else { Cell::Null },
            if show_a { Cell::rational(&r.upper_a) } else { Cell::Null },
            Cell::Bool(r.applicable_lower),
            Cell::Bool(ok),
        ]);
    }
    Ok(t)
}

fn frobenius_table(a: &CoefficientTuple) -> Result<Table> {
    let r = bound_frobenius(a)?;
    let mut t = Table::new(&["coeffs", "g", "upper", "root_lower_1", "root_lower_2", "ok"]);
    t.push(vec![
        Cell::Coeffs(a.as_slice().to_vec()),
        Cell::Int(r.g),
        Cell::rational(&r.brauer_upper),
        Cell::Exact(r.root_lower_1.to_string()),
        Cell::Exact(r.root_lower_2.to_string()),
        Cell::Bool(r.bounds_hold()),
    ]);
    Ok(t)
}

fn bf_table(a: &CoefficientTuple, q: BfQuery, method: BfMethod) -> Result<Table> {
    let recursive = (method != BfMethod::Explicit).then(|| bf_recursive(a, q)).transpose()?;
    let explicit = (method != BfMethod::Recursive).then(|| bf_explicit(a, q)).transpose()?;
    let agree = match (&recursive, &explicit) {
        (Some(x), Some(y)) => Some(x == y),
        _ => None,
    };
    let mut t = Table::new(&["coeffs", "r", "m", "l", "recursive", "explicit", "agree"]);
    t.push(vec![
        Cell::Coeffs(a.as_slice().to_vec()),
        Cell::Uint(q.r as u64),
        Cell::Int(q.m),
        Cell::Int(q.l),
        Cell::opt_rational(recursive.as_ref()),
        Cell::opt_rational(explicit.as_ref()),
        Cell::opt_bool(agree),
    ]);
    Ok(t)
}

fn dhat_table(a: &CoefficientTuple, range: RangeInclusive<u64>) -> Result<Table> {
    let ext = extended_count_table(a, *range.end());
    let mut t = Table::new(&["coeffs", "n", "d", "exact", "lower", "middle", "upper", "ok"]);
    for n in range {
        let r = dhat_bounds(a, n, Some(ext[n as usize].clone()))?;
        t.push(vec![
            Cell::Coeffs(a.as_slice().to_vec()),
            Cell::Uint(n),
            Cell::Uint(r.d),
            Cell::big(&ext[n as usize]),
            Cell::rational(&r.lower),
            Cell::rational(&r.middle),
            Cell::rational(&r.upper),
            Cell::opt_bool(r.chain_ok),
        ]);
    }
    Ok(t)
}

/// Exit code for a library error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::EmptyTuple | Error::NonPositiveCoefficient(_) => EXIT_USAGE,
        _ => EXIT_PRECONDITION,
    }
}

/// Runs one invocation; returns the text to emit and the exit code.
fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<(String, i32)> {
    let table = match &cli.command {
        Command::Count { coeffs, n, method } => count_table(coeffs, n.range(), *method)?,
        Command::Bounds { coeffs, n, inequality, auto_reduce } => {
            bounds_table(coeffs, n.range(), *inequality, *auto_reduce)?
        }
        Command::Frobenius { coeffs } => frobenius_table(coeffs)?,
        Command::Bf { coeffs, r, m, l, method } => bf_table(coeffs, BfQuery::new(*r, *m, *l), *method)?,
        Command::Dhat { coeffs, n } => dhat_table(coeffs, n.range())?,
        Command::Verify { suite, trials, k_min, k_max, max_coeff, n_max } => {
            let cfg = SweepConfig {
                suite: *suite,
                seed: cli.seed.unwrap_or(1),
                trials: *trials,
                k_min: *k_min,
                k_max: *k_max,
                max_coeff: *max_coeff,
                n_max: *n_max,
            };
            let report = run_verify(&cfg)?;
            let _ = writeln!(
                stderr,
                "{}: {} instances, {} checks, {} failures in {:.3}s",
                report.suite,
                report.instances,
                report.checks,
                report.failures.len(),
                report.wall_time.as_secs_f64()
            );
            let code = if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED };
            return Ok((report.to_json() + "\n", code));
        }
    };
    Ok((table.render(cli.format), EXIT_OK))
}

/// Full CLI entry point with injectable streams.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{e}");
                EXIT_OK
            };
        }
    };
    let (text, code) = match execute(&cli, stderr) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    code
}
