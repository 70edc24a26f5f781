//! Command-line surface: prime sieving, Euler-product sweeps, regularized
//! zeta evaluation, prime extraction from zeta values, exact Bernoulli and
//! Hurwitz tables, and the self-check suites.
//!
//! Exit codes: 0 success, 2 usage or domain error, 3 mathematical domain
//! (pole, no root), 4 insufficient precision. All output is deterministic:
//! fixed significant-digit formatting, ordered assembly, no randomness.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use zetareg::dipole::{eta_series, zeta_dipole};
use zetareg::error::Error;
use zetareg::euler::sweep;
use zetareg::precision::{ExactRational, PrecisionContext};
use zetareg::prime_formula::{run_schedule, Schedule};
use zetareg::primes::sieve;
use zetareg::special::{bernoulli_recurrence_oracle, hurwitz_numbers};
use zetareg::suite::{run_suite, SuiteKind};

#[derive(Parser)]
#[command(name = "zetareg", version, about = "Euler products, regularized series, and prime extraction for the Riemann zeta function")]
struct Cli {
    /// Working precision in significant decimal digits (minimum 15).
    #[arg(long, global = true)]
    digits: Option<u32>,

    /// Accepted for interface stability; every command is already
    /// deterministic, no randomness exists to seed.
    #[arg(long, global = true)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sieve primes up to a limit.
    Primes {
        /// Inclusive upper bound of the sieve (at least 2).
        #[arg(long)]
        limit: u64,
        /// Print only the prime count.
        #[arg(long)]
        count_only: bool,
    },
    /// Sample the truncated Euler product f, its normalization g, and the
    /// prime sums B, C over a t-grid; writes CSV.
    StandardForm {
        #[arg(long)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        #[arg(long)]
        step: f64,
        /// Sieve limit for the prime table entering the product.
        #[arg(long, default_value_t = 1_000_000)]
        limit: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate the regularized zeta function at a point.
    Zeta {
        #[arg(long)]
        re: f64,
        #[arg(long, default_value_t = 0.0)]
        im: f64,
        #[arg(long, value_enum, default_value_t = ZetaMethod::Dipole)]
        method: ZetaMethod,
        /// Partial-sum length for the dipole method.
        #[arg(long, default_value_t = 1_000_000)]
        n: u64,
    },
    /// Recover the first primes one by one from high-precision zeta values.
    PrimeExtract {
        /// How many primes to extract (desk-scale cap: 25).
        #[arg(long)]
        n: u64,
        /// Exponent schedule: "n(n+1)" or "even-bertrand-bound".
        #[arg(long, default_value = "n(n+1)")]
        schedule: String,
    },
    /// Print exact Bernoulli or Hurwitz numbers as CSV rows.
    Numbers {
        #[arg(long, value_enum)]
        kind: NumberKind,
        /// Bernoulli: table up to index n. Hurwitz: the first n entries
        /// H_4, ..., H_{4n}.
        #[arg(long)]
        n: u32,
    },
    /// Run a self-check suite and print its JSON report.
    Check {
        /// One of: all, dipole, euler, continuation, primes, numbers.
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ZetaMethod {
    /// Partial sum with the dipole counterterm and correction.
    Dipole,
    /// Accelerated alternating series.
    Eta,
}

#[derive(Clone, Copy, ValueEnum)]
enum NumberKind {
    Bernoulli,
    Hurwitz,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Pole(_) | Error::NoRoot(_) | Error::Overflow(_) | Error::ZeroSegment(_) => 3,
        Error::InsufficientPrecision(_) => 4,
        _ => 2,
    }
}

/// Fixed 12-significant-digit rendering, stable across platforms.
fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Precision from --digits, else ZF_DIGITS, else 30; floor of 15 enforced.
fn resolve_digits(flag: Option<u32>) -> Result<u32, Error> {
    let digits = match flag {
        Some(d) => d,
        None => match std::env::var("ZF_DIGITS") {
            Ok(s) => s
                .parse::<u32>()
                .map_err(|_| Error::Precondition(format!("ZF_DIGITS must be an integer, got '{s}'")))?,
            Err(_) => 30,
        },
    };
    if digits < 15 {
        return Err(Error::Precondition(format!("precision must be at least 15 digits, got {digits}")));
    }
    Ok(digits)
}

fn parse_schedule(name: &str) -> Result<Schedule, Error> {
    match name {
        "n(n+1)" => Ok(Schedule::Polynomial),
        "even-bertrand-bound" => Ok(Schedule::EvenBound),
        other => Err(Error::Precondition(format!(
            "unknown schedule '{other}'; expected 'n(n+1)' or 'even-bertrand-bound'"
        ))),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let digits = resolve_digits(cli.digits)?;
    match cli.command {
        Command::Primes { limit, count_only } => {
            let table = sieve(limit)?;
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            if count_only {
                writeln!(out, "{}", table.count())?;
            } else {
                for p in table.primes() {
                    writeln!(out, "{p}")?;
                }
            }
            Ok(())
        }
        Command::StandardForm { s, t_min, t_max, step, limit, output } => {
            let table = sieve(limit)?;
            let samples = sweep(s, t_min, t_max, step, &table)?;
            let mut csv = String::from("t,f,g,B,C\n");
            for row in &samples {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    sig12(row.t),
                    sig12(row.f),
                    sig12(row.g),
                    sig12(row.b),
                    sig12(row.c)
                ));
            }
            match output {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
            Ok(())
        }
        Command::Zeta { re, im, method, n } => {
            let z = Complex64::new(re, im);
            let v = match method {
                ZetaMethod::Dipole => zeta_dipole(z, n, true)?,
                ZetaMethod::Eta => {
                    let ctx = PrecisionContext::new(digits)?;
                    eta_series(z, &ctx)?
                }
            };
            if im == 0.0 {
                println!("{}", sig12(v.re));
            } else {
                println!("{} {}", sig12(v.re), sig12(v.im));
            }
            Ok(())
        }
        Command::PrimeExtract { n, schedule } => {
            if n == 0 || n > 25 {
                return Err(Error::Precondition(format!(
                    "extraction count must lie in 1..=25 (desk-scale cap), got {n}"
                )));
            }
            let report = run_schedule(n, parse_schedule(&schedule)?)?;
            let primes: Vec<String> = report.primes.iter().map(u64::to_string).collect();
            println!("{}", primes.join(" "));
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            Ok(())
        }
        Command::Numbers { kind, n } => {
            let stdout = std::io::stdout();
            let mut out = stdout.lock();
            writeln!(out, "index,numerator,denominator")?;
            let mut emit = |index: u32, v: &ExactRational| -> Result<(), Error> {
                writeln!(out, "{index},{},{}", v.numer(), v.denom())?;
                Ok(())
            };
            match kind {
                NumberKind::Bernoulli => {
                    if n > 0 {
                        let table = bernoulli_recurrence_oracle(n)?;
                        for (&index, v) in table.iter() {
                            if index == 0 || index == 1 || index % 2 == 0 {
                                emit(index, v)?;
                            }
                        }
                    }
                }
                NumberKind::Hurwitz => {
                    if n > 0 {
                        let ctx = PrecisionContext::new(digits)?;
                        let table = hurwitz_numbers(n, &ctx)?;
                        for (&index, v) in table.iter() {
                            emit(index, v)?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Check { suite } => {
            let kind = SuiteKind::parse(&suite)?;
            let started = std::time::Instant::now();
            let report = run_suite(kind, digits)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            eprintln!(
                "suite '{}' finished in {} ms: {}/{} checks passed",
                kind.label(),
                started.elapsed().as_millis(),
                report.results.iter().filter(|r| r.passed).count(),
                report.results.len()
            );
            if !report.all_passed() {
                return Err(Error::Precondition("one or more checks failed".into()));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
