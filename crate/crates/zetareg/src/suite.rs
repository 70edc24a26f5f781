//! Self-check suites behind the `check` subcommand. Each suite replays a
//! fixed set of cross-validations from the library's own oracles and
//! reports one pass/fail line per check.
//!
//! Reports are fully deterministic: fixed check order, fixed parameters, no
//! randomness, and no wall-clock content, so two runs of the same suite
//! serialize to byte-identical JSON.

use num_complex::Complex64;
use serde::Serialize;

use crate::continuation::{
    dipole_identity_residual, exp_integral_real, functional_equation_check, regularized_b,
    solve_beta_next, OscillatorParams,
};
use crate::dipole::{
    dipole_residual, eta_consistency, eta_series, exp_alternating_dipole, exp_limit_check,
    geometric_dipole, harmonic_dipole, zeta_dipole, DipoleSeries,
};
use crate::error::{Error, Result};
use crate::euler::{
    am_gm_bound_check, find_zeros_on_critical_line, predicted_maxima, prominent_maxima_t, sweep,
};
use crate::precision::{euler_gamma, ExactRational, PrecisionContext};
use crate::prime_formula::{run_schedule, stability_in_s, Schedule};
use crate::primes::sieve;
use crate::special::{
    bernoulli_double_sum, bernoulli_recurrence_oracle, bernoulli_single_sum, hurwitz_numbers,
    hurwitz_pi, hurwitz_relation_check,
};

/// Which suite to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    All,
    Dipole,
    Euler,
    Continuation,
    Primes,
    Numbers,
}

impl SuiteKind {
    pub fn parse(name: &str) -> Result<SuiteKind> {
        match name {
            "all" => Ok(SuiteKind::All),
            "dipole" => Ok(SuiteKind::Dipole),
            "euler" => Ok(SuiteKind::Euler),
            "continuation" => Ok(SuiteKind::Continuation),
            "primes" => Ok(SuiteKind::Primes),
            "numbers" => Ok(SuiteKind::Numbers),
            other => Err(Error::Precondition(format!(
                "unknown suite '{other}'; expected all, dipole, euler, continuation, primes or numbers"
            ))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SuiteKind::All => "all",
            SuiteKind::Dipole => "dipole",
            SuiteKind::Euler => "euler",
            SuiteKind::Continuation => "continuation",
            SuiteKind::Primes => "primes",
            SuiteKind::Numbers => "numbers",
        }
    }
}

/// Outcome of one named check.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Configuration echoed into the report.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub digits: u32,
    pub primes_limit: u64,
    pub bracket_n: u32,
}

/// Full report of a `check` invocation. The timings map is intentionally
/// left empty so that reruns serialize identically; wall-clock timing goes
/// to stderr instead.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub command: String,
    pub config: SuiteConfig,
    pub results: Vec<CheckResult>,
    pub timings: std::collections::BTreeMap<String, u64>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

/// A check body yields (passed, detail); an error is itself a failure.
fn run_check(
    suite: &'static str,
    name: &'static str,
    body: impl FnOnce() -> Result<(bool, String)>,
) -> CheckResult {
    match body() {
        Ok((passed, detail)) => CheckResult { suite, name, passed, detail },
        Err(e) => CheckResult { suite, name, passed: false, detail: format!("error: {e}") },
    }
}

fn ratio_str(r: &ExactRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn dipole_suite(ctx: &PrecisionContext) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check("dipole", "harmonic-value-is-euler-gamma", || {
        let gamma = euler_gamma(ctx).to_f64();
        let sol = harmonic_dipole(1000, ctx);
        let err = (sol.dipole_value().re - gamma).abs();
        Ok((err <= 1e-12, format!("|value - gamma| = {err:.3e}")))
    }));
    out.push(run_check("dipole", "harmonic-residual", || {
        let sol = harmonic_dipole(1000, ctx);
        let res = dipole_residual(&DipoleSeries::harmonic(), &sol, 100);
        Ok((res <= 1e-10, format!("max residual over k <= 100 = {res:.3e}")))
    }));
    out.push(run_check("dipole", "geometric-continuation", || {
        let mut worst = 0.0f64;
        for j in 0..20 {
            let z = Complex64::new(-2.0 + 0.21 * j as f64, 0.3);
            let v = geometric_dipole(z)?.dipole_value();
            worst = worst.max((v - 1.0 / (1.0 - z)).norm());
        }
        let at_two = geometric_dipole(Complex64::new(2.0, 0.0))?.dipole_value();
        let off = (at_two - Complex64::new(-1.0, 0.0)).norm();
        Ok((worst <= 1e-12 && off <= 1e-12, format!("grid gap {worst:.3e}, value(2) gap {off:.3e}")))
    }));
    out.push(run_check("dipole", "zeta-dipole-vs-eta", || {
        let mut worst = 0.0f64;
        for z in [Complex64::new(0.5, 0.0), Complex64::new(0.5, 5.0), Complex64::new(1.5, 0.0)] {
            let a = zeta_dipole(z, 1_000_000, true)?;
            let b = eta_series(z, ctx)?;
            worst = worst.max((a - b).norm());
        }
        Ok((worst <= 1e-6, format!("max cross-method gap = {worst:.3e}")))
    }));
    out.push(run_check("dipole", "eta-consistency-shrinks", || {
        let z = Complex64::new(0.75, 0.0);
        let c3 = eta_consistency(z, 1_000)?;
        let c4 = eta_consistency(z, 10_000)?;
        let c5 = eta_consistency(z, 100_000)?;
        Ok((c3 > c4 && c4 > c5, format!("{c3:.3e} > {c4:.3e} > {c5:.3e}")))
    }));
    out.push(run_check("dipole", "exp-alternating-identities", || {
        let mut worst = 0.0f64;
        for j in 0..=10 {
            let a = -2.0 + 0.4 * j as f64;
            let e_pos = exp_alternating_dipole(a, 10).regularized_sum();
            let e_neg = exp_alternating_dipole(-a, 10).regularized_sum();
            worst = worst.max((e_pos - e_neg + a).abs());
        }
        let d = exp_alternating_dipole(0.5, 10).dipole_value();
        let closed = (-0.5f64).exp() * 0.5f64.exp().ln_1p();
        let gap = (d - closed).abs();
        Ok((worst <= 1e-12 && gap <= 1e-14, format!("identity gap {worst:.3e}, closed form gap {gap:.3e}")))
    }));
    out.push(run_check("dipole", "limit-lemma-constant-rate", || {
        let err = exp_limit_check(|_| 1.0, &[1_000_000]);
        let predicted = std::f64::consts::E / 2e6;
        let rel = (err / predicted - 1.0).abs();
        Ok((rel <= 0.01, format!("error {err:.3e} vs e/2n, relative gap {rel:.3e}")))
    }));
    out
}

fn euler_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    let table = match sieve(1_299_709) {
        Ok(t) => t,
        Err(e) => {
            out.push(CheckResult {
                suite: "euler",
                name: "sieve-to-100k-primes",
                passed: false,
                detail: format!("error: {e}"),
            });
            return out;
        }
    };
    out.push(run_check("euler", "am-gm-bound", || {
        let pairs = [(1.5, 0.7), (2.0, 3.0), (3.0, 12.5), (1.1, 29.0)];
        let mut all = true;
        for (s, t) in pairs {
            all &= am_gm_bound_check(s, t, &table)?;
        }
        Ok((all, format!("{} fixed (s,t) pairs at n = {}", pairs.len(), table.count())))
    }));
    out.push(run_check("euler", "zero-scan-first-ordinate", || {
        let zeros = find_zeros_on_critical_line(15.0, 0.05)?;
        let first = zeros.lambdas().first().copied().unwrap_or(f64::NAN);
        let gap = (first - 14.134725).abs();
        Ok((gap <= 1e-3, format!("lambda_1 = {first:.6}, gap {gap:.3e}")))
    }));
    out.push(run_check("euler", "maxima-track-zero-ordinates", || {
        let zeros = find_zeros_on_critical_line(31.0, 0.05)?;
        let predicted = predicted_maxima(2.0, &zeros)?;
        let samples = sweep(2.0, 5.0, 15.0, 0.02, &table)?;
        let maxima = prominent_maxima_t(&samples, 1.0);
        let mut worst = 0.0f64;
        for t in &maxima {
            let nearest = predicted
                .iter()
                .map(|p| (p - t).abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(nearest);
        }
        Ok((
            !maxima.is_empty() && worst <= 0.1,
            format!("{} maxima in [5,15], worst offset {worst:.3e}", maxima.len()),
        ))
    }));
    out
}

fn continuation_suite(ctx: &PrecisionContext) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check("continuation", "antiderivative-cosine-integral", || {
        let pi = std::f64::consts::PI;
        let hi = exp_integral_real(pi, 0.0, ctx)?;
        let lo = exp_integral_real(pi / 2.0, 0.0, ctx)?;
        let diff = hi.sub(&lo, ctx).to_f64();
        let gap = (diff - (-0.3983327)).abs();
        Ok((gap <= 1e-6, format!("E(pi) - E(pi/2) = {diff:.7}, gap {gap:.3e}")))
    }));
    out.push(run_check("continuation", "beta-chain-residual", || {
        let params = OscillatorParams::new(1.5, 1.0, 1)?;
        let mut beta = 0.0;
        let mut worst = 0.0f64;
        for k in 0..4 {
            let next = solve_beta_next(beta, k, &params)?;
            worst = worst.max(dipole_identity_residual(beta, next, k, &params)?);
            beta = next;
        }
        Ok((worst <= 1e-9, format!("max residual over 4 links = {worst:.3e}")))
    }));
    out.push(run_check("continuation", "regularized-b-closed-form", || {
        let r = regularized_b(1.5, 1.0, 1000)?;
        let l = (1.0f64 + (1.0f64 / 6.0).exp()).ln();
        let gap = (r.value + l).abs();
        let inside = r.lower <= r.value && r.value <= r.upper;
        Ok((gap <= 1e-12 && inside, format!("value {:.7}, gap {gap:.3e}, bracketed: {inside}", r.value)))
    }));
    out.push(run_check("continuation", "functional-equation", || {
        let mut worst = 0.0f64;
        for z in [Complex64::new(0.3, 3.0), Complex64::new(0.6, 7.0), Complex64::new(0.5, 14.0)] {
            worst = worst.max(functional_equation_check(z, ctx)?);
        }
        Ok((worst <= 1e-8, format!("max residual = {worst:.3e}")))
    }));
    out
}

fn primes_suite() -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check("primes", "counts-against-landmarks", || {
        let c100 = sieve(100)?.count();
        let c6 = sieve(1_000_000)?.count();
        let p4 = sieve(104_729)?.nth_prime(10_000)?;
        let ok = c100 == 25 && c6 == 78_498 && p4 == 104_729;
        Ok((ok, format!("pi(100) = {c100}, pi(10^6) = {c6}, p_10000 = {p4}")))
    }));
    out.push(run_check("primes", "extraction-polynomial-schedule", || {
        let report = run_schedule(5, Schedule::Polynomial)?;
        let ok = report.primes == [2, 3, 5, 7, 11]
            && report.steps.iter().all(|s| s.sandwich_holds);
        Ok((ok, format!("primes {:?}, all sandwiches hold", report.primes)))
    }));
    out.push(run_check("primes", "extraction-even-bound-schedule", || {
        let report = run_schedule(4, Schedule::EvenBound)?;
        let ok = report.primes == [2, 3, 5, 7]
            && report.steps.iter().all(|s| s.sandwich_holds);
        Ok((ok, format!("primes {:?}, all sandwiches hold", report.primes)))
    }));
    out.push(run_check("primes", "extraction-exponent-stability", || {
        let stable = stability_in_s(&[2, 3, 5], 12)?;
        Ok((stable, "floor unchanged when the exponent doubles".into()))
    }));
    out
}

fn numbers_suite(ctx: &PrecisionContext) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(run_check("numbers", "bernoulli-three-routes", || {
        let oracle = bernoulli_recurrence_oracle(30)?;
        for n in [1u32, 2, 4, 6, 8, 10, 12, 20, 30] {
            let d = bernoulli_double_sum(n)?;
            if Some(&d) != oracle.get(n) {
                return Ok((false, format!("double sum disagrees at n = {n}")));
            }
        }
        let s3 = bernoulli_single_sum(3, ctx)?;
        let (b6, b12) = match (oracle.get(6), oracle.get(12)) {
            (Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => return Ok((false, "oracle table missing entries".into())),
        };
        let ok = s3 == b6 && ratio_str(&b12) == "-691/2730";
        Ok((ok, format!("B_6 = {}, B_12 = {}", ratio_str(&b6), ratio_str(&b12))))
    }));
    out.push(run_check("numbers", "hurwitz-recurrence-values", || {
        let table = hurwitz_numbers(3, ctx)?;
        let got: Vec<String> = [4u32, 8, 12]
            .iter()
            .map(|&i| table.get(i).map(ratio_str).unwrap_or_else(|| "missing".into()))
            .collect();
        let ok = got == ["1/10", "3/10", "567/130"];
        Ok((ok, format!("H_4, H_8, H_12 = {}", got.join(", "))))
    }));
    out.push(run_check("numbers", "hurwitz-lattice-identity", || {
        let gap = hurwitz_relation_check(1, ctx)?;
        Ok((gap <= 1e-6, format!("weight-4 lattice identity gap = {gap:.3e}")))
    }));
    out.push(run_check("numbers", "lemniscate-constant", || {
        let v = hurwitz_pi(ctx)?.to_f64();
        let gap = (v - 2.622_057_554_292_119_8).abs();
        Ok((gap <= 1e-13, format!("quadrature/AGM value {v:.15}, gap {gap:.3e}")))
    }));
    out
}

/// Runs the requested suite(s) at the given precision.
pub fn run_suite(kind: SuiteKind, digits: u32) -> Result<SuiteReport> {
    let ctx = PrecisionContext::new(digits)?;
    let mut results = Vec::new();
    let want = |k: SuiteKind| kind == SuiteKind::All || kind == k;
    if want(SuiteKind::Dipole) {
        results.extend(dipole_suite(&ctx));
    }
    if want(SuiteKind::Euler) {
        results.extend(euler_suite());
    }
    if want(SuiteKind::Continuation) {
        results.extend(continuation_suite(&ctx));
    }
    if want(SuiteKind::Primes) {
        results.extend(primes_suite());
    }
    if want(SuiteKind::Numbers) {
        results.extend(numbers_suite(&ctx));
    }
    Ok(SuiteReport {
        command: format!("check --suite {}", kind.label()),
        config: SuiteConfig { digits, primes_limit: 1_299_709, bracket_n: 1000 },
        results,
        timings: std::collections::BTreeMap::new(),
    })
}
