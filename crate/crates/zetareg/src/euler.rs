//! Truncated Euler products over the primes: the degree-two standard form
//! f_n(s,t) = prod (1 - 2 p^(-s/2) cos(s t log p) + p^(-s)), its normalized
//! companion g_n, the prime sums B_n and C_n, the arithmetic-geometric mean
//! bound on f_n, and deterministic t-sweeps for plotting.
//!
//! Each factor of f_n equals |1 - p^(-s(1/2+it))|^2, so for s >= 2 the
//! product converges to 1/|zeta(s(1/2+it))|^2. Values with s < 2 are
//! exploratory: the product no longer converges absolutely there.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dipole::eta_series;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::primes::PrimeTable;

/// One point of the f/g sweep together with the prime sums at that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardFormSample {
    pub s: f64,
    pub t: f64,
    /// Number of primes in the truncated product.
    pub n: usize,
    pub f: f64,
    pub g: f64,
    pub b: f64,
    pub c: f64,
}

/// Ordinates lambda > 0 with zeta(1/2 + i lambda) approximately zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroList {
    lambdas: Vec<f64>,
}

impl ZeroList {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.windows(2).any(|w| w[0] >= w[1]) || lambdas.iter().any(|&l| l <= 0.0) {
            return Err(Error::Precondition(
                "zero ordinates must be positive and strictly increasing".into(),
            ));
        }
        Ok(ZeroList { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }
}

/// log of one factor of f_n, in the cancellation-stable split form
/// (1 - x cos th)^2 + (x sin th)^2 with x = p^(-s/2), th = s t log p.
fn log_factor(p: u64, s: f64, t: f64) -> f64 {
    let lp = (p as f64).ln();
    let x = (-0.5 * s * lp).exp();
    let theta = s * t * lp;
    let re = 1.0 - x * theta.cos();
    let im = x * theta.sin();
    (re * re + im * im).ln()
}

const CHUNK: usize = 4096;

/// Ordered parallel sum over primes: fixed chunk boundaries, partial sums
/// combined in index order, so the result is independent of thread count.
fn prime_sum(table: &PrimeTable, term: impl Fn(u64) -> f64 + Sync) -> f64 {
    table
        .primes()
        .par_chunks(CHUNK)
        .map(|chunk| chunk.iter().map(|&p| term(p)).sum::<f64>())
        .collect::<Vec<f64>>()
        .iter()
        .sum()
}

fn require_table(table: &PrimeTable) -> Result<()> {
    if table.count() == 0 {
        return Err(Error::Precondition("empty prime table".into()));
    }
    Ok(())
}

fn require_s(s: f64) -> Result<()> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("standard form requires s > 0, got {s}")));
    }
    Ok(())
}

/// f_n(s,t) = prod_{k<=n} (1 - 2 p_k^(-s/2) cos(s t log p_k) + p_k^(-s)),
/// accumulated as a sum of log-factors so near-zero products do not
/// underflow the double range.
pub fn standard_form_f(s: f64, t: f64, table: &PrimeTable) -> Result<f64> {
    require_s(s)?;
    require_table(table)?;
    Ok(prime_sum(table, |p| log_factor(p, s, t)).exp())
}

/// g_n(s,t) = f_n(s,t) / prod_{k<=n} (1 + p_k^(-s)).
pub fn normalized_g(s: f64, t: f64, table: &PrimeTable) -> Result<f64> {
    require_s(s)?;
    require_table(table)?;
    let log_f = prime_sum(table, |p| log_factor(p, s, t));
    let log_norm = prime_sum(table, |p| (-s * (p as f64).ln()).exp().ln_1p());
    Ok((log_f - log_norm).exp())
}

/// (B_n, C_n) with B_n = sum p^(-s/2) cos(s t log p) and C_n = sum p^(-s).
pub fn prime_sums(s: f64, t: f64, table: &PrimeTable) -> Result<(f64, f64)> {
    require_s(s)?;
    require_table(table)?;
    let b = prime_sum(table, |p| {
        let lp = (p as f64).ln();
        (-0.5 * s * lp).exp() * (s * t * lp).cos()
    });
    let c = prime_sum(table, |p| (-s * (p as f64).ln()).exp());
    Ok((b, c))
}

/// Finite-n arithmetic-geometric mean inequality on the factors of f_n:
/// f_n^(1/n) <= 1 + (-2 B_n + C_n)/n, where the right side is exactly the
/// mean of the factors. Returns true when it holds within 1e-12 relative.
pub fn am_gm_bound_check(s: f64, t: f64, table: &PrimeTable) -> Result<bool> {
    require_s(s)?;
    require_table(table)?;
    let n = table.count() as f64;
    let gm = (prime_sum(table, |p| log_factor(p, s, t)) / n).exp();
    let (b, c) = prime_sums(s, t, table)?;
    let am = 1.0 + (-2.0 * b + c) / n;
    Ok(gm <= am * (1.0 + 1e-12))
}

/// Predicted t positions of the local maxima of f_n(s, .), one per zero
/// ordinate: t = (1/s) sqrt(lambda^2 + 1/4 - (s/2)(1 - s/2)).
pub fn predicted_maxima(s: f64, zeros: &ZeroList) -> Result<Vec<f64>> {
    require_s(s)?;
    zeros
        .lambdas()
        .iter()
        .map(|&l| {
            let rad = l * l + 0.25 - (s / 2.0) * (1.0 - s / 2.0);
            if rad < 0.0 {
                return Err(Error::Domain(format!(
                    "negative radicand {rad} at s = {s}, lambda = {l}"
                )));
            }
            Ok(rad.sqrt() / s)
        })
        .collect()
}

/// |zeta(1/2 + i lambda)| through the alternating-series route.
fn zeta_abs_critical(lambda: f64, ctx: &PrecisionContext) -> f64 {
    eta_series(Complex64::new(0.5, lambda), ctx)
        .map(|z| z.norm())
        .unwrap_or(f64::INFINITY)
}

/// Scans |zeta(1/2 + i lambda)| on a grid up to t_max, refines each local
/// minimum by golden-section search to 1e-6 in lambda, and keeps the minima
/// with |zeta| < 1e-3.
pub fn find_zeros_on_critical_line(t_max: f64, step: f64) -> Result<ZeroList> {
    if !(step > 0.0 && step <= 0.05) {
        return Err(Error::Precondition(format!(
            "scan step must lie in (0, 0.05], got {step}"
        )));
    }
    if !(t_max > 0.0) {
        return Err(Error::Precondition(format!("t_max must be positive, got {t_max}")));
    }
    let ctx = PrecisionContext::new(20)?;
    let lo = 0.5;
    let n_grid = ((t_max - lo) / step).floor() as usize;
    let values: Vec<f64> = (0..=n_grid)
        .into_par_iter()
        .map(|j| zeta_abs_critical(lo + j as f64 * step, &ctx))
        .collect();
    let mut lambdas = Vec::new();
    for j in 1..n_grid {
        if values[j] < values[j - 1] && values[j] < values[j + 1] {
            let a = lo + (j - 1) as f64 * step;
            let b = lo + (j + 1) as f64 * step;
            let lam = golden_min(a, b, 1e-6, |x| zeta_abs_critical(x, &ctx));
            if lam <= t_max && zeta_abs_critical(lam, &ctx) < 1e-3 {
                lambdas.push(lam);
            }
        }
    }
    ZeroList::new(lambdas)
}

/// Golden-section minimization of a unimodal function on [a, b].
fn golden_min(mut a: f64, mut b: f64, tol: f64, f: impl Fn(f64) -> f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Samples f, g, B, C on the grid t = t_min + j step, j = 0..floor((t_max -
/// t_min)/step). Grid points are computed in parallel but the output order
/// and every value are independent of thread count.
pub fn sweep(
    s: f64,
    t_min: f64,
    t_max: f64,
    step: f64,
    table: &PrimeTable,
) -> Result<Vec<StandardFormSample>> {
    require_s(s)?;
    require_table(table)?;
    if !(t_min < t_max && step > 0.0) {
        return Err(Error::Precondition(format!(
            "sweep requires t_min < t_max and step > 0, got [{t_min}, {t_max}] step {step}"
        )));
    }
    let count = ((t_max - t_min) / step).floor() as usize + 1;
    let n = table.count();
    (0..count)
        .into_par_iter()
        .map(|j| {
            let t = t_min + j as f64 * step;
            let log_f = table.primes().iter().map(|&p| log_factor(p, s, t)).sum::<f64>();
            let log_norm = table
                .primes()
                .iter()
                .map(|&p| (-s * (p as f64).ln()).exp().ln_1p())
                .sum::<f64>();
            let (b, c) = prime_sums_serial(s, t, table);
            Ok(StandardFormSample {
                s,
                t,
                n,
                f: log_f.exp(),
                g: (log_f - log_norm).exp(),
                b,
                c,
            })
        })
        .collect()
}

/// Serial prime sums for use inside the already-parallel sweep.
fn prime_sums_serial(s: f64, t: f64, table: &PrimeTable) -> (f64, f64) {
    let mut b = 0.0;
    let mut c = 0.0;
    for &p in table.primes() {
        let lp = (p as f64).ln();
        b += (-0.5 * s * lp).exp() * (s * t * lp).cos();
        c += (-s * lp).exp();
    }
    (b, c)
}

/// Positions of the strict local maxima of the f column of a sweep.
pub fn local_maxima_t(samples: &[StandardFormSample]) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 1..samples.len().saturating_sub(1) {
        if samples[j].f > samples[j - 1].f && samples[j].f > samples[j + 1].f {
            out.push(samples[j].t);
        }
    }
    out
}

/// Local maxima of f with peak value above `floor`. f dips below 1 away
/// from the zero ordinates and spikes well above 1 near them, so floor = 1
/// separates the zero-tracking peaks from the shallow ripples in between.
pub fn prominent_maxima_t(samples: &[StandardFormSample], floor: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 1..samples.len().saturating_sub(1) {
        if samples[j].f > floor
            && samples[j].f > samples[j - 1].f
            && samples[j].f > samples[j + 1].f
        {
            out.push(samples[j].t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn table_n(n: usize) -> PrimeTable {
        // p_1e6 = 15485863, p_1e5 = 1299709, p_1e4 = 104729, p_1e3 = 7919.
        let limit = match n {
            1_000_000 => 15_485_863,
            100_000 => 1_299_709,
            10_000 => 104_729,
            1_000 => 7_919,
            _ => panic!("unexpected table size"),
        };
        let t = sieve(limit).unwrap();
        assert_eq!(t.count(), n);
        t
    }

    #[test]
    fn f_at_t_zero_is_square_product() {
        let table = sieve(100).unwrap();
        let f = standard_form_f(2.0, 0.0, &table).unwrap();
        let direct: f64 = table
            .primes()
            .iter()
            .map(|&p| {
                let q = 1.0 - 1.0 / p as f64;
                q * q
            })
            .product();
        assert!((f - direct).abs() < 1e-13 * direct);
    }

    #[test]
    fn f_matches_inverse_zeta_abs_squared() {
        // z = s(1/2 + it) = 1 + i for s = 2, t = 0.5.
        let table = table_n(1_000_000);
        let ctx = PrecisionContext::new(20).unwrap();
        let f = standard_form_f(2.0, 0.5, &table).unwrap();
        let z = eta_series(Complex64::new(1.0, 1.0), &ctx).unwrap();
        let oracle = 1.0 / z.norm_sqr();
        // Re z = 1 sits on the boundary of absolute convergence; the
        // truncation error in log f decays only like 1/log p_n. Measured
        // log-gap at n = 1e6 is 0.085 against the bound 3/log p_n = 0.18.
        let log_gap = (f / oracle).ln().abs();
        let bound = 3.0 / (*table.primes().last().unwrap() as f64).ln();
        assert!(log_gap < bound, "log gap {log_gap} exceeds {bound}");
    }

    #[test]
    fn f_at_s_four_matches_zeta_two() {
        let table = table_n(1_000_000);
        let f = standard_form_f(4.0, 0.0, &table).unwrap();
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let oracle = 1.0 / (zeta2 * zeta2);
        assert!((f - oracle).abs() < 1e-4, "f = {f}, oracle = {oracle}");
    }

    #[test]
    fn f_rejects_nonpositive_s() {
        let table = sieve(100).unwrap();
        assert!(matches!(standard_form_f(0.0, 1.0, &table), Err(Error::Domain(_))));
        assert!(matches!(standard_form_f(-1.0, 1.0, &table), Err(Error::Domain(_))));
    }

    #[test]
    fn g_is_f_over_norm_product() {
        let table = sieve(1000).unwrap();
        for &(s, t) in &[(2.0, 0.0), (1.5, 3.0), (3.0, 7.7)] {
            let f = standard_form_f(s, t, &table).unwrap();
            let norm: f64 = table.primes().iter().map(|&p| 1.0 + (p as f64).powf(-s)).product();
            let g = normalized_g(s, t, &table).unwrap();
            assert!((g - f / norm).abs() < 1e-13 * g, "s = {s}, t = {t}");
        }
    }

    #[test]
    fn g_single_factor_closed_form() {
        let table = sieve(2).unwrap();
        assert_eq!(table.count(), 1);
        let g = normalized_g(2.0, 1.0, &table).unwrap();
        let expected = (1.0 - (2.0 * 2f64.ln()).cos() + 0.25) / 1.25;
        assert!((g - expected).abs() < 1e-15);
    }

    #[test]
    fn prime_sums_single_prime() {
        let table = sieve(2).unwrap();
        let t = 0.37;
        let (b, c) = prime_sums(2.0, t, &table).unwrap();
        assert!((b - (2.0 * t * 2f64.ln()).cos() / 2.0).abs() < 1e-15);
        assert!((c - 0.25).abs() < 1e-16);
    }

    #[test]
    fn c_at_four_matches_prime_zeta() {
        // Prime zeta P(4) = 0.0769931397..., truncation tail below 1e-9.
        let table = table_n(1_000_000);
        let (_, c) = prime_sums(4.0, 0.0, &table).unwrap();
        assert!((c - 0.0769931).abs() < 1e-6, "c = {c}");
    }

    #[test]
    fn c_at_one_tracks_mertens_constant() {
        // sum 1/p - log log p_n tends to the Mertens constant 0.26149...
        let table = sieve(1_000_000).unwrap();
        assert_eq!(table.count(), 78_498);
        let (b, _) = prime_sums(2.0, 0.0, &table).unwrap();
        let pn = *table.primes().last().unwrap() as f64;
        let diff = b - pn.ln().ln();
        assert!((diff - 0.26149).abs() < 0.02, "diff = {diff}");
    }

    #[test]
    fn am_gm_holds_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[1_000usize, 100_000] {
            let table = table_n(n);
            for _ in 0..100 {
                let s = rng.gen_range(1.1..4.0);
                let t = rng.gen_range(0.1..30.0);
                assert!(am_gm_bound_check(s, t, &table).unwrap(), "s = {s}, t = {t}, n = {n}");
            }
        }
    }

    #[test]
    fn am_gm_equality_single_factor() {
        let table = sieve(2).unwrap();
        let f = standard_form_f(2.0, 3.0, &table).unwrap();
        let (b, c) = prime_sums(2.0, 3.0, &table).unwrap();
        let am = 1.0 + (-2.0 * b + c) / 1.0;
        assert!((f - am).abs() < 1e-15 * am.abs().max(1.0));
        assert!(am_gm_bound_check(2.0, 3.0, &table).unwrap());
    }

    #[test]
    fn predicted_maxima_values() {
        let zeros = ZeroList::new(vec![14.134725]).unwrap();
        let ts = predicted_maxima(2.0, &zeros).unwrap();
        let expected = 0.5 * (14.134725f64.powi(2) + 0.25).sqrt();
        assert!((ts[0] - expected).abs() < 1e-12);
        // Exact value is 7.07178; the commonly quoted 7.0696 is a loose
        // rounding of it.
        assert!((ts[0] - 7.0696).abs() < 5e-3);
        // At s = 1 the radicand collapses to lambda^2.
        let ts1 = predicted_maxima(1.0, &zeros).unwrap();
        assert!((ts1[0] - 14.134725).abs() < 1e-12);
    }

    #[test]
    fn predicted_maxima_at_zero_lambda() {
        // lambda -> 0 limit of the formula at s = 2 gives 1/4; ZeroList
        // itself rejects nonpositive ordinates, so apply the formula directly.
        let rad = 0.25f64 - (2.0 / 2.0) * (1.0 - 2.0 / 2.0);
        assert!((rad.sqrt() / 2.0 - 0.25).abs() < 1e-16);
    }

    #[test]
    fn zero_scan_finds_first_three_ordinates() {
        let zeros = find_zeros_on_critical_line(30.0, 0.05).unwrap();
        let expected = [14.134725, 21.022040, 25.010858];
        assert_eq!(zeros.lambdas().len(), 3, "found {:?}", zeros.lambdas());
        for (got, want) in zeros.lambdas().iter().zip(expected) {
            assert!((got - want).abs() < 1e-4, "got {got}, want {want}");
        }
        // Dual-resolution agreement.
        let fine = find_zeros_on_critical_line(30.0, 0.02).unwrap();
        assert_eq!(fine.lambdas().len(), 3);
        for (a, b) in zeros.lambdas().iter().zip(fine.lambdas()) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn zero_scan_empty_below_first_zero() {
        let zeros = find_zeros_on_critical_line(10.0, 0.05).unwrap();
        assert!(zeros.lambdas().is_empty());
    }

    #[test]
    fn zero_scan_rejects_coarse_step() {
        assert!(matches!(
            find_zeros_on_critical_line(30.0, 0.1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sweep_is_deterministic_and_matches_pointwise() {
        let table = sieve(10_000).unwrap();
        let a = sweep(2.0, 0.0, 1.0, 0.1, &table).unwrap();
        let b = sweep(2.0, 0.0, 1.0, 0.1, &table).unwrap();
        assert_eq!(a.len(), 11);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.f.to_bits(), y.f.to_bits());
            assert_eq!(x.g.to_bits(), y.g.to_bits());
        }
        for sample in &a {
            let f = standard_form_f(sample.s, sample.t, &table).unwrap();
            assert!((sample.f - f).abs() < 1e-12 * f.max(1.0));
            assert!(sample.f > 0.0 && sample.g > 0.0);
        }
    }

    #[test]
    fn sweep_rejects_bad_grid() {
        let table = sieve(100).unwrap();
        assert!(matches!(sweep(2.0, 1.0, 0.0, 0.1, &table), Err(Error::Precondition(_))));
        assert!(matches!(sweep(2.0, 0.0, 1.0, 0.0, &table), Err(Error::Precondition(_))));
    }

    #[test]
    fn conjugate_symmetry_bit_exact() {
        let table = sieve(10_000).unwrap();
        for j in 0..40 {
            let t = 0.25 * j as f64 + 0.1;
            let plus = standard_form_f(1.3, t, &table).unwrap();
            let minus = standard_form_f(1.3, -t, &table).unwrap();
            assert_eq!(plus.to_bits(), minus.to_bits(), "t = {t}");
        }
    }

    #[test]
    fn f_agrees_with_zeta_oracle_for_s_at_least_two() {
        let table = table_n(1_000_000);
        let ctx = PrecisionContext::new(20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let s = rng.gen_range(2.0..4.0);
            let t = rng.gen_range(0.1..5.0);
            let f = standard_form_f(s, t, &table).unwrap();
            let z = eta_series(Complex64::new(s / 2.0, s * t), &ctx).unwrap();
            let oracle = 1.0 / z.norm_sqr();
            assert!(
                (f - oracle).abs() < 1e-3 * oracle.max(1.0),
                "s = {s}, t = {t}, f = {f}, oracle = {oracle}"
            );
        }
    }

    #[test]
    fn maxima_near_predictions_at_s_two() {
        let table = table_n(1_000_000);
        let zeros = ZeroList::new(vec![14.134725]).unwrap();
        let predicted = predicted_maxima(2.0, &zeros).unwrap();
        let samples = sweep(2.0, 6.5, 7.6, 0.01, &table).unwrap();
        let maxima = local_maxima_t(&samples);
        assert!(
            maxima.iter().any(|&m| (m - predicted[0]).abs() < 0.05),
            "maxima {maxima:?} vs predicted {predicted:?}"
        );
    }
}
