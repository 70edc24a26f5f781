//! The dipole cancellation limit: weights alpha_k split each series term so
//! that adjacent fractional parts cancel, (1 - alpha_k) b_k
//! + alpha_{k+1} b_{k+1} = 0, and the surviving initial term alpha_1 b_1 is
//! the regularized value.
//!
//! Complex arithmetic here runs at double precision; the harmonic dipole
//! value (the Euler-Mascheroni constant) is additionally exposed at
//! arbitrary precision through [`crate::precision::euler_gamma`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::precision::{euler_gamma, PrecisionContext};

type TermFn = Arc<dyn Fn(u64) -> Complex64 + Send + Sync>;

/// A series sum b_1 + b_2 + ... targeted for regularization.
#[derive(Clone)]
pub struct DipoleSeries {
    term: TermFn,
    label: String,
}

impl DipoleSeries {
    pub fn new(label: impl Into<String>, term: impl Fn(u64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { term: Arc::new(term), label: label.into() }
    }

    pub fn term(&self, k: u64) -> Complex64 {
        (self.term)(k)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Geometric series 1 + z + z^2 + ...
    pub fn geometric(z: Complex64) -> Self {
        Self::new("geometric", move |k| z.powf(k as f64 - 1.0))
    }

    /// Harmonic series 1 + 1/2 + 1/3 + ...
    pub fn harmonic() -> Self {
        Self::new("harmonic", |k| Complex64::new(1.0 / k as f64, 0.0))
    }

    /// Alternating exponential series with terms (-e^a)^k / k.
    pub fn exp_alternating(a: f64) -> Self {
        Self::new("exp-alternating", move |k| {
            let kf = k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(sign * (a * kf).exp() / kf, 0.0)
        })
    }
}

/// A solved dipole weighting for a series.
#[derive(Clone)]
pub struct DipoleSolution {
    alpha: TermFn,
    dipole_value: Complex64,
    residual_bound: f64,
}

impl DipoleSolution {
    pub fn new(
        alpha: impl Fn(u64) -> Complex64 + Send + Sync + 'static,
        dipole_value: Complex64,
        residual_bound: f64,
    ) -> Self {
        Self { alpha: Arc::new(alpha), dipole_value, residual_bound }
    }

    pub fn alpha(&self, k: u64) -> Complex64 {
        (self.alpha)(k)
    }

    /// The regularized value alpha_1 (or alpha_1 b_1, as the series
    /// dictates).
    pub fn dipole_value(&self) -> Complex64 {
        self.dipole_value
    }

    pub fn residual_bound(&self) -> f64 {
        self.residual_bound
    }
}

/// Max over 1 <= k <= k_max of |(1 - alpha_k) b_k + alpha_{k+1} b_{k+1}|.
pub fn dipole_residual(series: &DipoleSeries, sol: &DipoleSolution, k_max: u64) -> f64 {
    (1..=k_max)
        .map(|k| {
            let b_k = series.term(k);
            let b_k1 = series.term(k + 1);
            ((Complex64::new(1.0, 0.0) - sol.alpha(k)) * b_k + sol.alpha(k + 1) * b_k1).norm()
        })
        .fold(0.0, f64::max)
}

/// Constant-weight solution for the geometric series: alpha_k = 1/(1-z),
/// valid as the analytic continuation for every z != 1.
pub fn geometric_dipole(z: Complex64) -> Result<DipoleSolution> {
    if (z - 1.0).norm() == 0.0 {
        return Err(Error::Pole("geometric dipole at z = 1".into()));
    }
    let alpha = 1.0 / (1.0 - z);
    Ok(DipoleSolution::new(move |_| alpha, alpha, 0.0))
}

/// Harmonic-series solution alpha_k = -k psi(k) with psi built from
/// psi(1) = -gamma by the recurrence psi(k+1) = psi(k) + 1/k; the dipole
/// value alpha_1 is the Euler-Mascheroni constant.
pub fn harmonic_dipole(k_max: u64, ctx: &PrecisionContext) -> DipoleSolution {
    let gamma = euler_gamma(ctx).to_f64();
    // psi(k) = -gamma + H_{k-1}, tabulated once up to k_max + 1.
    let mut psi = Vec::with_capacity(k_max as usize + 2);
    psi.push(f64::NAN); // index 0 unused
    let mut v = -gamma;
    psi.push(v);
    for k in 1..=k_max {
        v += 1.0 / k as f64;
        psi.push(v);
    }
    let solution = DipoleSolution::new(
        move |k| {
            let p = if (k as usize) < psi.len() {
                psi[k as usize]
            } else {
                -gamma + (1..k).map(|j| 1.0 / j as f64).sum::<f64>()
            };
            Complex64::new(-(k as f64) * p, 0.0)
        },
        Complex64::new(gamma, 0.0),
        1e-12,
    );
    solution
}

/// Closed-form upper bound 2 + (z log z - 2 - 2z)/e^z for the regularized
/// factorial series sum (k-1)!/z^(k-1); the exact dipole solution is not
/// pinned down, only this bound is.
pub fn factorial_series_bound(z: f64) -> Result<f64> {
    if z <= 0.0 {
        return Err(Error::Domain(format!("factorial series bound needs z > 0, got {z}")));
    }
    Ok(2.0 + (z * z.ln() - 2.0 - 2.0 * z) / z.exp())
}

/// Partial zeta sum minus its dipole counterterm:
/// sum_{k<=n} k^-z - n^(1-z)/(1-z), the regularized zeta function for
/// Re z > 0. With `correction`, also subtracts n^-z / 2 (the next
/// Euler-Maclaurin term, an accuracy extension beyond the leading
/// counterterm).
pub fn zeta_dipole(z: Complex64, n: u64, correction: bool) -> Result<Complex64> {
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("zeta_dipole requires Re z > 0, got {}", z.re)));
    }
    if z == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("zeta has a pole at z = 1".into()));
    }
    if n < 2 {
        return Err(Error::Precondition(format!("zeta_dipole requires n >= 2, got {n}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=n {
        sum += (-z * (k as f64).ln()).exp();
    }
    let nf = n as f64;
    let mut v = sum - ((1.0 - z) * nf.ln()).exp() / (1.0 - z);
    if correction {
        v -= 0.5 * (-z * nf.ln()).exp();
    }
    Ok(v)
}

/// Alternating eta route to zeta: (1 - 2^(1-z))^(-1) sum (-1)^(n-1) n^-z,
/// accelerated by the Cohen-Rodriguez Villegas-Zagier Chebyshev scheme.
/// Serves as the independent oracle for the dipole continuation.
pub fn eta_series(z: Complex64, ctx: &PrecisionContext) -> Result<Complex64> {
    if z.re <= 0.0 {
        return Err(Error::Domain(format!("eta_series requires Re z > 0, got {}", z.re)));
    }
    let scale = Complex64::new(1.0, 0.0) - ((1.0 - z) * 2f64.ln()).exp();
    if scale.norm() < 1e-12 {
        return Err(Error::Pole("1 - 2^(1-z) vanishes".into()));
    }
    let digits = (ctx.digits() as f64 / 2.0).max(14.0);
    Ok(eta_accelerated(z, cvz_depth(z, digits)) / scale)
}

/// Acceleration depth for the alternating sum; the error constant grows
/// like e^(pi |Im z| / 2).
fn cvz_depth(z: Complex64, digits: f64) -> usize {
    let t = z.im.abs();
    let need = digits * std::f64::consts::LN_10
        + std::f64::consts::FRAC_PI_2 * t
        + (1.0 + 2.0 * t).ln();
    ((need / (3.0 + 8f64.sqrt()).ln()).ceil() as usize + 8).max(20)
}

/// CVZ-accelerated alternating sum sum_{k>=1} (-1)^(k-1) k^-z.
fn eta_accelerated(z: Complex64, n: usize) -> Complex64 {
    let mut d = (3.0 + 8f64.sqrt()).powi(n as i32);
    d = 0.5 * (d + 1.0 / d);
    let mut b = -1.0f64;
    let mut c = -d;
    let mut s = Complex64::new(0.0, 0.0);
    for k in 0..n {
        c = b - c;
        s += c * (-z * ((k + 1) as f64).ln()).exp();
        b *= (k as f64 + n as f64) * (k as f64 - n as f64)
            / ((k as f64 + 0.5) * (k as f64 + 1.0));
    }
    s / d
}

/// |(1 - 2^(1-z)) * zeta_dipole(z, n) - sum_{k<=2n} (-1)^(k-1) k^-z|.
/// Shrinks with n: the truncated alternating sum equals the scaled
/// regularized partial zeta up to terms vanishing in the limit.
pub fn eta_consistency(z: Complex64, n: u64) -> Result<f64> {
    let reg = zeta_dipole(z, n, false)?;
    let scale = Complex64::new(1.0, 0.0) - ((1.0 - z) * 2f64.ln()).exp();
    let mut xi = Complex64::new(0.0, 0.0);
    for k in 1..=2 * n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        xi += sign * (-z * (k as f64).ln()).exp();
    }
    Ok((scale * reg - xi).norm())
}

/// Solved dipole for the alternating exponential series
/// E_n = sum (-e^a)^m / m.
pub struct ExpAlternatingDipole {
    solution: DipoleSolution,
    /// The regularized series value E = -log(1 + e^a).
    regularized_sum: f64,
}

impl ExpAlternatingDipole {
    pub fn solution(&self) -> &DipoleSolution {
        &self.solution
    }

    /// alpha_1 = e^-a log(1 + e^a), the dipole limit value.
    pub fn dipole_value(&self) -> f64 {
        self.solution.dipole_value().re
    }

    pub fn regularized_sum(&self) -> f64 {
        self.regularized_sum
    }
}

/// log(1 + e^a) without overflow for large positive a.
pub(crate) fn ln_one_plus_exp(a: f64) -> f64 {
    if a > 0.0 {
        a + (-a).exp().ln_1p()
    } else {
        a.exp().ln_1p()
    }
}

/// Dipole solution for sum (-e^a)^m / m: alpha weights from the recurrence
/// alpha_{k+1} = (k+1)(1 - alpha_k) / (k e^a), with
/// alpha_1 = e^-a log(1 + e^a) and regularized value E = -log(1 + e^a).
pub fn exp_alternating_dipole(a: f64, n_max: u64) -> ExpAlternatingDipole {
    let l = ln_one_plus_exp(a);
    let alpha1 = (-a).exp() * l;
    let ea = a.exp();
    let mut alphas = Vec::with_capacity(n_max as usize + 2);
    alphas.push(f64::NAN);
    alphas.push(alpha1);
    if a >= 0.0 {
        // Forward recurrence; the per-step factor (k+1)/(k e^a) keeps
        // rounding errors bounded for a >= 0.
        let mut alpha = alpha1;
        for k in 1..=n_max {
            alpha = (k as f64 + 1.0) * (1.0 - alpha) / (k as f64 * ea);
            alphas.push(alpha);
        }
    } else {
        // The forward recurrence amplifies errors by e^|a| per step for
        // a < 0; use the convergent tail form
        // alpha_k = k sum_{j>=0} (-e^a)^j / (k + j) instead.
        for k in 2..=n_max + 1 {
            let mut sum = 0.0;
            let mut pow = 1.0;
            let mut j = 0u64;
            loop {
                sum += pow / (k + j) as f64;
                pow *= -ea;
                j += 1;
                if pow.abs() / ((k + j) as f64) < 1e-18 {
                    break;
                }
            }
            alphas.push(k as f64 * sum);
        }
    }
    let solution = DipoleSolution::new(
        move |k| {
            let v = alphas.get(k as usize).copied().unwrap_or(f64::NAN);
            Complex64::new(v, 0.0)
        },
        Complex64::new(alpha1, 0.0),
        1e-10,
    );
    ExpAlternatingDipole { solution, regularized_sum: -l }
}

/// Max over probes of |(1 + A_n/n)^n - e^(A_n)|; decays toward 0 as the
/// probes grow for bounded sequences.
pub fn exp_limit_check(sequence: impl Fn(u64) -> f64, probes: &[u64]) -> f64 {
    probes
        .iter()
        .map(|&n| {
            let a = sequence(n);
            let nf = n as f64;
            ((nf * (a / nf).ln_1p()).exp() - a.exp()).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::default()
    }

    #[test]
    fn geometric_matches_convergent_sum() {
        let z = Complex64::new(0.5, 0.0);
        let sol = geometric_dipole(z).unwrap();
        assert!((sol.dipole_value() - 2.0).norm() < 1e-12);
        // Compare against the classical sum on a |z| < 1 grid.
        for k in 0..20 {
            let z = 0.9 * Complex64::new(0.0, std::f64::consts::TAU * k as f64 / 20.0).exp();
            let classical: Complex64 = (1..200).map(|j| z.powi(j - 1)).sum();
            let sol = geometric_dipole(z).unwrap();
            assert!((sol.dipole_value() - classical).norm() < 1e-8);
        }
    }

    #[test]
    fn geometric_continuation_values() {
        let sol = geometric_dipole(Complex64::new(2.0, 0.0)).unwrap();
        assert!((sol.dipole_value() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let grandi = geometric_dipole(Complex64::new(-1.0, 0.0)).unwrap();
        assert!((grandi.dipole_value() - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        assert!(matches!(geometric_dipole(Complex64::new(1.0, 0.0)), Err(Error::Pole(_))));
    }

    #[test]
    fn geometric_residual_is_zero_at_z2() {
        let z = Complex64::new(2.0, 0.0);
        let series = DipoleSeries::geometric(z);
        let sol = geometric_dipole(z).unwrap();
        // Exact cancellation: (1 - 1/(1-z)) z^{k-1} + z^k/(1-z) = 0.
        assert_eq!(dipole_residual(&series, &sol, 30), 0.0);
    }

    #[test]
    fn residual_with_zero_weights_is_max_term() {
        let z = Complex64::new(0.5, 0.0);
        let series = DipoleSeries::geometric(z);
        let zero = DipoleSolution::new(|_| Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
        // |b_k + 0| maximized at k = 1.
        assert!((dipole_residual(&series, &zero, 10) - 1.0).abs() < 1e-15);
    }

    // Independent oracle for gamma: Richardson extrapolation of
    // H_N - log N over N, 2N, 4N (eliminates the 1/N and 1/N^2 terms).
    fn gamma_oracle() -> f64 {
        let h = |n: u64| (1..=n).map(|k| 1.0 / k as f64).sum::<f64>() - (n as f64).ln();
        let n = 1 << 16;
        let (a, b, c) = (h(n), h(2 * n), h(4 * n));
        // Two Richardson stages for error terms c1/N + c2/N^2.
        let r1 = 2.0 * b - a;
        let r2 = 2.0 * c - b;
        (4.0 * r2 - r1) / 3.0
    }

    #[test]
    fn harmonic_dipole_value_is_gamma() {
        let sol = harmonic_dipole(100, &ctx());
        let oracle = gamma_oracle();
        assert!(
            (sol.dipole_value().re - oracle).abs() < 1e-12,
            "gamma {} vs oracle {oracle}",
            sol.dipole_value().re
        );
        // alpha_1 = -1 * psi(1) = gamma.
        assert!((sol.alpha(1).re - sol.dipole_value().re).abs() < 1e-15);
    }

    #[test]
    fn harmonic_dipole_residual_vanishes() {
        let sol = harmonic_dipole(101, &ctx());
        let series = DipoleSeries::harmonic();
        assert!(dipole_residual(&series, &sol, 100) <= 1e-12);
    }

    #[test]
    fn factorial_bound_values() {
        let v = factorial_series_bound(1.0).unwrap();
        assert!((v - (2.0 - 4.0 / std::f64::consts::E)).abs() < 1e-14);
        assert!((v - 0.5285).abs() < 1e-4);
        assert!((factorial_series_bound(800.0).unwrap() - 2.0).abs() < 1e-12);
        // z log z - 2 - 2z < 0 only up to z ~ 9.12; past that the bound
        // sits slightly above 2 and decays back to it. The bound stays
        // finite and close to 2 throughout.
        let mut z = 0.1;
        while z <= 100.0 {
            let b = factorial_series_bound(z).unwrap();
            if z < 9.0 {
                assert!(b < 2.0, "bound >= 2 at z = {z}");
            }
            assert!(b < 2.01, "bound {b} strays at z = {z}");
            z += 0.1;
        }
        assert!(factorial_series_bound(0.0).is_err());
    }

    #[test]
    fn zeta_dipole_at_two_matches_pi_squared_over_six() {
        let v = zeta_dipole(Complex64::new(2.0, 0.0), 1_000_000, false).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((v.re - exact).abs() < 1e-6, "{} vs {exact}", v.re);
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn zeta_dipole_half_with_correction() {
        let v = zeta_dipole(Complex64::new(0.5, 0.0), 1_000_000, true).unwrap();
        let oracle = eta_series(Complex64::new(0.5, 0.0), &ctx()).unwrap();
        assert!((v.re - oracle.re).abs() < 1e-6);
        assert!((oracle.re + 1.4603545088).abs() < 1e-9);
    }

    #[test]
    fn zeta_dipole_near_first_zero() {
        let z = Complex64::new(0.5, 14.134725);
        let v = zeta_dipole(z, 1_000_000, true).unwrap();
        assert!(v.norm() < 1e-3, "|zeta| = {}", v.norm());
        // Cross-check with the eta route.
        assert!(eta_series(z, &ctx()).unwrap().norm() < 1e-3);
    }

    #[test]
    fn zeta_dipole_domain_errors() {
        assert!(matches!(zeta_dipole(Complex64::new(1.0, 0.0), 100, false), Err(Error::Pole(_))));
        assert!(matches!(zeta_dipole(Complex64::new(-0.5, 1.0), 100, false), Err(Error::Domain(_))));
        assert!(zeta_dipole(Complex64::new(2.0, 0.0), 1, false).is_err());
    }

    #[test]
    fn eta_series_reference_values() {
        let c = ctx();
        let v2 = eta_series(Complex64::new(2.0, 0.0), &c).unwrap();
        assert!((v2.re - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
        let vh = eta_series(Complex64::new(0.5, 0.0), &c).unwrap();
        assert!((vh.re + 1.4603545088).abs() < 1e-10);
        let v1i = eta_series(Complex64::new(1.0, 1.0), &c).unwrap();
        assert!((v1i - Complex64::new(0.58216, -0.92684)).norm() < 1e-4);
        assert!(matches!(eta_series(Complex64::new(1.0, 0.0), &c), Err(Error::Pole(_))));
    }

    #[test]
    fn eta_dual_depth_agreement() {
        // Same value at two acceleration depths.
        for &(re, im) in &[(0.5, 0.0), (1.0, 1.0), (0.3, 2.0), (1.5, 14.0)] {
            let z = Complex64::new(re, im);
            let a = eta_accelerated(z, cvz_depth(z, 15.0));
            let b = eta_accelerated(z, cvz_depth(z, 15.0) + 15);
            assert!((a - b).norm() < 1e-13, "depth instability at {z}");
        }
    }

    #[test]
    fn eta_consistency_shrinks_with_n() {
        let z = Complex64::new(0.75, 0.0);
        let e3 = eta_consistency(z, 1_000).unwrap();
        let e4 = eta_consistency(z, 10_000).unwrap();
        let e5 = eta_consistency(z, 100_000).unwrap();
        assert!(e3 > e4 && e4 > e5, "{e3} {e4} {e5}");

        assert!(eta_consistency(Complex64::new(2.0, 0.0), 10_000).unwrap() <= 1e-4);
        // Decay here is n^(-0.3); the measured value at n = 1e5 is 0.0185.
        assert!(eta_consistency(Complex64::new(0.3, 2.0), 100_000).unwrap() <= 2e-2);
    }

    #[test]
    fn exp_alternating_closed_forms() {
        let d = exp_alternating_dipole(0.0, 50);
        assert!((d.regularized_sum() + 2f64.ln()).abs() < 1e-15);
        assert!((d.dipole_value() - 2f64.ln()).abs() < 1e-15);

        // Convergent regime: partial sums approach -log(1 + e^-1).
        let a = -1.0;
        let d = exp_alternating_dipole(a, 50);
        let partial: f64 = (1..400)
            .map(|m| {
                let mf = m as f64;
                (if m % 2 == 0 { 1.0 } else { -1.0 }) * (a * mf).exp() / mf
            })
            .sum();
        assert!((d.regularized_sum() - partial).abs() < 1e-10);
        assert!((d.dipole_value() - (-a).exp() * ln_one_plus_exp(a)).abs() < 1e-14);

        // Divergent regime: closed form holds, partial sums oscillate.
        let a = 0.5;
        let d = exp_alternating_dipole(a, 50);
        assert!((d.dipole_value() - (-0.5f64).exp() * ln_one_plus_exp(0.5)).abs() < 1e-14);
        let partial = |n: u64| -> f64 {
            (1..=n)
                .map(|m| {
                    let mf = m as f64;
                    (if m % 2 == 0 { 1.0 } else { -1.0 }) * (a * mf).exp() / mf
                })
                .sum()
        };
        let (p40, p41, p42) = (partial(40), partial(41), partial(42));
        assert!((p41 - p40) * (p42 - p41) < 0.0, "partial sums should oscillate");
        assert!((p42 - p41).abs() > (p41 - p40).abs() * 0.5);
    }

    #[test]
    fn exp_alternating_residual() {
        // Absolute residual where the terms stay moderate.
        for &a in &[-1.0, 0.0, 0.1] {
            let d = exp_alternating_dipole(a, 120);
            let series = DipoleSeries::exp_alternating(a);
            let r = dipole_residual(&series, d.solution(), 100);
            assert!(r <= 1e-10, "residual {r} at a = {a}");
        }
        // With growing terms the roundoff floor scales with max |b_k|;
        // check the residual relative to that scale.
        for &a in &[0.3, 0.8] {
            let d = exp_alternating_dipole(a, 120);
            let series = DipoleSeries::exp_alternating(a);
            let r = dipole_residual(&series, d.solution(), 100);
            let scale = (1..=101u64).map(|k| series.term(k).norm()).fold(0.0, f64::max);
            assert!(r <= 1e-12 * scale, "residual {r} vs scale {scale} at a = {a}");
        }
    }

    #[test]
    fn exp_alternating_functional_identity() {
        // E(a) - E(-a) = -a, exact for log(1 + e^a).
        let mut a = -3.0;
        while a <= 3.0 {
            let ea = exp_alternating_dipole(a, 1).regularized_sum();
            let ema = exp_alternating_dipole(-a, 1).regularized_sum();
            assert!((ea - ema + a).abs() <= 1e-12, "identity fails at a = {a}");
            a += 0.25;
        }
    }

    #[test]
    fn exp_limit_check_constant_sequences() {
        let err = exp_limit_check(|_| 1.0, &[1_000_000]);
        // Second-order expansion: (1 + 1/n)^n = e (1 - 1/(2n) + ...).
        let predicted = std::f64::consts::E / 2e6;
        assert!((err - predicted).abs() < 0.01 * predicted, "{err} vs {predicted}");
        assert_eq!(exp_limit_check(|_| 0.0, &[10, 100]), 0.0);
    }

    #[test]
    fn exp_limit_error_scales_inverse_n() {
        // log-log slope -1 +/- 0.2 for a constant sequence.
        let e3 = exp_limit_check(|_| 1.0, &[1_000]);
        let e6 = exp_limit_check(|_| 1.0, &[1_000_000]);
        let slope = (e6.ln() - e3.ln()) / (1e6f64.ln() - 1e3f64.ln());
        assert!((slope + 1.0).abs() < 0.2, "slope {slope}");
    }

    #[test]
    fn zeta_dipole_correction_error_exponent() {
        // With the correction term the defect vs the eta oracle scales like
        // n^(-Re z - 1); measure the log-log slope.
        let c = ctx();
        for &re in &[0.5, 1.5] {
            let z = Complex64::new(re, 0.0);
            let oracle = eta_series(z, &c).unwrap();
            let err = |n: u64| (zeta_dipole(z, n, true).unwrap() - oracle).norm();
            let (n1, n2) = (2_000u64, 64_000u64);
            let slope = (err(n2).ln() - err(n1).ln()) / ((n2 as f64).ln() - (n1 as f64).ln());
            let predicted = -(re + 1.0);
            assert!((slope - predicted).abs() < 0.3, "slope {slope} vs {predicted} at Re z = {re}");
        }
    }

    proptest! {
        #[test]
        fn geometric_dipole_equals_convergent_sum(re in -0.7f64..0.7, im in -0.7f64..0.7) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() < 0.95);
            let sol = geometric_dipole(z).unwrap();
            let mut sum = Complex64::new(0.0, 0.0);
            let mut term = Complex64::new(1.0, 0.0);
            for _ in 0..2000 {
                sum += term;
                term *= z;
            }
            prop_assert!((sol.dipole_value() - sum).norm() < 1e-12);
        }

        #[test]
        fn eta_matches_plain_partial_sums(re in 1.5f64..3.0, im in -3.0f64..3.0) {
            // Where the raw series converges absolutely enough to compare.
            let z = Complex64::new(re, im);
            let c = ctx();
            let fast = eta_series(z, &c).unwrap();
            let mut raw = Complex64::new(0.0, 0.0);
            for k in 1..60_000u64 {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                raw += sign * (-z * (k as f64).ln()).exp();
            }
            let scale = Complex64::new(1.0, 0.0) - ((1.0 - z) * 2f64.ln()).exp();
            prop_assert!((fast - raw / scale).norm() < 1e-3);
        }
    }
}
