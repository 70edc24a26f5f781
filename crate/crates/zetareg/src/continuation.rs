//! Analytic continuation machinery for the oscillatory prime sum B(s,t):
//! the real antiderivative E of e^(ar) cos r / r, pi-segment integrals of
//! that integrand, the beta-partition equations that carry the dipole
//! cancellation onto segment boundaries, the closed-form regularized value
//! of B, and a functional-equation consistency check inside the critical
//! strip.

use num_complex::Complex64;

use crate::dipole::eta_series;
use crate::error::{Error, Result};
use crate::precision::{ln_gamma_complex, BigReal, PrecisionContext};
use crate::quad;

/// Parameters of the integral model e^(ar) cos r / r for B(s,t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorParams {
    pub s: f64,
    pub t: f64,
    /// Envelope exponent a = (1/s - 1/2)/t; positive exactly when s < 2.
    pub a: f64,
    /// Segment offset: segment k covers [(m+k) pi, (m+k+1) pi].
    pub m: u32,
}

impl OscillatorParams {
    pub fn new(s: f64, t: f64, m: u32) -> Result<Self> {
        if !(s > 0.0 && s <= 2.0) {
            return Err(Error::Domain(format!("s must lie in (0, 2], got {s}")));
        }
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        Ok(OscillatorParams { s, t, a: (1.0 / s - 0.5) / t, m })
    }

    /// Left endpoint of segment k shifted by beta.
    fn r_at(&self, k: u32, beta: f64) -> f64 {
        (self.m as f64 + k as f64) * std::f64::consts::PI + beta
    }
}

/// Internally dividing points beta_k of consecutive pi-segments.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaPartition {
    pub m: u32,
    pub betas: Vec<f64>,
}

const SERIES_R_MAX: f64 = 40.0;

/// E(r): antiderivative of e^(ar) cos r / r, fixed by E(r) - log r -> 0 as
/// r -> 0. Computed from the entire-part power series
/// log r + sum_{k>=1} Re((a+i)^k) r^k / (k k!), in precision extended to
/// absorb the cancellation between terms as large as e^(|a+i| r).
pub fn exp_integral_real(r: f64, a: f64, ctx: &PrecisionContext) -> Result<BigReal> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("exp_integral_real requires r > 0, got {r}")));
    }
    if a * r > 700.0 {
        return Err(Error::Overflow(format!("a r = {} exceeds the exp range", a * r)));
    }
    if r <= SERIES_R_MAX {
        return series_value(r, a, ctx);
    }
    // Beyond the series range: integrate the defining integrand from the
    // series anchor.
    let work = ctx.bumped(5);
    let base = series_value(SERIES_R_MAX, a, &work)?;
    let lo = BigReal::from_f64(SERIES_R_MAX, &work);
    let hi = BigReal::from_f64(r, &work);
    let a_big = BigReal::from_f64(a, &work);
    let tail = quad::integrate(
        &lo,
        &hi,
        &|x, _, _, c| a_big.mul(x, c).exp(c).mul(&x.cos(c), c).div(x, c),
        &work,
    )?;
    Ok(base.add(&tail, ctx))
}

fn series_value(r: f64, a: f64, ctx: &PrecisionContext) -> Result<BigReal> {
    let c_abs_r = (1.0 + a * a).sqrt() * r;
    // Largest term is about e^(|c| r); those digits cancel down to a result
    // of order max(e^(ar)/r, |log r|).
    let extra = (c_abs_r * std::f64::consts::LOG10_E).ceil() as u32 + 10;
    let work = ctx.bumped(extra);
    let r_big = BigReal::from_f64(r, &work);
    let ar = BigReal::from_f64(a, &work).mul(&r_big, &work);
    let mut sum = r_big.ln(&work)?;
    // p = ((a + i) r)^k, advanced one complex multiply per term.
    let mut p_re = ar.clone();
    let mut p_im = r_big.clone();
    let mut ln_fact = 0.0f64;
    let ln_cr = c_abs_r.ln();
    let stop = -((work.working_digits() as f64 + 2.0) * std::f64::consts::LN_10)
        + (a * r).max(0.0);
    let mut k = 1u64;
    loop {
        let kf = BigReal::from_u64(k, &work);
        let fact = factorial_big(k, &work);
        sum = sum.add(&p_re.div(&kf.mul(&fact, &work), &work), &work);
        k += 1;
        ln_fact += (k as f64).ln();
        // Magnitude of the next term in logs; series tail is dominated once
        // this is past the working precision.
        if (k as f64) * ln_cr - ln_fact - (k as f64).ln() < stop {
            break;
        }
        let re = p_re.mul(&ar, &work).sub(&p_im.mul(&r_big, &work), &work);
        let im = p_re.mul(&r_big, &work).add(&p_im.mul(&ar, &work), &work);
        p_re = re;
        p_im = im;
        if k > 100_000 {
            return Err(Error::InsufficientPrecision("series for E failed to settle".into()));
        }
    }
    Ok(sum)
}

fn factorial_big(k: u64, ctx: &PrecisionContext) -> BigReal {
    let mut f = BigReal::one(ctx);
    for j in 2..=k {
        f = f.mul(&BigReal::from_u64(j, ctx), ctx);
    }
    f
}

/// Convenience double-precision view of E(r).
pub fn exp_integral_real_f64(r: f64, a: f64) -> Result<f64> {
    let ctx = PrecisionContext::new(30)?;
    Ok(exp_integral_real(r, a, &ctx)?.to_f64())
}

fn beta_ctx() -> PrecisionContext {
    PrecisionContext::new(30).expect("static precision")
}

/// Integral of e^(ar) cos r / r over segment k, [(m+k) pi, (m+k+1) pi],
/// as the difference of E at the endpoints.
pub fn segment_integral(k: u32, params: &OscillatorParams) -> Result<f64> {
    let ctx = beta_ctx();
    let lo = exp_integral_real(params.r_at(k, 0.0), params.a, &ctx)?;
    let hi = exp_integral_real(params.r_at(k + 1, 0.0), params.a, &ctx)?;
    Ok(hi.sub(&lo, &ctx).to_f64())
}

/// Solves E((m+k+1) pi + beta_{k+1}) = E((m+k) pi + beta_k) for
/// beta_{k+1} in [0, pi) by bisection on the sign-consistent sub-interval.
/// The cosine changes sign once inside the segment, at the half-pi point,
/// so E is monotone on each half and a bracket is checked on both.
pub fn solve_beta_next(beta_k: f64, k: u32, params: &OscillatorParams) -> Result<f64> {
    if !(0.0..std::f64::consts::PI).contains(&beta_k) {
        return Err(Error::Precondition(format!("beta_k must lie in [0, pi), got {beta_k}")));
    }
    let ctx = beta_ctx();
    let target = exp_integral_real(params.r_at(k, beta_k), params.a, &ctx)?;
    let g = |beta: f64| -> Result<f64> {
        let v = exp_integral_real(params.r_at(k + 1, beta), params.a, &ctx)?;
        Ok(v.sub(&target, &ctx).to_f64())
    };
    let half = std::f64::consts::FRAC_PI_2;
    let top = std::f64::consts::PI - 1e-9;
    let g0 = g(0.0)?;
    if g0 == 0.0 {
        return Ok(0.0);
    }
    let gh = g(half)?;
    let gt = g(top)?;
    let (mut lo, mut hi, mut glo) = if g0 * gh <= 0.0 {
        (0.0, half, g0)
    } else if gh * gt <= 0.0 {
        (half, top, gh)
    } else {
        return Err(Error::NoRoot(format!(
            "no sign change on segment {} for beta_k = {beta_k}",
            k + 1
        )));
    };
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if gm == 0.0 {
            return Ok(mid);
        }
        if glo * gm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            glo = gm;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Dipole weights from the dividing points: 1 - alpha_k is the tail share
/// of segment k past beta_k, alpha_{k+1} the head share of segment k+1 up
/// to beta_{k+1}, both as ratios of E differences.
pub fn alpha_from_beta(
    beta_k: f64,
    beta_k1: f64,
    k: u32,
    params: &OscillatorParams,
) -> Result<(f64, f64)> {
    let ctx = beta_ctx();
    let e = |kk: u32, beta: f64| exp_integral_real(params.r_at(kk, beta), params.a, &ctx);
    let e_k0 = e(k, 0.0)?;
    let e_kb = e(k, beta_k)?;
    let e_k10 = e(k + 1, 0.0)?;
    let e_k1b = e(k + 1, beta_k1)?;
    let e_k20 = e(k + 2, 0.0)?;
    let seg_k = e_k10.sub(&e_k0, &ctx);
    let seg_k1 = e_k20.sub(&e_k10, &ctx);
    if seg_k.is_zero() {
        return Err(Error::ZeroSegment(format!("segment {k}")));
    }
    if seg_k1.is_zero() {
        return Err(Error::ZeroSegment(format!("segment {}", k + 1)));
    }
    let one_minus_alpha_k = e_k10.sub(&e_kb, &ctx).div(&seg_k, &ctx).to_f64();
    let alpha_k1 = e_k1b.sub(&e_k10, &ctx).div(&seg_k1, &ctx).to_f64();
    Ok((1.0 - one_minus_alpha_k, alpha_k1))
}

/// |(1 - alpha_k) b_k + alpha_{k+1} b_{k+1}| for weights produced by the
/// beta chain; vanishes when the partition solves the dipole equation.
pub fn dipole_identity_residual(
    beta_k: f64,
    beta_k1: f64,
    k: u32,
    params: &OscillatorParams,
) -> Result<f64> {
    let (alpha_k, alpha_k1) = alpha_from_beta(beta_k, beta_k1, k, params)?;
    let b_k = segment_integral(k, params)?;
    let b_k1 = segment_integral(k + 1, params)?;
    Ok(((1.0 - alpha_k) * b_k + alpha_k1 * b_k1).abs())
}

/// Regularized B(s,t) with the truncation bracket around it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularizedB {
    /// Dipole limit value -log(1 + e^a).
    pub value: f64,
    /// Numerically smaller bracket endpoint. Both endpoints carry an
    /// unquantified additive constant that is suppressed here.
    pub lower: f64,
    pub upper: f64,
    pub a: f64,
}

/// Closed-form regularized B(s,t) = -log(1 + e^a) for 1 < s < 2, t > 0,
/// with bracket endpoints -(1 + 4/n) L and -(1 - 4/n) L / 2 for
/// L = log(1 + e^a), sorted numerically. The bracket endpoints suppress an
/// additive constant; they bound the shape of the truncation, not its
/// absolute offset.
pub fn regularized_b(s: f64, t: f64, n: u32) -> Result<RegularizedB> {
    if !(s > 1.0 && s < 2.0) {
        return Err(Error::Domain(format!("regularized B requires 1 < s < 2, got s = {s}")));
    }
    if !(t > 0.0) {
        return Err(Error::Domain(format!("regularized B requires t > 0, got {t}")));
    }
    if n == 0 {
        return Err(Error::Precondition("bracket parameter n must be positive".into()));
    }
    let a = (1.0 / s - 0.5) / t;
    let l = crate::dipole::ln_one_plus_exp(a);
    let eps = 4.0 / n as f64;
    let e1 = -0.5 * (1.0 - eps) * l;
    let e2 = -(1.0 + eps) * l;
    Ok(RegularizedB { value: -l, lower: e1.min(e2), upper: e1.max(e2), a })
}

/// |zeta(z) - pi^(z - 1/2) Gamma((1-z)/2) / Gamma(z/2) zeta(1-z)| inside
/// the critical strip, both zeta values through the alternating series.
pub fn functional_equation_check(z: Complex64, ctx: &PrecisionContext) -> Result<f64> {
    if !(z.re > 0.0 && z.re < 1.0) {
        return Err(Error::Domain(format!("z must lie in the strip 0 < Re z < 1, got {}", z.re)));
    }
    let left = eta_series(z, ctx)?;
    let right_zeta = eta_series(Complex64::new(1.0, 0.0) - z, ctx)?;
    let half = Complex64::new(0.5, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let log_ratio = (z - half) * std::f64::consts::PI.ln()
        + ln_gamma_complex((one - z) / 2.0)
        - ln_gamma_complex(z / 2.0);
    Ok((left - log_ratio.exp() * right_zeta).norm())
}
