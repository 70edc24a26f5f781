//! Exact Bernoulli numbers by three routes (defining recurrence, double
//! sum, single-sum floor formula), even zeta values in closed form, the
//! lemniscate constant and its generalizations by quadrature, Hurwitz
//! numbers by recurrence, and a Gaussian-integer lattice sum that serves
//! as the independent oracle for the Hurwitz identity.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::precision::{binomial, const_pi, BigReal, ExactRational, PrecisionContext};
use crate::quad;

/// Exact Bernoulli numbers indexed by n.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliTable {
    values: BTreeMap<u32, ExactRational>,
}

impl BernoulliTable {
    pub fn get(&self, n: u32) -> Option<&ExactRational> {
        self.values.get(&n)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &ExactRational)> {
        self.values.iter()
    }
}

/// Exact Hurwitz numbers H_{4n} together with the lemniscate constant.
#[derive(Debug, Clone)]
pub struct HurwitzTable {
    values: BTreeMap<u32, ExactRational>,
    pub pi_lemniscate: BigReal,
}

impl HurwitzTable {
    /// H at index 4n (None off the 4-multiples or past the table).
    pub fn get(&self, index: u32) -> Option<&ExactRational> {
        self.values.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u32, &ExactRational)> {
        self.values.iter()
    }
}

fn big_binomial(n: u64, k: u64) -> Result<BigInt> {
    Ok(BigInt::from(binomial(n, k)?))
}

/// Exact integer from the significant-digit rendering `d.ddd...e<exp>` of
/// a value known to be an integer represented with spare digits.
fn bigint_from_sig(text: &str) -> Result<BigInt> {
    let (mant, exp) = text.split_once(['e', 'E']).unwrap_or((text, "0"));
    let exp: i64 = exp
        .parse()
        .map_err(|e| Error::InsufficientPrecision(format!("exponent parse: {e}")))?;
    let neg = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    if digits.is_empty() || digits.chars().all(|c| c == '0') {
        return Ok(BigInt::zero());
    }
    // Mantissa reads d.ddd, so the value is digits * 10^(exp - len + 1).
    let shift = exp - (digits.len() as i64 - 1);
    let mut v: BigInt = digits
        .parse()
        .map_err(|e| Error::InsufficientPrecision(format!("mantissa parse: {e}")))?;
    if shift >= 0 {
        v *= BigInt::from(10u32).pow(shift as u32);
    } else {
        let (q, r) = (
            &v / BigInt::from(10u32).pow((-shift) as u32),
            &v % BigInt::from(10u32).pow((-shift) as u32),
        );
        if !r.is_zero() {
            return Err(Error::InsufficientPrecision(
                "integer rendering carries a fractional part".into(),
            ));
        }
        v = q;
    }
    Ok(if neg { -v } else { v })
}

/// Bernoulli numbers from the defining recurrence
/// sum_{k=0}^{m} C(m+1, k) B_k = 0 with B_0 = 1. This is the oracle the
/// two summation formulas are checked against.
pub fn bernoulli_recurrence_oracle(n_max: u32) -> Result<BernoulliTable> {
    let mut values = BTreeMap::new();
    values.insert(0, ExactRational::one());
    for m in 1..=n_max {
        let mut acc = ExactRational::zero();
        for k in 0..m {
            let c = BigRational::from_integer(big_binomial(m as u64 + 1, k as u64)?);
            acc += c * values.get(&k).expect("built in order");
        }
        let denom = BigRational::from_integer(BigInt::from(m + 1));
        values.insert(m, -acc / denom);
    }
    Ok(BernoulliTable { values })
}

/// B_n = sum_{m=0}^{n} 1/(m+1) sum_{l=0}^{m} (-1)^l C(m, l) l^n, exact,
/// with the 0^0 = 1 convention. This convention gives B_1 = -1/2; all
/// other values coincide with the recurrence table.
pub fn bernoulli_double_sum(n: u32) -> Result<ExactRational> {
    let mut total = ExactRational::zero();
    for m in 0..=n as u64 {
        let mut inner = BigInt::zero();
        for l in 0..=m {
            let power = if l == 0 {
                if n == 0 {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            } else {
                BigInt::from(l).pow(n)
            };
            let term = big_binomial(m, l)? * power;
            if l % 2 == 0 {
                inner += term;
            } else {
                inner -= term;
            }
        }
        total += BigRational::new(inner, BigInt::from(m + 1));
    }
    Ok(total)
}

/// Signed B_{2n} from the single-summation floor formula
/// |B_{2n}| = (1 + floor(2 (2^{2n}-1) (2n)! / (2^{2n-1} pi^{2n}) S)) /
/// (2 (2^{2n}-1)), S = sum_{m=1}^{3n} m^{-2n}, with sign (-1)^(n+1).
/// The floored quantity sits within K * zeta-tail of the integer above it,
/// so the working precision is sized from that gap and the floor is
/// re-verified at ten extra digits.
pub fn bernoulli_single_sum(n: u32, ctx: &PrecisionContext) -> Result<ExactRational> {
    if n == 0 {
        return Err(Error::Range("single-sum formula needs n >= 1".into()));
    }
    let two_n = 2 * n;
    // Upper bounds on log10 of the floored quantity and of its distance
    // to the nearest integer (the truncated zeta deficit).
    let log10_k = (two_n as f64 * (two_n as f64 / (2.0 * std::f64::consts::PI * std::f64::consts::E)).ln()
        + 0.5 * (two_n as f64).ln()
        + (2.0f64).ln() * (two_n as f64 + 1.0))
        * std::f64::consts::LOG10_E
        + 2.0;
    let log10_gap = -((two_n as f64 - 1.0) * (3.0 * n as f64).log10()) - 1.0;
    let digits = (log10_k.max(0.0) - log10_gap).ceil() as u32 + ctx.guard_digits().max(10);
    let base = PrecisionContext::with_guard(digits.max(ctx.digits()), 10)?;

    let floor_at = |c: &PrecisionContext| -> Result<BigInt> {
        let two_pow = BigReal::from_u64(2, c).powi(two_n as i64, c);
        let scale = two_pow
            .sub(&BigReal::one(c), c)
            .mul(&BigReal::from_u64(2, c), c);
        let fact = {
            let mut f = BigReal::one(c);
            for j in 2..=two_n as u64 {
                f = f.mul(&BigReal::from_u64(j, c), c);
            }
            f
        };
        let denom = BigReal::from_u64(2, c)
            .powi(two_n as i64 - 1, c)
            .mul(&const_pi(c).powi(two_n as i64, c), c);
        let mut s = BigReal::zero(c);
        for m in 1..=3 * n as u64 {
            s = s.add(&BigReal::from_u64(m, c).powi(-(two_n as i64), c), c);
        }
        let x = scale.mul(&fact, c).div(&denom, c).mul(&s, c);
        let f = x.floor();
        // Recover the integer exactly from its decimal rendering.
        let digits_needed = (log10_k.max(0.0).ceil() as usize + 4).max(8);
        bigint_from_sig(&f.to_string_sig(digits_needed))
    };

    let lo = floor_at(&base)?;
    let hi = floor_at(&base.bumped(10))?;
    if lo != hi {
        return Err(Error::InsufficientPrecision(format!(
            "single-sum floor unstable for n = {n}: {lo} vs {hi}"
        )));
    }
    let numer = lo + BigInt::one();
    let denom = (BigInt::from(2u32)) * ((BigInt::one() << (two_n as usize)) - BigInt::one());
    let magnitude = BigRational::new(numer, denom);
    Ok(if n % 2 == 1 { magnitude } else { -magnitude })
}

/// zeta(m) = (2 pi)^m |B_m| / (2 m!) for even m <= 60, at ctx precision.
pub fn zeta_even_exact(m: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if m == 0 || m % 2 != 0 {
        return Err(Error::Domain(format!("closed form needs positive even m, got {m}")));
    }
    if m > 60 {
        return Err(Error::Range(format!("closed form restricted to m <= 60, got {m}")));
    }
    let table = bernoulli_recurrence_oracle(m)?;
    let b = table.get(m).expect("table covers m").abs();
    let work = ctx.bumped(10);
    let two_pi = const_pi(&work).mul(&BigReal::from_u64(2, &work), &work);
    let mut fact = BigReal::from_u64(2, &work);
    for j in 2..=m as u64 {
        fact = fact.mul(&BigReal::from_u64(j, &work), &work);
    }
    Ok(two_pi
        .powi(m as i64, &work)
        .mul(&BigReal::from_rational(&b, &work), &work)
        .div(&fact, ctx))
}

/// Arithmetic-geometric mean of two positive values at ctx precision.
fn agm(a0: &BigReal, b0: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let two = BigReal::from_u64(2, ctx);
    let tol = BigReal::from_u64(10, ctx).powi(-(ctx.working_digits() as i64), ctx);
    let mut a = a0.clone();
    let mut b = b0.clone();
    for _ in 0..200 {
        let am = a.add(&b, ctx).div(&two, ctx);
        let gm = a.mul(&b, ctx).sqrt(ctx)?;
        if am.sub(&gm, ctx).abs().cmp(&tol.mul(&am, ctx)) == std::cmp::Ordering::Less {
            return Ok(am);
        }
        a = am;
        b = gm;
    }
    Err(Error::InsufficientPrecision("AGM failed to converge".into()))
}

/// Lemniscate constant: 2 int_0^1 dx / sqrt(1 - x^4), evaluated by
/// tanh-sinh quadrature with the endpoint factor 1 - x carried exactly,
/// then cross-checked against pi / AGM(1, sqrt 2) to ctx digits.
pub fn hurwitz_pi(ctx: &PrecisionContext) -> Result<BigReal> {
    let v = generalized_hurwitz_pi(4, ctx)?;
    let work = ctx.bumped(5);
    let sqrt2 = BigReal::from_u64(2, &work).sqrt(&work)?;
    let reference = const_pi(&work).div(&agm(&BigReal::one(&work), &sqrt2, &work)?, &work);
    let gap = v.sub(&reference, &work).abs();
    let tol = BigReal::from_u64(10, &work).powi(-(ctx.digits() as i64 - 2), &work);
    if gap.cmp(&tol) != std::cmp::Ordering::Less {
        return Err(Error::InsufficientPrecision(format!(
            "quadrature and AGM disagree by {}",
            gap.to_f64()
        )));
    }
    Ok(v)
}

/// 2 int_0^1 dx / sqrt(1 - x^k) for k a power of two. The factorization
/// 1 - x^k = (1 - x)(1 + x + ... + x^(k-1)) keeps the integrand accurate
/// at the singular endpoint.
pub fn generalized_hurwitz_pi(k: u32, ctx: &PrecisionContext) -> Result<BigReal> {
    if k < 2 || !k.is_power_of_two() {
        return Err(Error::Domain(format!("exponent must be a power of two >= 2, got {k}")));
    }
    let work = ctx.bumped(5);
    let zero = BigReal::zero(&work);
    let one = BigReal::one(&work);
    let integral = quad::integrate(
        &zero,
        &one,
        &|x, _, bmx, c| {
            let mut geom = BigReal::one(c);
            let mut xp = BigReal::one(c);
            for _ in 1..k {
                xp = xp.mul(x, c);
                geom = geom.add(&xp, c);
            }
            bmx.mul(&geom, c).sqrt(c).expect("positive on (0,1)").recip(c)
        },
        &work,
    )?;
    Ok(integral.mul(&BigReal::from_u64(2, &work), ctx))
}

/// Hurwitz numbers H_4 .. H_{4 n_max} from the recurrence
/// (2n-3)(4n-1)(4n+1) H_{4n} =
///   3 sum_{i=1}^{n-1} (4i-1)(4n-4i-1) C(4n, 4i) H_{4i} H_{4(n-i)},
/// seeded with H_4 = 1/10. The sum starts at i = 1: the i = 0 term would
/// involve the undefined H_0.
pub fn hurwitz_numbers(n_max: u32, ctx: &PrecisionContext) -> Result<HurwitzTable> {
    if n_max < 1 {
        return Err(Error::Range("need n_max >= 1".into()));
    }
    let mut values = BTreeMap::new();
    values.insert(4u32, BigRational::new(BigInt::one(), BigInt::from(10)));
    for n in 2..=n_max as u64 {
        let mut acc = ExactRational::zero();
        for i in 1..n {
            let coef = BigInt::from(4 * i - 1) * BigInt::from(4 * (n - i) - 1) * big_binomial(4 * n, 4 * i)?;
            let h_i = values.get(&((4 * i) as u32)).expect("built in order");
            let h_ni = values.get(&((4 * (n - i)) as u32)).expect("built in order");
            acc += BigRational::from_integer(coef) * h_i * h_ni;
        }
        let lhs = BigInt::from(2 * n - 3) * BigInt::from(4 * n - 1) * BigInt::from(4 * n + 1);
        values.insert((4 * n) as u32, acc * BigRational::new(BigInt::from(3), lhs));
    }
    Ok(HurwitzTable { values, pi_lemniscate: hurwitz_pi(ctx)? })
}

/// Truncated Gaussian-integer lattice sum with its absolute tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSum {
    pub value: f64,
    /// 2 pi radius^(2-weight) / (weight - 2), a bound on the omitted
    /// absolute mass (the oscillating true tail is far smaller).
    pub tail_bound: f64,
}

/// sum over Gaussian integers 0 < |w| <= radius of Re(w^-weight). For
/// weight divisible by 4 one octant is accumulated and scaled (rotation
/// by i and conjugation leave the terms invariant); other even weights
/// cancel to zero by the same rotation and are summed directly as a
/// check. Accumulation order is fixed, so the value is reproducible.
pub fn gaussian_lattice_sum(weight: u32, radius: u32) -> Result<LatticeSum> {
    if weight < 4 || weight % 2 != 0 {
        return Err(Error::Domain(format!("weight must be even and >= 4, got {weight}")));
    }
    if radius < 10 {
        return Err(Error::Precondition(format!("radius must be >= 10, got {radius}")));
    }
    let r2 = (radius as u64) * (radius as u64);
    let term = |m: i64, n: i64| -> f64 {
        Complex64::new(m as f64, n as f64).powu(weight).finv().re
    };
    let value = if weight % 4 == 0 {
        let mut axes = 0.0f64;
        let mut diag = 0.0f64;
        let mut interior = 0.0f64;
        for m in 1..=radius as i64 {
            axes += term(m, 0);
            if 2 * (m as u64) * (m as u64) <= r2 {
                diag += term(m, m);
            }
            for n in 1..m {
                if (m as u64) * (m as u64) + (n as u64) * (n as u64) <= r2 {
                    interior += term(m, n);
                }
            }
        }
        4.0 * axes + 4.0 * diag + 8.0 * interior
    } else {
        let mut full = 0.0f64;
        for m in -(radius as i64)..=radius as i64 {
            for n in -(radius as i64)..=radius as i64 {
                if (m, n) == (0, 0) {
                    continue;
                }
                if (m * m + n * n) as u64 <= r2 {
                    full += term(m, n);
                }
            }
        }
        full
    };
    let tail_bound = 2.0 * std::f64::consts::PI * (radius as f64).powi(2 - weight as i32)
        / (weight as f64 - 2.0);
    Ok(LatticeSum { value, tail_bound })
}

/// |(2 w)^{4n} H_{4n} / (4n)! - lattice sum of weight 4n| with w the
/// lemniscate constant; both sides are computed independently, so this
/// verifies the Laurent-coefficient identity for the square lattice.
pub fn hurwitz_relation_check(n: u32, ctx: &PrecisionContext) -> Result<f64> {
    if n < 1 {
        return Err(Error::Range("need n >= 1".into()));
    }
    let work = ctx.bumped(10);
    let table = hurwitz_numbers(n, &work)?;
    let h = table.get(4 * n).expect("table covers n");
    let two_pi_lem = table.pi_lemniscate.mul(&BigReal::from_u64(2, &work), &work);
    let mut fact = BigReal::one(&work);
    for j in 2..=(4 * n) as u64 {
        fact = fact.mul(&BigReal::from_u64(j, &work), &work);
    }
    let lhs = two_pi_lem
        .powi(4 * n as i64, &work)
        .mul(&BigReal::from_rational(h, &work), &work)
        .div(&fact, &work)
        .to_f64();
    let lattice = gaussian_lattice_sum(4 * n, 400)?;
    Ok((lhs - lattice.value).abs())
}
