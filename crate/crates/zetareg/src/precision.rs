//! Arbitrary-precision reals, exact rationals and the elementary functions
//! the rest of the crate evaluates against an explicit precision context.
//!
//! Floating-point values are backed by [`astro_float::BigFloat`]; exact
//! rational arithmetic is [`num::BigRational`]. There is no ambient global
//! precision: every operation takes a [`PrecisionContext`].

use std::cell::RefCell;
use std::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num::bigint::BigUint;
use num::BigRational;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type ExactRational = BigRational;

const RM: RoundingMode = RoundingMode::ToEven;
const LOG2_10: f64 = 3.321928094887362;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision for a computation: requested decimal digits plus guard
/// digits used internally.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrecisionContext {
    digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard_digits: u32) -> Result<Self> {
        if digits < 15 {
            return Err(Error::Precondition(format!(
                "precision must be at least 15 digits, got {digits}"
            )));
        }
        if guard_digits < 5 {
            return Err(Error::Precondition(format!(
                "guard digits must be at least 5, got {guard_digits}"
            )));
        }
        Ok(Self { digits, guard_digits })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// Total working digits, digits + guard.
    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard_digits
    }

    /// Same requested digits with `extra` more guard digits.
    pub fn bumped(&self, extra: u32) -> Self {
        Self {
            digits: self.digits + extra,
            guard_digits: self.guard_digits,
        }
    }

    /// Binary working precision handed to the backend.
    pub fn bits(&self) -> usize {
        (self.working_digits() as f64 * LOG2_10).ceil() as usize + 1
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self { digits: 30, guard_digits: Self::DEFAULT_GUARD }
    }
}

/// Arbitrary-precision real number. Results of arithmetic are correct to
/// within one unit in the last kept bit of the supplied context.
#[derive(Debug, Clone)]
pub struct BigReal(BigFloat);

impl BigReal {
    pub fn from_f64(v: f64, ctx: &PrecisionContext) -> Self {
        Self(BigFloat::from_f64(v, ctx.bits()))
    }

    pub fn from_u64(v: u64, ctx: &PrecisionContext) -> Self {
        Self(BigFloat::from_u64(v, ctx.bits()))
    }

    pub fn from_i64(v: i64, ctx: &PrecisionContext) -> Self {
        Self(BigFloat::from_i64(v, ctx.bits()))
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self(BigFloat::from_u64(0, ctx.bits()))
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self(BigFloat::from_u64(1, ctx.bits()))
    }

    /// Parses a decimal representation of an arbitrary-precision integer.
    pub fn from_biguint(v: &BigUint, ctx: &PrecisionContext) -> Self {
        Self::parse(&v.to_string(), ctx)
    }

    pub fn from_rational(v: &ExactRational, ctx: &PrecisionContext) -> Self {
        let num = Self::parse(&v.numer().to_string(), ctx);
        let den = Self::parse(&v.denom().to_string(), ctx);
        num.div(&den, ctx)
    }

    pub fn parse(s: &str, ctx: &PrecisionContext) -> Self {
        Self(with_consts(|cc| BigFloat::parse(s, Radix::Dec, ctx.bits(), RM, cc)))
    }

    pub fn inner(&self) -> &BigFloat {
        &self.0
    }

    pub fn add(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        Self(self.0.add(&rhs.0, ctx.bits(), RM))
    }

    pub fn sub(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        Self(self.0.sub(&rhs.0, ctx.bits(), RM))
    }

    pub fn mul(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        Self(self.0.mul(&rhs.0, ctx.bits(), RM))
    }

    pub fn div(&self, rhs: &Self, ctx: &PrecisionContext) -> Self {
        Self(self.0.div(&rhs.0, ctx.bits(), RM))
    }

    pub fn neg(&self) -> Self {
        Self(self.0.neg())
    }

    pub fn abs(&self) -> Self {
        let mut v = self.0.clone();
        v.set_sign(astro_float::Sign::Pos);
        Self(v)
    }

    pub fn floor(&self) -> Self {
        Self(self.0.floor())
    }

    pub fn fract(&self) -> Self {
        Self(self.0.fract())
    }

    pub fn recip(&self, ctx: &PrecisionContext) -> Self {
        Self(self.0.reciprocal(ctx.bits(), RM))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn cmp(&self, rhs: &Self) -> Ordering {
        match self.0.cmp(&rhs.0) {
            Some(c) if c < 0 => Ordering::Less,
            Some(c) if c > 0 => Ordering::Greater,
            Some(_) => Ordering::Equal,
            None => panic!("NaN in BigReal comparison"),
        }
    }

    /// Integer power, exact exponent handling for negative `n` via reciprocal.
    pub fn powi(&self, n: i64, ctx: &PrecisionContext) -> Self {
        let p = ctx.bits();
        if n >= 0 {
            Self(self.0.powi(n as usize, p, RM))
        } else {
            Self(self.0.powi((-n) as usize, p + 64, RM).reciprocal(p, RM))
        }
    }

    pub fn exp(&self, ctx: &PrecisionContext) -> Self {
        Self(with_consts(|cc| self.0.exp(ctx.bits(), RM, cc)))
    }

    /// Natural logarithm. Errors on non-positive arguments.
    pub fn ln(&self, ctx: &PrecisionContext) -> Result<Self> {
        if self.is_zero() || self.is_negative() {
            return Err(Error::Domain("log of non-positive value".into()));
        }
        Ok(Self(with_consts(|cc| self.0.ln(ctx.bits(), RM, cc))))
    }

    pub fn cos(&self, ctx: &PrecisionContext) -> Self {
        Self(with_consts(|cc| self.0.cos(ctx.bits(), RM, cc)))
    }

    pub fn sin(&self, ctx: &PrecisionContext) -> Self {
        Self(with_consts(|cc| self.0.sin(ctx.bits(), RM, cc)))
    }

    pub fn sqrt(&self, ctx: &PrecisionContext) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("sqrt of negative value".into()));
        }
        Ok(Self(self.0.sqrt(ctx.bits(), RM)))
    }

    /// Real power `self^y`. Requires a positive base for non-integer `y`.
    pub fn pow(&self, y: &Self, ctx: &PrecisionContext) -> Result<Self> {
        if !self.is_zero() && self.is_negative() && !y.0.is_int() {
            return Err(Error::Domain(
                "pow with negative base and non-integer exponent".into(),
            ));
        }
        Ok(Self(with_consts(|cc| self.0.pow(&y.0, ctx.bits(), RM, cc))))
    }

    /// Nearest double, rounded toward zero. Saturates to +/-inf outside the
    /// double range.
    pub fn to_f64(&self) -> f64 {
        let Some((words, _len, sign, exp, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        if words.is_empty() {
            return 0.0;
        }
        // Value is 0.m * 2^exp with the mantissa normalized; take the top
        // 128 bits of the mantissa.
        let top = words[words.len() - 1] as f64;
        let next = if words.len() >= 2 { words[words.len() - 2] as f64 } else { 0.0 };
        let frac = top / 2f64.powi(64) + next / 2f64.powi(128);
        let mag = frac * 2f64.powi(exp);
        if sign == astro_float::Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Decimal string with `sig` significant digits, exponent notation.
    pub fn to_string_sig(&self, sig: usize) -> String {
        if self.0.is_zero() {
            return "0".into();
        }
        let full = with_consts(|cc| self.0.format(Radix::Dec, RM, cc))
            .unwrap_or_else(|_| "nan".into());
        round_decimal_string(&full, sig)
    }
}

/// Rounds a decimal string of the form `[-]d.ddd...e+xx` to `sig`
/// significant digits.
fn round_decimal_string(s: &str, sig: usize) -> String {
    let (mant, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s, 0),
    };
    let neg = mant.starts_with('-');
    let digits: Vec<u8> = mant
        .bytes()
        .filter(|b| b.is_ascii_digit())
        .map(|b| b - b'0')
        .collect();
    if digits.is_empty() {
        return s.into();
    }
    // Position of the decimal point relative to the first digit.
    let point = mant
        .find('.')
        .map(|i| mant[..i].bytes().filter(|b| b.is_ascii_digit()).count() as i64)
        .unwrap_or(digits.len() as i64);
    // Strip leading zeros, adjusting the exponent of the first digit.
    let lead = digits.iter().take_while(|&&d| d == 0).count();
    let mut ds: Vec<u8> = digits[lead..].to_vec();
    if ds.is_empty() {
        return "0".into();
    }
    let mut e10 = exp + point - 1 - lead as i64;
    if ds.len() > sig {
        let round_up = ds[sig] >= 5;
        ds.truncate(sig);
        if round_up {
            let mut i = sig;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(sig);
                    e10 += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    while ds.len() > 1 && *ds.last().unwrap() == 0 {
        ds.pop();
    }
    let body: String = ds.iter().map(|d| (d + b'0') as char).collect();
    let sign = if neg { "-" } else { "" };
    if body.len() == 1 {
        format!("{sign}{body}e{e10}")
    } else {
        format!("{sign}{}.{}e{e10}", &body[..1], &body[1..])
    }
}

/// The circle constant at full context precision.
pub fn const_pi(ctx: &PrecisionContext) -> BigReal {
    BigReal(with_consts(|cc| cc.pi(ctx.bits(), RM)))
}

/// Euler's number at full context precision.
pub fn const_e(ctx: &PrecisionContext) -> BigReal {
    BigReal(with_consts(|cc| cc.e(ctx.bits(), RM)))
}

/// Euler-Mascheroni constant by the Brent-McMillan Bessel-series scheme,
/// error O(e^{-4n}) with n scaled from the requested precision.
pub fn euler_gamma(ctx: &PrecisionContext) -> BigReal {
    let work = ctx.bumped(10);
    let bits = work.bits();
    let n = ((bits as f64) * std::f64::consts::LN_2 / 4.0).ceil() as u64 + 3;

    let one = BigReal::one(&work);
    let n_big = BigReal::from_u64(n, &work);
    let n_sq = n_big.mul(&n_big, &work);

    // u_k = (n^k / k!)^2, h_k = H_k; sums a = sum u_k h_k, b = sum u_k.
    let mut u = one.clone();
    let mut h = BigReal::zero(&work);
    let mut a = BigReal::zero(&work);
    let mut b = one.clone();
    let mut k = 1u64;
    loop {
        let k_big = BigReal::from_u64(k, &work);
        u = u.mul(&n_sq, &work).div(&k_big.mul(&k_big, &work), &work);
        h = h.add(&one.div(&k_big, &work), &work);
        a = a.add(&u.mul(&h, &work), &work);
        b = b.add(&u, &work);
        // Terms decay like (n^k/k!)^2 past k = n; stop once negligible.
        if k > 2 * n {
            let ratio = u.div(&b, &work).abs();
            if ratio.to_f64() < 1e-30 * 2f64.powi(-(bits.min(900) as i32)) || ratio.is_zero() {
                break;
            }
            // Fallback cutoff: (n^k/k!)^2 is far below 2^-bits by 6n terms.
            if k > 6 * n {
                break;
            }
        }
        k += 1;
    }
    let ln_n = n_big.ln(&work).expect("n > 0");
    a.div(&b, &work).sub(&ln_n, &work)
}

/// Exact binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("binomial with k={k} > n={n}")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    Ok(acc)
}

// Lanczos approximation, g = 607/128, 15 coefficients. Valid for Re z > 0;
// absolute accuracy well below 1e-12 on the strips exercised here.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
];

/// Principal branch of log Gamma for Re z > 0.
pub fn ln_gamma_complex(z: Complex64) -> Complex64 {
    // Shift z -> z - 1 so the series matches Gamma(z) = Gamma(1 + (z-1)).
    let zm1 = z - 1.0;
    let mut ser = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        ser += c / (zm1 + i as f64);
    }
    let tmp = zm1 + LANCZOS_G + 0.5;
    (zm1 + 0.5) * tmp.ln() - tmp + 0.5 * (2.0 * std::f64::consts::PI).ln() + ser.ln()
}

/// Real log Gamma for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_complex(Complex64::new(x, 0.0)).re)
}

/// Runs `compute` at the context's precision and again with ten extra
/// digits; errors if the two results disagree in the first `digits - 2`
/// digits. Used as a runtime guard around discontinuous post-processing.
pub fn precision_stable<F>(ctx: &PrecisionContext, compute: F) -> Result<BigReal>
where
    F: Fn(&PrecisionContext) -> Result<BigReal>,
{
    let lo = compute(ctx)?;
    let hi = compute(&ctx.bumped(10))?;
    let check = ctx.bumped(10);
    let diff = lo.sub(&hi, &check).abs();
    let scale = hi.abs();
    let tol_exp = -(ctx.digits() as i64 - 2);
    let tol = BigReal::parse(&format!("1e{tol_exp}"), &check);
    let bound = if scale.is_zero() { tol.clone() } else { scale.mul(&tol, &check) };
    if diff.cmp(&bound) == Ordering::Greater {
        return Err(Error::InsufficientPrecision(format!(
            "results at {} and {} digits disagree",
            ctx.working_digits(),
            ctx.working_digits() + 10
        )));
    }
    Ok(hi)
}
