//! Prime generation and counting, the logarithmic integral, and the
//! asymptotic n-th prime estimate.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::precision::{euler_gamma, BigReal, PrecisionContext};

/// Largest sieve limit accepted before erroring out (bitset of odds,
/// ~256 MiB of working memory).
const MAX_SIEVE_LIMIT: u64 = 1 << 32;

/// Sieve segment length used above the plain-sieve threshold.
const SEGMENT_LEN: u64 = 1 << 20;

/// Immutable sorted table of all primes up to a limit.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn count(&self) -> usize {
        self.primes.len()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// The n-th prime, 1-indexed.
    pub fn nth_prime(&self, n: usize) -> Result<u64> {
        if n == 0 || n > self.primes.len() {
            return Err(Error::Range(format!(
                "nth_prime index {n} out of range 1..={}",
                self.primes.len()
            )));
        }
        Ok(self.primes[n - 1])
    }

    /// Writes the binary sieve cache: magic "ZFPT", little-endian u64
    /// limit, then a little-endian bitset with bit i set iff i is prime.
    pub fn write_cache(&self, path: &Path) -> Result<()> {
        let words = (self.limit / 64 + 1) as usize;
        let mut bits = vec![0u64; words];
        for &p in &self.primes {
            bits[(p / 64) as usize] |= 1 << (p % 64);
        }
        let mut f = std::fs::File::create(path)?;
        f.write_all(b"ZFPT")?;
        f.write_all(&self.limit.to_le_bytes())?;
        for w in bits {
            f.write_all(&w.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<Self> {
        let mut f = std::fs::File::open(path)?;
        let mut magic = [0u8; 4];
        f.read_exact(&mut magic)?;
        if &magic != b"ZFPT" {
            return Err(Error::Precondition("bad sieve cache magic".into()));
        }
        let mut buf = [0u8; 8];
        f.read_exact(&mut buf)?;
        let limit = u64::from_le_bytes(buf);
        if limit < 2 || limit > MAX_SIEVE_LIMIT {
            return Err(Error::Precondition(format!("bad cache limit {limit}")));
        }
        let words = (limit / 64 + 1) as usize;
        let mut primes = Vec::new();
        for w in 0..words {
            f.read_exact(&mut buf)?;
            let word = u64::from_le_bytes(buf);
            for b in 0..64u64 {
                if word & (1 << b) != 0 {
                    let v = w as u64 * 64 + b;
                    if v <= limit {
                        primes.push(v);
                    }
                }
            }
        }
        Ok(Self { limit, primes })
    }
}

/// All primes up to `limit` by a bit-packed sieve of Eratosthenes;
/// segmented above 10^7 to keep the working set cache-sized.
pub fn sieve(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Precondition(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::Resource(format!(
            "sieve limit {limit} exceeds budget {MAX_SIEVE_LIMIT}"
        )));
    }
    let primes = if limit <= 10_000_000 {
        plain_sieve(limit)
    } else {
        segmented_sieve(limit, SEGMENT_LEN)
    };
    Ok(PrimeTable { limit, primes })
}

/// Bitset over odd numbers; bit i represents 2i+1.
fn plain_sieve(limit: u64) -> Vec<u64> {
    let n_odd = ((limit + 1) / 2) as usize;
    let mut composite = vec![0u64; n_odd / 64 + 1];
    let is_set = |bits: &[u64], i: usize| bits[i / 64] & (1 << (i % 64)) != 0;
    let mut i = 1usize; // value 3
    while {
        let v = 2 * i as u64 + 1;
        v * v <= limit
    } {
        if !is_set(&composite, i) {
            let p = 2 * i as u64 + 1;
            let mut m = p * p;
            while m <= limit {
                composite[((m / 2) / 64) as usize] |= 1 << ((m / 2) % 64);
                m += 2 * p;
            }
        }
        i += 1;
    }
    let mut primes = vec![2];
    for j in 1..n_odd {
        if !is_set(&composite, j) {
            let v = 2 * j as u64 + 1;
            if v <= limit {
                primes.push(v);
            }
        }
    }
    primes
}

/// Segmented sieve; `seg_len` is the segment size in integers.
pub fn segmented_sieve(limit: u64, seg_len: u64) -> Vec<u64> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = plain_sieve(root.max(3));
    let mut primes = base.clone();
    primes.retain(|&p| p <= limit);
    let mut lo = root.max(3) + 1;
    let mut flags = vec![false; seg_len as usize];
    while lo <= limit {
        let hi = (lo + seg_len - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        flags[..len].fill(false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut m = lo.div_ceil(p) * p;
            if m < p * p {
                m = p * p;
            }
            while m <= hi {
                flags[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (off, &c) in flags[..len].iter().enumerate() {
            if !c {
                primes.push(lo + off as u64);
            }
        }
        lo = hi + 1;
    }
    primes
}

/// Offset logarithmic integral Li(x) = integral from 2 to x of dt/log t,
/// evaluated through the entire series li(x) = gamma + log log x
/// + sum (log x)^k / (k * k!), as Li(x) = li(x) - li(2).
pub fn li(x: f64, ctx: &PrecisionContext) -> Result<BigReal> {
    if x <= 2.0 {
        return Err(Error::Domain(format!("li requires x > 2, got {x}")));
    }
    let work = ctx.bumped(15);
    let a = li_series(x, &work)?;
    let b = li_series(2.0, &work)?;
    Ok(a.sub(&b, ctx))
}

fn li_series(x: f64, work: &PrecisionContext) -> Result<BigReal> {
    let lx = BigReal::from_f64(x, work).ln(work)?;
    let gamma = euler_gamma(work);
    let lnln = lx.ln(work)?;
    let mut sum = gamma.add(&lnln, work);
    let mut term = BigReal::one(work); // (log x)^k / k!
    let tol = 10f64.powi(-(work.working_digits() as i32));
    let mut k = 1u64;
    loop {
        term = term.mul(&lx, work).div(&BigReal::from_u64(k, work), work);
        let contrib = term.div(&BigReal::from_u64(k, work), work);
        sum = sum.add(&contrib, work);
        if k as f64 > x.ln() && contrib.abs().to_f64() < tol * (1.0 + sum.abs().to_f64()) {
            break;
        }
        k += 1;
    }
    Ok(sum)
}

/// Leading-order n-th prime estimate n (log n + log log n - 1).
pub fn pn_asymptotic(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "pn_asymptotic requires n >= 3 (log log n), got {n}"
        )));
    }
    let nf = n as f64;
    Ok(nf * (nf.ln() + nf.ln().ln() - 1.0))
}
