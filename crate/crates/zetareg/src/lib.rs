//! Numerical toolkit around the Riemann zeta function: dipole-style
//! regularization of divergent series, truncated Euler products over
//! primes, analytic continuation of an oscillatory prime integral,
//! prime extraction from high-precision zeta values, and exact
//! Bernoulli and Hurwitz numbers, all with independent cross-checks.

pub mod continuation;
pub mod dipole;
pub mod error;
pub mod euler;
pub mod precision;
pub mod prime_formula;
pub mod primes;
pub mod quad;
pub mod special;
pub mod suite;
