//! Primes, primes in arithmetic progressions, Chebyshev-type sums and the
//! normalizing scales `ℓ(n) = log n / log log n`, `λ(n) = (log n)² / log log n`.
//!
//! All logarithms are natural.

mod factor;
mod sieve;

pub use factor::{factor, is_prime, FactoredNat};
pub use sieve::{sieve_primes, PrimeTable, Sieve, DEFAULT_SIEVE_LIMIT};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::{Error, Result};

/// `ℓ(n)` and `λ(n)` for a fixed `n`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ScaleValues {
    /// `log n`; kept instead of `n` so that arbitrarily large arguments fit.
    pub ln_n: f64,
    pub ell: f64,
    pub lambda: f64,
}

/// Scales for an integer `n ≥ 3`.
pub fn scales(n: u128) -> Result<ScaleValues> {
    if n < 3 {
        return Err(Error::invalid(format!("scales need n >= 3, got {n}")));
    }
    scales_from_ln((n as f64).ln())
}

/// Scales for a big integer `n ≥ 3`.
pub fn scales_big(n: &BigUint) -> Result<ScaleValues> {
    if *n < BigUint::from(3u32) {
        return Err(Error::invalid(format!("scales need n >= 3, got {n}")));
    }
    scales_from_ln(ln_big(n))
}

/// Scales given `log n` directly. Requires `log log n > 0`.
pub fn scales_from_ln(ln_n: f64) -> Result<ScaleValues> {
    if !(ln_n > 1.0) {
        return Err(Error::invalid(format!(
            "log log n must be positive (log n = {ln_n})"
        )));
    }
    let lnln = ln_n.ln();
    Ok(ScaleValues {
        ln_n,
        ell: ln_n / lnln,
        lambda: ln_n * ln_n / lnln,
    })
}

/// Natural logarithm of a big integer, accurate to double precision.
pub fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    // keep the top 64 bits
    let shift = bits - 64;
    let top = (n >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Euler's totient.
pub fn euler_phi(q: u64) -> u64 {
    if q == 0 {
        return 0;
    }
    factor(q as u128)
        .factors
        .iter()
        .fold(q, |acc, (&p, _)| acc / p as u64 * (p as u64 - 1))
}

fn check_progression(x: u64, q: u64, a: u64) -> Result<u64> {
    if q == 0 {
        return Err(Error::invalid("modulus q must be >= 1"));
    }
    if x < 2 {
        return Err(Error::invalid(format!("x must be >= 2, got {x}")));
    }
    if a.gcd(&q) != 1 {
        return Err(Error::invalid(format!("gcd({a}, {q}) != 1")));
    }
    Ok(a % q)
}

/// The primes `p ≤ x` with `p ≡ a (mod q)`, ascending.
pub fn primes_in_ap(table: &PrimeTable, x: u64, q: u64, a: u64) -> Result<Vec<u64>> {
    let a = check_progression(x, q, a)?;
    Ok(table
        .primes_up_to(x)?
        .iter()
        .copied()
        .filter(|p| p % q == a)
        .collect())
}

/// `ϑ(x; q, a)`: sum of `log p` over the primes in the progression, ascending.
pub fn theta(table: &PrimeTable, x: u64, q: u64, a: u64) -> Result<f64> {
    Ok(primes_in_ap(table, x, q, a)?
        .iter()
        .map(|&p| (p as f64).ln())
        .sum())
}

/// `E(x; q, a) = ϑ(x; q, a) − x/φ(q)`.
pub fn error_term(table: &PrimeTable, x: u64, q: u64, a: u64) -> Result<f64> {
    let th = theta(table, x, q, a)?;
    Ok(th - x as f64 / euler_phi(q) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        sieve_primes(100_000).unwrap()
    }

    #[test]
    fn primes_in_progressions() {
        let t = table();
        assert_eq!(primes_in_ap(&t, 20, 4, 1).unwrap(), vec![5, 13, 17]);
        assert_eq!(primes_in_ap(&t, 10, 1, 1).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_in_ap(&t, 10, 1, 0).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_in_ap(&t, 100, 7, 1).unwrap(), vec![29, 43, 71]);
        assert!(matches!(
            primes_in_ap(&t, 100, 6, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn theta_and_error_term() {
        let t = table();
        assert!((theta(&t, 10, 3, 1).unwrap() - 7f64.ln()).abs() < 1e-15);
        assert_eq!(theta(&t, 2, 5, 1).unwrap(), 0.0);
        let expected = 29f64.ln() + 43f64.ln() + 71f64.ln();
        assert!((theta(&t, 100, 7, 1).unwrap() - expected).abs() < 1e-12);

        assert_eq!(error_term(&t, 2, 5, 1).unwrap(), -0.5);
        assert!((error_term(&t, 10, 3, 1).unwrap() - (7f64.ln() - 5.0)).abs() < 1e-12);
        // regression fixture, from a direct sieve computation
        let e = error_term(&t, 100_000, 4, 1).unwrap();
        assert!((e - E_100K_4_1).abs() < 1e-9 * 50_000.0, "{e}");
    }

    // E(10^5; 4, 1), summed independently in extended precision
    const E_100K_4_1: f64 = -260.30525155520445;

    #[test]
    fn totient() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(97), 96);
        assert_eq!(euler_phi(360), 96);
    }

    #[test]
    fn scale_values() {
        let s = scales(16).unwrap();
        let l = 16f64.ln();
        assert!((s.ell - l / l.ln()).abs() < 1e-15);
        let s = scales(1_000_000).unwrap();
        assert!((s.lambda - 72.6898).abs() < 1e-4, "{}", s.lambda);
        assert!((s.lambda / s.ell - s.ln_n).abs() <= 1e-12 * s.ln_n);
        assert!(scales(2).is_err());
        let big = BigUint::from(10u32).pow(400);
        let s = scales_big(&big).unwrap();
        assert!((s.ln_n - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}
