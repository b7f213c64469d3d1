//! Bombieri primes: primes `q ≤ √x` for which the progression `1 mod q` has
//! `max_{y ≤ x} |E(y; q, 1)| ≤ x / (φ(q) (log x)²)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::numtheory::{euler_phi, is_prime, PrimeTable};
use crate::{Error, Result};

/// Verdict and audit trail for one `(x, q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BombieriCertificate {
    pub x: u64,
    pub q: u64,
    /// `max |E(y; q, 1)|` over integers `1 ≤ y ≤ x`.
    pub max_abs_error: f64,
    /// Smallest `y` attaining `max_abs_error`.
    pub argmax_y: u64,
    /// `x / (φ(q) (log x)²)`.
    pub bound: f64,
    pub is_bombieri: bool,
    /// Number of primes `p ≤ x` with `p ≡ 1 (mod q)`.
    pub set_size: u64,
    /// `ϑ(x; q, 1)`, i.e. the log of the product of those primes.
    pub log_p: f64,
}

/// One scanned modulus, kept for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanEntry {
    pub q: u64,
    pub max_abs_error: f64,
    pub bound: f64,
}

/// Outcome of scanning an interval of candidate moduli.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BombieriScan {
    pub x: u64,
    pub rho: f64,
    pub lower: u64,
    pub upper: u64,
    pub certificate: Option<BombieriCertificate>,
    /// Every modulus examined, ascending; the last one is the certified one
    /// when `certificate` is set.
    pub scanned: Vec<ScanEntry>,
}

/// Both sides of the cardinality estimate `|L − x/(φ(q) log x)| ≤ 3x/(φ(q)(log x)²)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CardinalityCheck {
    pub set_size: u64,
    pub expected: f64,
    pub deviation: f64,
    pub allowance: f64,
    pub holds: bool,
    /// `deviation / allowance`; in `[0, 1]` exactly when the estimate holds.
    pub slack: f64,
}

fn bound(x: u64, q: u64) -> f64 {
    let lx = (x as f64).ln();
    x as f64 / (euler_phi(q) as f64 * lx * lx)
}

/// Certifies whether `q` is a Bombieri prime relative to `x`.
///
/// Between consecutive primes of the progression `E(y)` decreases linearly,
/// so the extremes of `|E|` sit at each prime `p` (just after the jump), at
/// `p − 1` (just before it) and at the endpoints `y = 1` and `y = x`.
pub fn certify(table: &PrimeTable, x: u64, q: u64) -> Result<BombieriCertificate> {
    if x < 100 {
        return Err(Error::invalid(format!("x must be >= 100, got {x}")));
    }
    if !is_prime(q as u128) {
        return Err(Error::invalid(format!("q = {q} is not prime")));
    }
    if q.saturating_mul(q) > x {
        return Err(Error::invalid(format!("q = {q} exceeds sqrt(x) for x = {x}")));
    }
    let primes = table.primes_up_to(x)?;
    let phi = euler_phi(q) as f64;

    let mut best = (1.0 / phi, 1u64);
    let mut consider = |err: f64, y: u64| {
        if err.abs() > best.0 {
            best = (err.abs(), y);
        }
    };
    let mut theta = 0.0f64;
    let mut count = 0u64;
    for &p in primes.iter().filter(|&&p| p % q == 1) {
        consider(theta - (p - 1) as f64 / phi, p - 1);
        theta += (p as f64).ln();
        count += 1;
        consider(theta - p as f64 / phi, p);
    }
    consider(theta - x as f64 / phi, x);

    let b = bound(x, q);
    Ok(BombieriCertificate {
        x,
        q,
        max_abs_error: best.0,
        argmax_y: best.1,
        bound: b,
        is_bombieri: best.0 <= b,
        set_size: count,
        log_p: theta,
    })
}

/// Closed scan interval `[⌈x^ρ / log x⌉, ⌊x^ρ⌋]` for the candidate moduli.
pub fn scan_interval(x: u64, rho: f64) -> (u64, u64) {
    let top = (x as f64).powf(rho);
    let lower = (top / (x as f64).ln()).ceil().max(2.0) as u64;
    (lower, top.floor() as u64)
}

/// Scans the primes of [`scan_interval`] in ascending order and certifies the
/// first Bombieri prime. Finding none is not an error.
pub fn find_bombieri_prime(table: &PrimeTable, x: u64, rho: f64) -> Result<BombieriScan> {
    if !(rho > 0.0 && rho < 0.5) {
        return Err(Error::invalid(format!("rho must lie in (0, 1/2), got {rho}")));
    }
    let (lower, upper) = scan_interval(x, rho);
    let candidates: Vec<u64> = (lower..=upper)
        .filter(|&q| is_prime(q as u128) && q * q <= x)
        .collect();
    if candidates.is_empty() {
        return Err(Error::invalid(format!(
            "no prime in scan interval [{lower}, {upper}] for x = {x}, rho = {rho}"
        )));
    }
    let (scanned, certificate) = scan(table, x, candidates.into_iter())?;
    Ok(BombieriScan {
        x,
        rho,
        lower,
        upper,
        certificate,
        scanned,
    })
}

/// Largest Bombieri prime `q ≤ upper` (and `q ≤ √x`), scanning downwards.
pub fn largest_bombieri_prime_at_most(
    table: &PrimeTable,
    x: u64,
    upper: u64,
) -> Result<(Vec<ScanEntry>, Option<BombieriCertificate>)> {
    let root = (x as f64).sqrt() as u64 + 1;
    let top = upper.min(root);
    let candidates = (2..=top)
        .rev()
        .filter(|&q| is_prime(q as u128) && q * q <= x);
    scan(table, x, candidates)
}

/// Certifies candidates in order, a batch of thread-count size at a time,
/// and stops at the first batch containing a Bombieri prime.
fn scan(
    table: &PrimeTable,
    x: u64,
    candidates: impl Iterator<Item = u64>,
) -> Result<(Vec<ScanEntry>, Option<BombieriCertificate>)> {
    let candidates: Vec<u64> = candidates.collect();
    let batch = rayon::current_num_threads().max(1);
    let mut scanned = Vec::new();
    for chunk in candidates.chunks(batch) {
        let certs = chunk
            .par_iter()
            .map(|&q| certify(table, x, q))
            .collect::<Result<Vec<_>>>()?;
        for cert in certs {
            scanned.push(ScanEntry {
                q: cert.q,
                max_abs_error: cert.max_abs_error,
                bound: cert.bound,
            });
            if cert.is_bombieri {
                return Ok((scanned, Some(cert)));
            }
        }
    }
    Ok((scanned, None))
}

/// Evaluates the cardinality estimate for a Bombieri certificate.
pub fn check_cardinality_bound(cert: &BombieriCertificate) -> Result<CardinalityCheck> {
    if !cert.is_bombieri {
        return Err(Error::invalid(format!(
            "q = {} is not a Bombieri prime relative to x = {}",
            cert.q, cert.x
        )));
    }
    let lx = (cert.x as f64).ln();
    let phi = euler_phi(cert.q) as f64;
    let expected = cert.x as f64 / (phi * lx);
    let allowance = 3.0 * cert.x as f64 / (phi * lx * lx);
    let deviation = (cert.set_size as f64 - expected).abs();
    Ok(CardinalityCheck {
        set_size: cert.set_size,
        expected,
        deviation,
        allowance,
        holds: deviation <= allowance,
        slack: deviation / allowance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::{error_term, sieve_primes};

    #[test]
    fn certify_small_x_against_enumeration() {
        let table = sieve_primes(1000).unwrap();
        let cert = certify(&table, 100, 2).unwrap();
        // |ϑ(y; 2, 1) − y| for every integer y, summing odd primes directly
        let mut expected = 0.0f64;
        for y in 1..=100u64 {
            let th: f64 = (3..=y)
                .filter(|&p| p % 2 == 1 && (2..p).all(|d| p % d != 0))
                .map(|p| (p as f64).ln())
                .sum();
            expected = expected.max((th - y as f64).abs());
        }
        assert!((cert.max_abs_error - expected).abs() < 1e-12);
        assert_eq!(cert.set_size, 24);
        assert!(cert.max_abs_error >= error_term(&table, 100, 2, 1).unwrap().abs());
    }

    #[test]
    fn preconditions() {
        let table = sieve_primes(10_000).unwrap();
        assert!(matches!(certify(&table, 10_000, 101), Err(Error::InvalidArgument(_))));
        assert!(matches!(certify(&table, 10_000, 9), Err(Error::InvalidArgument(_))));
        assert!(matches!(certify(&table, 50, 2), Err(Error::InvalidArgument(_))));
        assert!(find_bombieri_prime(&table, 10_000, 0.5).is_err());
        assert!(find_bombieri_prime(&table, 10_000, 0.0).is_err());
    }

    #[test]
    fn interval_endpoints() {
        let (lo, hi) = scan_interval(1_000_000, 0.25);
        assert_eq!((lo, hi), (3, 31));
        let (lo, hi) = scan_interval(10_000, 0.49);
        assert_eq!(hi, (10_000f64).powf(0.49).floor() as u64);
        assert_eq!(lo, ((10_000f64).powf(0.49) / (10_000f64).ln()).ceil() as u64);
    }

    #[test]
    fn small_x_scan_is_deterministic() {
        let table = sieve_primes(10_000).unwrap();
        let a = find_bombieri_prime(&table, 10_000, 0.49).unwrap();
        let b = find_bombieri_prime(&table, 10_000, 0.49).unwrap();
        assert_eq!(a, b);
        // no Bombieri prime in [10, 91] at this x
        assert!(a.certificate.is_none());
        assert_eq!(a.scanned.first().map(|e| e.q), Some(11));
        assert!(a.scanned.iter().all(|e| e.max_abs_error > e.bound));
    }

    #[test]
    fn corrupted_set_size_falsifies_cardinality_check() {
        let table = sieve_primes(100_000).unwrap();
        let mut cert = certify(&table, 100_000, 2).unwrap();
        assert!(cert.is_bombieri);
        let ok = check_cardinality_bound(&cert).unwrap();
        assert!(ok.holds && ok.slack > 0.0 && ok.slack <= 1.0);
        cert.set_size *= 2;
        assert!(!check_cardinality_bound(&cert).unwrap().holds);

        let not_bombieri = certify(&table, 100_000, 17).unwrap();
        assert!(!not_bombieri.is_bombieri);
        assert!(check_cardinality_bound(&not_bombieri).is_err());
    }
}
