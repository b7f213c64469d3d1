use serde::Serialize;

use crate::abelian::{gaussian_binomial, log_gaussian_binomial};
use crate::bombieri::{find_bombieri_prime, largest_bombieri_prime_at_most, scan_interval, BombieriCertificate};
use crate::extremal::ChevalleyParams;
use crate::numtheory::{ln_big, primes_in_ap, PrimeTable};
use crate::{Error, Result};

/// Largest `rk · L` for which the Gaussian binomial is computed exactly.
const EXACT_COUNT_LIMIT: u64 = 400;

/// Subgroups of `B(P)` of index `ι = q^k [G(Z/P) : B(P)]`, `k = ⌈σ rk L⌉`,
/// where `P` is the product of the `L` primes `p ≤ x` with `p ≡ 1 (mod q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructionReport {
    pub x: u64,
    pub rho0: f64,
    pub sigma: f64,
    pub q: u64,
    /// `log q / log x` for the prime actually used.
    pub rho: f64,
    /// True when no Bombieri prime lay in the interval for `rho0` and the
    /// largest one below it was used.
    pub fallback: bool,
    pub moduli_scanned: usize,
    #[serde(rename = "L")]
    pub l: u64,
    pub log_p: f64,
    pub rank: u32,
    pub dim: u32,
    #[serde(rename = "R")]
    pub r: f64,
    pub k: u64,
    /// `log [rk L, k]_q`.
    pub log_subgroup_count: f64,
    pub exact_count: bool,
    /// `Σ_p log [G(F_p) : B(F_p)]`.
    pub log_borel_index: f64,
    /// `k log q + log [G(Z/P) : B(P)]`.
    pub log_index: f64,
    /// `log count / (log ι)² · log log ι`.
    pub ratio: f64,
    pub certificate: BombieriCertificate,
}

/// Runs the Borel lower-bound construction end to end.
pub fn lower_bound_construction(
    table: &PrimeTable,
    x: u64,
    rho0: f64,
    sigma: f64,
    params: &ChevalleyParams,
) -> Result<ConstructionReport> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::invalid(format!("sigma must lie in [0, 1], got {sigma}")));
    }
    let scan = find_bombieri_prime(table, x, rho0)?;
    let mut scanned = scan.scanned.len();
    let (certificate, fallback) = match scan.certificate {
        Some(c) => (c, false),
        None => {
            let (lower, _) = scan_interval(x, rho0);
            let (below, cert) = largest_bombieri_prime_at_most(table, x, lower.saturating_sub(1))?;
            scanned += below.len();
            let cert = cert.ok_or_else(|| {
                Error::invalid(format!(
                    "no Bombieri prime q <= {} for x = {x} ({scanned} moduli scanned)",
                    scan.upper
                ))
            })?;
            (cert, true)
        }
    };
    let q = certificate.q;
    let primes = primes_in_ap(table, x, q, 1)?;
    let l = primes.len() as u64;
    let rank = params.rank;
    let n = rank as u64 * l;
    let k = (sigma * n as f64).ceil() as u64;
    let exact_count = n <= EXACT_COUNT_LIMIT;
    let log_subgroup_count = if exact_count {
        ln_big(&gaussian_binomial(n as i64, k as i64, q)?)
    } else {
        log_gaussian_binomial(n, k, q)
    };
    let log_borel_index: f64 = primes.iter().map(|&p| params.log_borel_index(p)).sum();
    let log_index = k as f64 * (q as f64).ln() + log_borel_index;
    let ratio = log_subgroup_count / (log_index * log_index / log_index.ln());
    Ok(ConstructionReport {
        x,
        rho0,
        sigma,
        q,
        rho: (q as f64).ln() / (x as f64).ln(),
        fallback,
        moduli_scanned: scanned,
        l,
        log_p: certificate.log_p,
        rank,
        dim: params.dim,
        r: params.r_f64(),
        k,
        log_subgroup_count,
        exact_count,
        log_borel_index,
        log_index,
        ratio,
        certificate,
    })
}
