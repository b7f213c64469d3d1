//! Extremal problems: the constant `γ(R)`, the continuous ratio it
//! maximizes, the Chevalley table of `R` values, the sequence-pair optimizer,
//! gcd-product searches, and exponent formulas for `SL_d(Z_p)`.

mod gcd;
mod cyclic_product;
mod sequence;

pub use gcd::{gcd_objective, m1_search, m1_search_with, m2_search, m2_search_with, searches_exhaustively, m2_trend, GcdProblem, GcdWitness, SearchOptions, TrendRow};
pub use cyclic_product::{cyclic_product_search, CyclicProductConfig, CyclicProductResult};
pub use sequence::{check_normal_form, exhaustive_sequence_pair, optimize_sequence_pair, SequencePair};

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use crate::abelian::{count_all_subgroups, AbelianGroupSpec, CountLimits};
use crate::numtheory::{ln_big, scales_from_ln};
use crate::{Error, Result};

/// `γ(R) = (√(R(R+1)) − R)² / (4R²)`.
pub fn gamma(r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("R must be positive, got {r}")));
    }
    let s = optimal_point(r);
    Ok(s * s / (4.0 * r * r))
}

/// `√(R(R+1)) − R`, written as `R / (√(R(R+1)) + R)` to avoid cancellation.
fn optimal_point(r: f64) -> f64 {
    r / ((r * (r + 1.0)).sqrt() + r)
}

/// `σ(1−σ)ρ(1−ρ) / (σρ + R)²`.
pub fn ratio_objective(sigma: f64, rho: f64, r: f64) -> f64 {
    sigma * (1.0 - sigma) * rho * (1.0 - rho) / (sigma * rho + r).powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioOptimum {
    pub sigma: f64,
    pub rho: f64,
    pub value: f64,
}

const GRID: usize = 200;
const REFINE_ROUNDS: usize = 60;
const ARG_TOL: f64 = 1e-10;

/// Maximizes [`ratio_objective`] over `(0,1)²` numerically: a 200×200 grid,
/// then alternating golden-section searches along each coordinate.
pub fn maximize_ratio(r: f64) -> Result<RatioOptimum> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("R must be positive, got {r}")));
    }
    let at = |i: usize| (i as f64 + 0.5) / GRID as f64;
    let (mut sigma, mut rho, mut best) = (at(0), at(0), f64::MIN);
    for i in 0..GRID {
        for j in 0..GRID {
            let v = ratio_objective(at(i), at(j), r);
            if v > best {
                (sigma, rho, best) = (at(i), at(j), v);
            }
        }
    }
    let half = 1.0 / GRID as f64;
    for _ in 0..REFINE_ROUNDS {
        let (s0, r0) = (sigma, rho);
        sigma = golden_max(|s| ratio_objective(s, rho, r), (sigma - half).max(0.0), (sigma + half).min(1.0));
        rho = golden_max(|p| ratio_objective(sigma, p, r), (rho - half).max(0.0), (rho + half).min(1.0));
        if (sigma - s0).abs() < ARG_TOL * 1e-2 && (rho - r0).abs() < ARG_TOL * 1e-2 {
            break;
        }
    }
    Ok(RatioOptimum {
        sigma,
        rho,
        value: ratio_objective(sigma, rho, r),
    })
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-14 {
        if fc > fd {
            b = d;
            (d, fd) = (c, fc);
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            (c, fc) = (d, fd);
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

/// Simple Chevalley types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChevalleyFamily {
    A,
    B,
    C,
    D,
    G2,
    F4,
    E6,
    E7,
    E8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChevalleyParams {
    pub family: ChevalleyFamily,
    pub rank: u32,
    pub dim: u32,
    /// Number of positive roots.
    pub kappa: u32,
    /// Degrees of the basic invariants of the Weyl group.
    pub degrees: Vec<u32>,
    /// `R = (dim − rank) / (2 rank) = κ / rank`, reduced.
    pub r_num: u32,
    pub r_den: u32,
}

impl ChevalleyParams {
    pub fn r(&self) -> Ratio<u32> {
        Ratio::new(self.r_num, self.r_den)
    }

    pub fn r_f64(&self) -> f64 {
        self.r_num as f64 / self.r_den as f64
    }

    /// `[G(F_p) : B(F_p)] = ∏_i (p^{d_i} − 1)/(p − 1)`.
    pub fn borel_index(&self, p: u64) -> BigUint {
        let base = BigUint::from(p);
        let one = BigUint::one();
        self.degrees
            .iter()
            .map(|&d| (base.pow(d) - &one) / (&base - &one))
            .product()
    }

    /// `log [G(F_p) : B(F_p)]` in floating point.
    pub fn log_borel_index(&self, p: u64) -> f64 {
        let lp = (p as f64).ln();
        self.degrees
            .iter()
            .map(|&d| {
                // log((p^d − 1)/(p − 1))
                d as f64 * lp + (-(-(d as f64) * lp).exp()).ln_1p() - lp - (-1.0 / p as f64).ln_1p()
            })
            .sum()
    }
}

/// Parameters of the Chevalley group of type `family` and rank `rank`.
pub fn chevalley_r(family: ChevalleyFamily, rank: u32) -> Result<ChevalleyParams> {
    use ChevalleyFamily::*;
    let fixed = |want: u32| -> Result<()> {
        if rank == want {
            Ok(())
        } else {
            Err(Error::invalid(format!("{family:?} has rank {want}, got {rank}")))
        }
    };
    let degrees: Vec<u32> = match family {
        A if rank >= 1 => (2..=rank + 1).collect(),
        B | C if rank >= 2 => (1..=rank).map(|i| 2 * i).collect(),
        D if rank >= 3 => (1..rank).map(|i| 2 * i).chain([rank]).collect(),
        A | B | C | D => {
            return Err(Error::invalid(format!("{family:?}_{rank} is not a valid type")));
        }
        G2 => fixed(2).map(|_| vec![2, 6])?,
        F4 => fixed(4).map(|_| vec![2, 6, 8, 12])?,
        E6 => fixed(6).map(|_| vec![2, 5, 6, 8, 9, 12])?,
        E7 => fixed(7).map(|_| vec![2, 6, 8, 10, 12, 14, 18])?,
        E8 => fixed(8).map(|_| vec![2, 8, 12, 14, 18, 20, 24, 30])?,
    };
    let kappa: u32 = degrees.iter().map(|d| d - 1).sum();
    let dim = rank + 2 * kappa;
    let r = Ratio::new(dim - rank, 2 * rank);
    debug_assert_eq!(r, Ratio::new(kappa, rank));
    Ok(ChevalleyParams {
        family,
        rank,
        dim,
        kappa,
        degrees,
        r_num: *r.numer(),
        r_den: *r.denom(),
    })
}

impl std::str::FromStr for ChevalleyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use ChevalleyFamily::*;
        Ok(match s.to_ascii_uppercase().as_str() {
            "A" => A,
            "B" => B,
            "C" => C,
            "D" => D,
            "G" | "G2" => G2,
            "F" | "F4" => F4,
            "E6" => E6,
            "E7" => E7,
            "E8" => E8,
            other => return Err(Error::invalid(format!("unknown Chevalley family {other:?}"))),
        })
    }
}

/// Resolves a family letter plus rank, so that `("E", 8)` means `E8`.
pub fn chevalley_from_letter(letter: &str, rank: u32) -> Result<ChevalleyParams> {
    let family = match letter.to_ascii_uppercase().as_str() {
        "E" => format!("E{rank}").parse()?,
        "G" | "F" => format!("{}{rank}", letter.to_ascii_uppercase()).parse()?,
        other => other.parse()?,
    };
    chevalley_r(family, rank)
}

/// `c = (3 − 2√2) d² − 2(2 − √2)`.
pub fn uniform_growth_exponent(d: u32) -> f64 {
    let s2 = std::f64::consts::SQRT_2;
    (3.0 - 2.0 * s2) * (d * d) as f64 - 2.0 * (2.0 - s2)
}

/// `ν(d − ν) / (2d − ν)`, exactly.
pub fn uniform_exponent(d: u32, nu: u32) -> Result<Ratio<i64>> {
    if d == 0 || nu > d {
        return Err(Error::invalid(format!("need d >= 1 and 0 <= nu <= d, got d = {d}, nu = {nu}")));
    }
    let (d, nu) = (d as i64, nu as i64);
    Ok(Ratio::new(nu * (d - nu), 2 * d - nu))
}

/// All integers `ν ∈ [0, d]` maximizing [`uniform_exponent`].
pub fn uniform_exponent_argmax(d: u32) -> Result<Vec<u32>> {
    let values = (0..=d)
        .map(|nu| uniform_exponent(d, nu))
        .collect::<Result<Vec<_>>>()?;
    let best = *values.iter().max().expect("nonempty");
    Ok((0..=d).filter(|&nu| values[nu as usize] == best).collect())
}

/// `d(2 − √2)` rounded to the nearest integer.
pub fn rounded_uniform_optimum(d: u32) -> u32 {
    (d as f64 * (2.0 - std::f64::consts::SQRT_2)).round() as u32
}

/// Exact check of `∏ x_i ≥ (t/(e d))^t`, with `e` replaced by the upper
/// bound `2.7182818285`.
///
/// Fails when some value occurs more than `d` times.
pub fn check_product_lower_bound(xs: &[u64], d: u32) -> Result<bool> {
    if d == 0 || xs.contains(&0) {
        return Err(Error::invalid("need d >= 1 and positive x_i"));
    }
    let mut sorted = xs.to_vec();
    sorted.sort_unstable();
    for run in sorted.chunk_by(|a, b| a == b) {
        if run.len() > d as usize {
            return Err(Error::invalid(format!(
                "{} occurs {} times, more than d = {d}",
                run[0],
                run.len()
            )));
        }
    }
    let t = xs.len() as u32;
    let product: BigUint = xs.iter().map(|&x| BigUint::from(x)).product();
    // ∏x · (e_num · d)^t ≥ t^t · e_den^t
    let (e_num, e_den) = (BigUint::from(27_182_818_285u64), BigUint::from(10_000_000_000u64));
    let lhs = product * (e_num * d).pow(t);
    let rhs = BigUint::from(t).pow(t) * e_den.pow(t);
    Ok(lhs >= rhs)
}

/// `log|Sub G| / (ℓ(|G|) log|G|)` for `G = ∏_{i=1}^t C_{t·i}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProductGroupRow {
    pub t: u32,
    pub log_order: f64,
    pub log_subgroups: f64,
    pub ratio: f64,
}

pub fn product_group_ratio(t: u32) -> Result<ProductGroupRow> {
    if t < 2 {
        return Err(Error::invalid("need t >= 2"));
    }
    let spec = AbelianGroupSpec::new((1..=t as u64).map(|i| t as u64 * i).collect())?;
    let subs = count_all_subgroups(&spec, CountLimits::default())?;
    let log_order = ln_big(&spec.order());
    let s = scales_from_ln(log_order)?;
    let log_subgroups = ln_big(&subs);
    Ok(ProductGroupRow {
        t,
        log_order,
        log_subgroups,
        ratio: log_subgroups / s.lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        let g1 = gamma(1.0).unwrap();
        assert!((g1 - (3.0 - 2.0 * 2f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!((g1 - (2f64.sqrt() - 1.0).powi(2) / 4.0).abs() < 1e-15);
        assert_eq!(format!("{g1:.7}"), "0.0428932");
        assert!(gamma(15.0).unwrap() < 1.0 / (16.0 * 225.0));
        assert!(gamma(0.0).is_err());
        assert!(gamma(-1.0).is_err());
    }

    #[test]
    fn gamma_asymptotics() {
        for r in [0.1, 0.5, 1.0, 2.0, 3.0, 15.0, 100.0, 1e3, 1e6] {
            assert!(gamma(r).unwrap() < 1.0 / (16.0 * r * r));
        }
        for r in [1e3, 1e6] {
            assert!((16.0 * r * r * gamma(r).unwrap() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn ratio_maximizer() {
        let opt = maximize_ratio(1.0).unwrap();
        assert!((opt.sigma - (2f64.sqrt() - 1.0)).abs() < 1e-6);
        assert!((opt.rho - (2f64.sqrt() - 1.0)).abs() < 1e-6);
        assert!((opt.value - (3.0 - 2.0 * 2f64.sqrt()) / 4.0).abs() < 1e-9);
        let opt3 = maximize_ratio(3.0).unwrap();
        assert!((opt3.sigma - (12f64.sqrt() - 3.0)).abs() < 1e-6);
        for r in [0.5, 1.0, 1.5, 2.0, 3.0, 6.0, 9.0, 15.0] {
            let opt = maximize_ratio(r).unwrap();
            assert!((opt.value - gamma(r).unwrap()).abs() < 1e-9, "R = {r}");
        }
    }

    #[test]
    fn chevalley_invariants() {
        use ChevalleyFamily::*;
        assert_eq!(chevalley_r(A, 1).unwrap().r(), Ratio::from_integer(1));
        assert_eq!(chevalley_r(E8, 8).unwrap().r(), Ratio::from_integer(15));
        assert_eq!(chevalley_r(B, 4).unwrap().r(), Ratio::from_integer(4));
        let sl2 = chevalley_r(A, 1).unwrap();
        assert_eq!((sl2.dim, sl2.kappa), (3, 1));
        assert_eq!(sl2.borel_index(7), BigUint::from(8u32));
        assert!((sl2.log_borel_index(7) - 8f64.ln()).abs() < 1e-12);
        let e8 = chevalley_r(E8, 8).unwrap();
        assert_eq!(e8.dim, 248);
        assert!((e8.log_borel_index(3) - ln_big(&e8.borel_index(3))).abs() < 1e-9);
        for (f, l, dim) in [(A, 3, 15), (B, 3, 21), (C, 3, 21), (D, 4, 28), (G2, 2, 14), (F4, 4, 52), (E6, 6, 78), (E7, 7, 133)] {
            assert_eq!(chevalley_r(f, l).unwrap().dim, dim, "{f:?}{l}");
        }
        assert!(chevalley_r(D, 2).is_err());
        assert!(chevalley_r(E8, 7).is_err());
        assert!(chevalley_r(A, 0).is_err());
        assert_eq!(chevalley_from_letter("E", 6).unwrap().family, E6);
        assert_eq!(chevalley_from_letter("a", 2).unwrap().family, A);
    }

    #[test]
    fn exponent_formulas() {
        assert_eq!(uniform_exponent(7, 0).unwrap(), Ratio::from_integer(0));
        let expected = 9.0 * (3.0 - 2.0 * 2f64.sqrt()) - 2.0 * (2.0 - 2f64.sqrt());
        assert!((uniform_growth_exponent(3) - expected).abs() < 1e-12);
        assert!((uniform_growth_exponent(3) - 0.373).abs() < 1e-3);
        assert_eq!(uniform_exponent_argmax(6).unwrap(), vec![3, 4]);
        assert_eq!(uniform_exponent_argmax(3).unwrap(), vec![2]);
        assert!(uniform_exponent(0, 0).is_err());
    }

    #[test]
    fn product_lower_bound_cases() {
        let xs: Vec<u64> = (1..=20).collect();
        assert!(check_product_lower_bound(&xs, 1).unwrap());
        assert!(check_product_lower_bound(&[1], 1).unwrap());
        assert!(check_product_lower_bound(&[2, 2, 2], 2).is_err());
        assert!(check_product_lower_bound(&[1, 1, 2, 2, 3, 3], 2).unwrap());
    }
}
