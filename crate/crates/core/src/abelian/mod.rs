//! Finite abelian groups `C_{x₁} × … × C_{x_t}`: layer types, Gaussian
//! binomials, Butler's count of subgroups of a given layer type, order- and
//! index-bounded subgroup counts, and `|End(G)|`.
//!
//! Counting never materializes group elements; [`lattice`] holds the
//! brute-force oracles that do.

pub mod lattice;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::numtheory::{factor, ln_big};
use crate::{Error, Result};

pub use lattice::{brute_force_endomorphisms, brute_force_lattice, LatticeOptions, SubgroupLatticeAb};

/// A finite abelian group given by the orders of its cyclic factors, stored
/// in descending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroupSpec {
    cyclic_orders: Vec<u64>,
}

impl AbelianGroupSpec {
    pub fn new(mut cyclic_orders: Vec<u64>) -> Result<Self> {
        if let Some(bad) = cyclic_orders.iter().find(|&&x| x < 2) {
            return Err(Error::invalid(format!("cyclic factor of order {bad} (need >= 2)")));
        }
        cyclic_orders.sort_unstable_by(|a, b| b.cmp(a));
        Ok(AbelianGroupSpec { cyclic_orders })
    }

    /// Like [`AbelianGroupSpec::new`] but drops factors of order 1.
    pub fn new_dropping_trivial(orders: impl IntoIterator<Item = u64>) -> Result<Self> {
        Self::new(orders.into_iter().filter(|&x| x != 1).collect())
    }

    pub fn trivial() -> Self {
        AbelianGroupSpec { cyclic_orders: Vec::new() }
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn order(&self) -> BigUint {
        self.cyclic_orders.iter().map(|&x| BigUint::from(x)).product()
    }

    /// Primes dividing the order, ascending.
    pub fn primes(&self) -> Vec<u64> {
        let mut ps: Vec<u64> = self
            .cyclic_orders
            .iter()
            .flat_map(|&x| factor(x as u128).factors.into_keys().map(|p| p as u64))
            .collect();
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

impl std::fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.cyclic_orders.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.cyclic_orders.iter().map(|x| format!("C{x}")).collect();
        write!(f, "{}", parts.join("x"))
    }
}

/// Layer type `λ₁ ≥ λ₂ ≥ … ≥ λ_r ≥ 1` of the Sylow `p`-subgroup: `p^{λ_i}` is
/// the order of `Ω_i / Ω_{i−1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct LayerType {
    pub p: u64,
    pub lambdas: Vec<u32>,
}

impl LayerType {
    pub fn new(p: u64, lambdas: Vec<u32>) -> Result<Self> {
        if lambdas.windows(2).any(|w| w[0] < w[1]) || lambdas.contains(&0) {
            return Err(Error::invalid(format!("layer type {lambdas:?} is not a partition")));
        }
        Ok(LayerType { p, lambdas })
    }

    /// Exponent of `p` in the group order.
    pub fn exponent(&self) -> u32 {
        self.lambdas.iter().sum()
    }
}

fn valuation(mut x: u64, p: u64) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

/// Layer type at `p`, as the conjugate of the partition of `p`-adic valuations.
pub fn layer_type(spec: &AbelianGroupSpec, p: u64) -> Result<LayerType> {
    let vals: Vec<u32> = spec
        .cyclic_orders
        .iter()
        .map(|&x| valuation(x, p))
        .filter(|&v| v > 0)
        .collect();
    if p < 2 || vals.is_empty() {
        return Err(Error::invalid(format!("{p} does not divide |G| for G = {spec}")));
    }
    let top = *vals.iter().max().unwrap();
    let lambdas = (1..=top)
        .map(|i| vals.iter().filter(|&&v| v >= i).count() as u32)
        .collect();
    Ok(LayerType { p, lambdas })
}

/// Layer types for every prime dividing `|G|`.
pub fn layer_types(spec: &AbelianGroupSpec) -> Vec<LayerType> {
    spec.primes()
        .into_iter()
        .map(|p| layer_type(spec, p).expect("p divides |G|"))
        .collect()
}

/// Number of `ν`-dimensional subspaces of `F_p^λ`.
///
/// Accepts any base `p ≥ 2`; `ν > λ` gives 0.
pub fn gaussian_binomial(lam: i64, nu: i64, p: u64) -> Result<BigUint> {
    if lam < 0 || nu < 0 {
        return Err(Error::invalid(format!("negative argument ({lam}, {nu})")));
    }
    if p < 2 {
        return Err(Error::invalid(format!("base must be >= 2, got {p}")));
    }
    Ok(gauss(lam as u32, nu as u32, p))
}

fn gauss(lam: u32, nu: u32, p: u64) -> BigUint {
    if nu > lam {
        return BigUint::zero();
    }
    let nu = nu.min(lam - nu);
    let base = BigUint::from(p);
    let one = BigUint::one();
    let mut acc = BigUint::one();
    // after step i the accumulator is [λ choose i+1]_p, an integer
    for i in 0..nu {
        acc *= base.pow(lam - i) - &one;
        acc /= base.pow(i + 1) - &one;
    }
    acc
}

/// `log [λ choose ν]_p` without forming the integer:
/// `ν(λ−ν) log p + Σ_i [log(1 − p^{−(λ−i)}) − log(1 − p^{−(i+1)})]`.
pub fn log_gaussian_binomial(lam: u64, nu: u64, p: u64) -> f64 {
    if nu > lam {
        return f64::NEG_INFINITY;
    }
    let nu = nu.min(lam - nu);
    let lp = (p as f64).ln();
    let tail = |k: u64| -> f64 {
        let e = -(k as f64) * lp;
        if e < -745.0 {
            0.0
        } else {
            (-e.exp()).ln_1p()
        }
    };
    let mut corr = 0.0;
    for i in 0..nu {
        corr += tail(lam - i) - tail(i + 1);
    }
    (nu * (lam - nu)) as f64 * lp + corr
}

/// Gaussian binomials `[a choose b]_p` for `a ≤ max`, memoized.
struct GaussTable {
    p: u64,
    rows: Vec<Vec<BigUint>>,
}

impl GaussTable {
    fn new(p: u64, max: u32) -> Self {
        // q-Pascal: [a, b] = [a−1, b−1] + p^b [a−1, b]
        let base = BigUint::from(p);
        let mut rows: Vec<Vec<BigUint>> = vec![vec![BigUint::one()]];
        for a in 1..=max as usize {
            let prev = &rows[a - 1];
            let mut row = vec![BigUint::one(); a + 1];
            for b in 1..a {
                row[b] = &prev[b - 1] + base.pow(b as u32) * &prev[b];
            }
            rows.push(row);
        }
        GaussTable { p, rows }
    }

    fn get(&self, a: u32, b: u32) -> BigUint {
        if b > a {
            return BigUint::zero();
        }
        match self.rows.get(a as usize) {
            Some(row) => row[b as usize].clone(),
            None => gauss(a, b, self.p),
        }
    }
}

fn butler(glam: &LayerType, nus: &[u32], table: &GaussTable) -> BigUint {
    let len = glam.lambdas.len().max(nus.len());
    let at = |v: &[u32], i: usize| v.get(i).copied().unwrap_or(0);
    let base = BigUint::from(glam.p);
    let mut acc = BigUint::one();
    for i in 0..len {
        let (l, n, n_next) = (at(&glam.lambdas, i), at(nus, i), at(nus, i + 1));
        if n > l {
            return BigUint::zero();
        }
        let e = n_next * (l - n);
        if e > 0 {
            acc *= base.pow(e);
        }
        acc *= table.get(l - n_next, n - n_next);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Butler's formula: the number of subgroups of layer type `ν` in the abelian
/// `p`-group of layer type `λ`,
/// `∏_{i≥1} p^{ν_{i+1}(λ_i−ν_i)} [λ_i − ν_{i+1} choose ν_i − ν_{i+1}]_p`.
///
/// Trailing zeros in `ν` are allowed; `ν_i > λ_i` for some `i` gives 0.
pub fn count_by_layer_type(glam: &LayerType, nus: &[u32]) -> Result<BigUint> {
    if nus.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::invalid(format!("layer type {nus:?} is increasing")));
    }
    let max = glam.lambdas.first().copied().unwrap_or(0);
    Ok(butler(glam, nus, &GaussTable::new(glam.p, max)))
}

/// Caps for layer-type enumeration.
#[derive(Debug, Clone, Copy)]
pub struct CountLimits {
    /// Maximum number of `ν`-sequences summed per prime.
    pub max_layer_types: u64,
}

impl Default for CountLimits {
    fn default() -> Self {
        CountLimits { max_layer_types: 50_000_000 }
    }
}

/// Visits every nonincreasing `ν` with `ν_i ≤ λ_i` and `Σν ≤ max_total`.
fn for_each_sub_layer_type(
    lambdas: &[u32],
    max_total: u32,
    limits: CountLimits,
    mut visit: impl FnMut(&[u32]),
) -> Result<()> {
    fn rec(
        lambdas: &[u32],
        i: usize,
        cap: u32,
        budget: u32,
        cur: &mut Vec<u32>,
        seen: &mut u64,
        limit: u64,
        visit: &mut dyn FnMut(&[u32]),
    ) -> bool {
        *seen += 1;
        if *seen > limit {
            return false;
        }
        visit(cur);
        if i == lambdas.len() {
            return true;
        }
        let top = cap.min(lambdas[i]).min(budget);
        for v in 1..=top {
            cur.push(v);
            let ok = rec(lambdas, i + 1, v, budget - v, cur, seen, limit, visit);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let mut seen = 0;
    let mut cur = Vec::new();
    if rec(
        lambdas,
        0,
        u32::MAX,
        max_total,
        &mut cur,
        &mut seen,
        limits.max_layer_types,
        &mut visit,
    ) {
        Ok(())
    } else {
        Err(Error::resource(format!(
            "more than {} layer types below {lambdas:?}",
            limits.max_layer_types
        )))
    }
}

/// Number of subgroups of each order `p^e` of the `p`-group of layer type
/// `glam`, indexed by `e`, for `e ≤ max_exponent`.
pub fn exponent_distribution(
    glam: &LayerType,
    max_exponent: u32,
    limits: CountLimits,
) -> Result<Vec<BigUint>> {
    let top = glam.exponent().min(max_exponent);
    let mut dist = vec![BigUint::zero(); top as usize + 1];
    let table = GaussTable::new(glam.p, glam.lambdas.first().copied().unwrap_or(0));
    for_each_sub_layer_type(&glam.lambdas, top, limits, |nus| {
        let e: u32 = nus.iter().sum();
        dist[e as usize] += butler(glam, nus, &table);
    })?;
    Ok(dist)
}

/// Number of subgroups of each order.
pub fn order_distribution(
    spec: &AbelianGroupSpec,
    limits: CountLimits,
) -> Result<BTreeMap<BigUint, BigUint>> {
    bounded_order_distribution(spec, None, limits)
}

fn bounded_order_distribution(
    spec: &AbelianGroupSpec,
    max_order: Option<&BigUint>,
    limits: CountLimits,
) -> Result<BTreeMap<BigUint, BigUint>> {
    let mut acc: BTreeMap<BigUint, BigUint> = BTreeMap::from([(BigUint::one(), BigUint::one())]);
    for glam in layer_types(spec) {
        let max_e = match max_order {
            Some(r) => max_exponent_below(glam.p, r),
            None => glam.exponent(),
        };
        let dist = exponent_distribution(&glam, max_e, limits)?;
        let mut next = BTreeMap::new();
        for (order, count) in &acc {
            let mut pe = BigUint::one();
            for d in &dist {
                let o = order * &pe;
                if max_order.is_some_and(|r| o > *r) {
                    break;
                }
                if !d.is_zero() {
                    *next.entry(o).or_insert_with(BigUint::zero) += count * d;
                }
                pe *= glam.p;
            }
        }
        acc = next;
    }
    Ok(acc)
}

fn max_exponent_below(p: u64, r: &BigUint) -> u32 {
    let mut e = 0;
    let mut pe = BigUint::from(p);
    while pe <= *r {
        e += 1;
        pe *= p;
    }
    e
}

/// `|Sub(G)|`, multiplicative over the Sylow subgroups.
pub fn count_all_subgroups(spec: &AbelianGroupSpec, limits: CountLimits) -> Result<BigUint> {
    let mut total = BigUint::one();
    for glam in layer_types(spec) {
        let dist = exponent_distribution(&glam, glam.exponent(), limits)?;
        total *= dist.iter().sum::<BigUint>();
    }
    Ok(total)
}

/// Number of subgroups of order at most `r`.
pub fn count_subgroups_order_at_most(
    spec: &AbelianGroupSpec,
    r: &BigUint,
    limits: CountLimits,
) -> Result<BigUint> {
    if r.is_zero() {
        return Ok(BigUint::zero());
    }
    Ok(bounded_order_distribution(spec, Some(r), limits)?
        .into_values()
        .sum())
}

/// Number of subgroups of index at most `n`.
///
/// A finite abelian group has as many subgroups of order `d` as of index `d`
/// (Pontryagin duality), so this equals the number of subgroups of order at
/// most `n`.
pub fn count_subgroups_index_at_most(
    spec: &AbelianGroupSpec,
    n: &BigUint,
    limits: CountLimits,
) -> Result<BigUint> {
    count_subgroups_order_at_most(spec, n, limits)
}

/// `|End(G)| = ∏_{j,k} gcd(x_j, x_k)` over ordered pairs, diagonal included.
pub fn endomorphism_count(spec: &AbelianGroupSpec) -> BigUint {
    let xs = &spec.cyclic_orders;
    let mut acc = BigUint::one();
    for &a in xs {
        for &b in xs {
            acc *= a.gcd(&b);
        }
    }
    acc
}

/// `∏_p ∏_i p^{λ_i²}`, which equals [`endomorphism_count`].
pub fn endomorphism_count_from_layers(spec: &AbelianGroupSpec) -> BigUint {
    layer_types(spec)
        .iter()
        .map(|lt| {
            let e: u32 = lt.lambdas.iter().map(|l| l * l).sum();
            BigUint::from(lt.p).pow(e)
        })
        .product()
}

/// `(log lower, log upper)` for `|G|^{-1} |End G|^{1/4} ≤ |Sub G| ≤ |G|² |End G|^{1/4}`.
pub fn sub_count_log_bounds(spec: &AbelianGroupSpec) -> (f64, f64) {
    let lg = ln_big(&spec.order());
    let le = ln_big(&endomorphism_count(spec)) / 4.0;
    (le - lg, le + 2.0 * lg)
}

/// All partitions of `n`, each in nonincreasing order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=cap.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// One representative of every isomorphism type of abelian group of order
/// `n`, written as a product of cyclic groups of prime-power order.
pub fn abelian_groups_of_order(n: u64) -> Vec<AbelianGroupSpec> {
    let mut groups = vec![Vec::new()];
    for (&p, &a) in &factor(n as u128).factors {
        let p = p as u64;
        let mut next = Vec::new();
        for g in &groups {
            for part in partitions(a) {
                let mut h: Vec<u64> = g.clone();
                h.extend(part.iter().map(|&k| p.pow(k)));
                next.push(h);
            }
        }
        groups = next;
    }
    groups
        .into_iter()
        .map(|orders| AbelianGroupSpec::new(orders).expect("prime powers >= 2"))
        .collect()
}

/// The abelian `p`-group with layer type `lambdas`: its cyclic factors have
/// orders `p^{μ_j}` with `μ` the conjugate partition.
pub fn p_group_with_layer_type(glam: &LayerType) -> AbelianGroupSpec {
    let top = glam.lambdas.first().copied().unwrap_or(0);
    let orders = (1..=top)
        .map(|j| glam.p.pow(glam.lambdas.iter().filter(|&&l| l >= j).count() as u32))
        .collect();
    AbelianGroupSpec::new(orders).expect("prime powers")
}
