use std::cmp::Ordering;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::numtheory::{ln_big, scales_big, sieve_primes};
use crate::{Error, Result};

/// Largest `n` for which M1 is searched without bounding by default.
const M1_EXHAUSTIVE_MAX: u128 = 10_000;
/// Largest `n` for which M2 is searched without bounding by default.
const M2_EXHAUSTIVE_MAX: u128 = 2_000;
const MAX_PRIME_TABLE: u64 = 50_000_000;
const MAX_M1_TABLE: u64 = 2_000_000;
const LOG_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum GcdProblem {
    /// Distinct positive integers `a_i`, objective `∏_{i,j} gcd(a_i, a_j)`.
    M1,
    /// Distinct primes `p`, objective `∏_{p,p'} gcd(p − 1, p' − 1)`.
    M2,
}

impl std::str::FromStr for GcdProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "m1" => Ok(Self::M1),
            "m2" => Ok(Self::M2),
            other => Err(Error::invalid(format!("unknown problem {other:?}, expected m1 or m2"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Visit every feasible set instead of pruning by the upper bound.
    pub exhaustive: bool,
    pub node_budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            exhaustive: false,
            node_budget: 2_000_000_000,
        }
    }
}

/// An optimal set for M1 or M2. Products run over ordered pairs, the
/// diagonal included.
///
/// Ties are broken by fewest members, then the lexicographically smallest
/// increasing member list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdWitness {
    pub problem: GcdProblem,
    pub n: BigUint,
    pub members: Vec<u64>,
    pub product: BigUint,
    pub objective: BigUint,
    pub exhaustive: bool,
    pub nodes: u64,
}

impl GcdWitness {
    pub fn log_objective(&self) -> f64 {
        ln_big(&self.objective)
    }
}

/// Objective of `members` for `problem`, computed from scratch.
pub fn gcd_objective(problem: GcdProblem, members: &[u64]) -> BigUint {
    let shift = |a: u64| match problem {
        GcdProblem::M1 => a,
        GcdProblem::M2 => a - 1,
    };
    let mut acc = BigUint::one();
    for &a in members {
        for &b in members {
            acc *= shift(a).gcd(&shift(b));
        }
    }
    acc
}

fn to_u128(n: &BigUint) -> Result<u128> {
    n.to_u128()
        .ok_or_else(|| Error::invalid("n does not fit in 128 bits"))
}

/// Whether the default searches skip pruning at this `n`.
pub fn searches_exhaustively(problem: GcdProblem, n: &BigUint) -> bool {
    let max = match problem {
        GcdProblem::M1 => M1_EXHAUSTIVE_MAX,
        GcdProblem::M2 => M2_EXHAUSTIVE_MAX,
    };
    n.to_u128().is_some_and(|n| n <= max)
}

pub fn m2_search(n: &BigUint) -> Result<GcdWitness> {
    let exhaustive = searches_exhaustively(GcdProblem::M2, n);
    m2_search_with(n, SearchOptions { exhaustive, ..Default::default() })
}

pub fn m1_search(n: &BigUint) -> Result<GcdWitness> {
    let exhaustive = searches_exhaustively(GcdProblem::M1, n);
    m1_search_with(n, SearchOptions { exhaustive, ..Default::default() })
}

struct Best {
    objective: BigUint,
    log: f64,
    members: Vec<u64>,
}

impl Best {
    fn offer(&mut self, objective: &BigUint, log: f64, members: &[u64]) {
        let order = objective
            .cmp(&self.objective)
            .then_with(|| self.members.len().cmp(&members.len()))
            .then_with(|| self.members.as_slice().cmp(members));
        if order == Ordering::Greater {
            self.objective = objective.clone();
            self.log = log;
            self.members = members.to_vec();
        }
    }
}

/// Depth-first search over increasing member lists drawn from `candidates`.
struct Search<'a> {
    problem: GcdProblem,
    candidates: &'a [u64],
    /// Every value not in `candidates` that could still be chosen is at least this.
    beyond: u64,
    opts: SearchOptions,
    nodes: u64,
    best: Best,
    chosen: Vec<u64>,
}

impl Search<'_> {
    fn shift(&self, a: u64) -> u64 {
        match self.problem {
            GcdProblem::M1 => a,
            GcdProblem::M2 => a - 1,
        }
    }

    /// Largest number of further members, each from index `i` on, whose
    /// product stays at most `room`.
    fn max_more(&self, i: usize, room: u128) -> u32 {
        let mut prod = 1u128;
        let mut count = 0;
        for &c in &self.candidates[i..] {
            match prod.checked_mul(c as u128) {
                Some(p) if p <= room => {
                    prod = p;
                    count += 1;
                }
                _ => return count,
            }
        }
        // ran off the table: any further member is at least `beyond`
        let mut left = room / prod;
        while left >= self.beyond as u128 && self.beyond > 1 {
            left /= self.beyond as u128;
            count += 1;
        }
        count
    }

    fn visit(&mut self, from: usize, room: u128, objective: BigUint, log_obj: f64, log_shift_prod: f64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.opts.node_budget {
            return Err(Error::SearchBudget {
                budget: self.opts.node_budget,
                best: format!("{:?} objective {} with {:?}", self.problem, self.best.objective, self.best.members),
            });
        }
        if !self.chosen.is_empty() {
            self.best.offer(&objective, log_obj, &self.chosen);
        }
        for i in from..self.candidates.len() {
            let c = self.candidates[i];
            if c as u128 > room {
                return Ok(());
            }
            if !self.opts.exhaustive {
                // each new member m adds shift(m) · ∏_s gcd(shift(m), shift(s))² to the
                // objective, and the cross terms among new members are at most their product
                let j = self.max_more(i, room) as f64;
                let bound = log_obj + j * (2.0 * log_shift_prod + (room as f64).ln());
                if bound < self.best.log - LOG_MARGIN * self.best.log.abs().max(1.0) {
                    return Ok(());
                }
            }
            let sc = self.shift(c);
            let mut gain = BigUint::from(sc);
            for &s in &self.chosen {
                let g = sc.gcd(&self.shift(s));
                gain *= g * g;
            }
            let next = &objective * &gain;
            let log_next = ln_big(&next);
            self.chosen.push(c);
            let r = self.visit(i + 1, room / c as u128, next, log_next, log_shift_prod + (sc as f64).ln());
            self.chosen.pop();
            r?;
        }
        if room >= self.beyond as u128 {
            let j = self.max_more(self.candidates.len(), room) as f64;
            let bound = log_obj + j * (2.0 * log_shift_prod + (room as f64).ln());
            if self.opts.exhaustive || bound >= self.best.log - LOG_MARGIN * self.best.log.abs().max(1.0) {
                return Err(Error::resource(format!(
                    "candidate table ends below {} but members up to {room} cannot be ruled out",
                    self.beyond
                )));
            }
        }
        Ok(())
    }
}

fn run(problem: GcdProblem, n: u128, candidates: &[u64], beyond: u64, opts: SearchOptions, seeds: Vec<Vec<u64>>) -> Result<(Best, u64)> {
    let mut best = Best {
        objective: BigUint::zero(),
        log: f64::NEG_INFINITY,
        members: vec![],
    };
    for seed in seeds {
        let obj = gcd_objective(problem, &seed);
        let log = ln_big(&obj);
        best.offer(&obj, log, &seed);
    }
    let mut search = Search {
        problem,
        candidates,
        beyond,
        opts,
        nodes: 0,
        best,
        chosen: vec![],
    };
    search.visit(0, n, BigUint::one(), 0.0, 0.0)?;
    Ok((search.best, search.nodes))
}

fn finish(problem: GcdProblem, n: u128, best: Best, nodes: u64, exhaustive: bool) -> GcdWitness {
    let members = if best.members.is_empty() { vec![1] } else { best.members };
    let product = members.iter().map(|&m| BigUint::from(m)).product();
    GcdWitness {
        problem,
        n: BigUint::from(n),
        objective: gcd_objective(problem, &members),
        members,
        product,
        exhaustive,
        nodes,
    }
}

/// Exact `M2(n)`, by branch and bound unless `opts.exhaustive` is set.
pub fn m2_search_with(n: &BigUint, opts: SearchOptions) -> Result<GcdWitness> {
    let n = to_u128(n)?;
    if n < 2 {
        return Err(Error::invalid("M2 needs n >= 2"));
    }
    let limit = n.min(MAX_PRIME_TABLE as u128) as u64;
    let table = sieve_primes(limit.max(2))?;
    let primes = table.primes();
    let beyond = if (limit as u128) < n { limit + 1 } else { u64::MAX };
    let seeds = progression_seeds(primes, n);
    let (best, nodes) = run(GcdProblem::M2, n, primes, beyond, opts, seeds)?;
    Ok(finish(GcdProblem::M2, n, best, nodes, opts.exhaustive))
}

/// Greedy sets of primes `≡ 1 (mod m)` for small `m`, used as starting incumbents.
fn progression_seeds(primes: &[u64], n: u128) -> Vec<Vec<u64>> {
    (1..=60u64)
        .map(|m| {
            let mut prod = 1u128;
            let mut set = Vec::new();
            for &p in primes.iter().filter(|&&p| (p - 1) % m == 0) {
                match prod.checked_mul(p as u128) {
                    Some(q) if q <= n => {
                        prod = q;
                        set.push(p);
                    }
                    _ => break,
                }
            }
            set
        })
        .filter(|s| !s.is_empty())
        .collect()
}

/// Exact `M1(n)`, by branch and bound unless `opts.exhaustive` is set.
pub fn m1_search_with(n: &BigUint, opts: SearchOptions) -> Result<GcdWitness> {
    let n = to_u128(n)?;
    if n < 1 {
        return Err(Error::invalid("M1 needs n >= 1"));
    }
    // 1 never raises the objective, so candidates start at 2
    let limit = n.min(MAX_M1_TABLE as u128) as u64;
    let candidates: Vec<u64> = (2..=limit).collect();
    let beyond = if (limit as u128) < n { limit + 1 } else { u64::MAX };
    let seeds = if n >= 2 { vec![vec![limit]] } else { vec![] };
    let (best, nodes) = run(GcdProblem::M1, n, &candidates, beyond, opts, seeds)?;
    Ok(finish(GcdProblem::M1, n, best, nodes, opts.exhaustive))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub n: BigUint,
    pub witness: GcdWitness,
    pub log_m2: f64,
    pub lambda: f64,
    pub ratio: f64,
}

/// `log M2(n) / λ(n)` for each `n`.
pub fn m2_trend(ns: &[BigUint]) -> Result<Vec<TrendRow>> {
    ns.iter()
        .map(|n| {
            let witness = m2_search(n)?;
            let lambda = scales_big(n)?.lambda;
            let log_m2 = witness.log_objective();
            Ok(TrendRow {
                n: n.clone(),
                log_m2,
                lambda,
                ratio: log_m2 / lambda,
                witness,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn m2_fixtures() {
        let w = m2_search(&big(2)).unwrap();
        assert_eq!((w.members.clone(), w.objective.clone()), (vec![2], big(1)));
        let w = m2_search(&big(15)).unwrap();
        assert_eq!((w.members.clone(), w.objective.clone()), (vec![3, 5], big(32)));
        let w = m2_search(&big(6)).unwrap();
        assert_eq!((w.members.clone(), w.objective.clone()), (vec![5], big(4)));
        assert!(m2_search(&big(1)).is_err());
    }

    #[test]
    fn m1_fixtures() {
        let w = m1_search(&big(1)).unwrap();
        assert_eq!((w.members.clone(), w.objective.clone()), (vec![1], big(1)));
        let w = m1_search(&big(6)).unwrap();
        assert_eq!((w.members.clone(), w.objective.clone()), (vec![6], big(6)));
    }

    #[test]
    fn objective_from_scratch() {
        assert_eq!(gcd_objective(GcdProblem::M2, &[3, 5]), big(32));
        assert_eq!(gcd_objective(GcdProblem::M1, &[2, 4]), big(2 * 2 * 2 * 4));
    }

    #[test]
    fn bounded_matches_exhaustive_small() {
        for n in 2..300u64 {
            let a = m2_search_with(&big(n), SearchOptions { exhaustive: true, ..Default::default() }).unwrap();
            let b = m2_search_with(&big(n), SearchOptions::default()).unwrap();
            assert_eq!(a, GcdWitness { exhaustive: true, nodes: a.nodes, ..b.clone() }, "n = {n}");
            let a = m1_search_with(&big(n), SearchOptions { exhaustive: true, ..Default::default() }).unwrap();
            let b = m1_search_with(&big(n), SearchOptions::default()).unwrap();
            assert_eq!(a.objective, b.objective, "n = {n}");
            assert_eq!(a.members, b.members, "n = {n}");
        }
    }

    #[test]
    fn budget_error() {
        let opts = SearchOptions { exhaustive: true, node_budget: 10 };
        assert!(m2_search_with(&big(10_000), opts).unwrap_err().is_resource());
    }
}
