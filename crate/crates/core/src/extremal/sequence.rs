use serde::Serialize;

use crate::{Error, Result};

const COST_EPS: f64 = 1e-9;
const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// A pair of sequences `λ, ν` with budget `Σ (R λ_i + ν_i) ≤ C` and
/// objective `A = Σ ν_i (λ_i − ν_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequencePair {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "C")]
    pub c: u64,
    pub t: u32,
    pub lambdas: Vec<u32>,
    pub nus: Vec<u32>,
}

impl SequencePair {
    pub fn objective(&self) -> i64 {
        self.lambdas
            .iter()
            .zip(&self.nus)
            .map(|(&l, &n)| n as i64 * (l as i64 - n as i64))
            .sum()
    }

    pub fn cost(&self) -> f64 {
        self.lambdas
            .iter()
            .zip(&self.nus)
            .map(|(&l, &n)| self.r * l as f64 + n as f64)
            .sum()
    }

    pub fn is_feasible(&self) -> bool {
        self.lambdas.len() == self.nus.len()
            && self.lambdas.iter().all(|&l| l <= self.t)
            && self.cost() <= self.c as f64 + COST_EPS
    }
}

fn validate(r: f64, t: u32) -> Result<()> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::invalid(format!("R must be a finite real >= 1, got {r}")));
    }
    if t == 0 {
        return Err(Error::invalid("t must be at least 1"));
    }
    Ok(())
}

/// Checks the normal form: nonincreasing sequences with `ν_r ≥ 1` and
/// `λ_i ≥ ν_i`; `λ_i = t` for `i < r`; the first `r − 1` values of `ν` take
/// only the values `ν_1` and `ν_1 − 1`; and `ν_r ∈ {ν_1, ν_1 − 1}` when
/// `λ_r = t`.
pub fn check_normal_form(pair: &SequencePair) -> std::result::Result<(), String> {
    let (lam, nu) = (&pair.lambdas, &pair.nus);
    if lam.len() != nu.len() {
        return Err("sequences differ in length".into());
    }
    let r = lam.len();
    if r == 0 {
        return Ok(());
    }
    if lam.windows(2).any(|w| w[0] < w[1]) || nu.windows(2).any(|w| w[0] < w[1]) {
        return Err("sequences are not nonincreasing".into());
    }
    if nu[r - 1] < 1 {
        return Err("last ν is zero".into());
    }
    if let Some(i) = (0..r).find(|&i| lam[i] < nu[i]) {
        return Err(format!("λ_{0} < ν_{0}", i + 1));
    }
    if let Some(i) = (0..r - 1).find(|&i| lam[i] != pair.t) {
        return Err(format!("λ_{} = {} differs from t = {}", i + 1, lam[i], pair.t));
    }
    let top = nu[0];
    let near = |v: u32| v == top || v + 1 == top;
    if let Some(i) = (0..r - 1).find(|&i| !near(nu[i])) {
        return Err(format!("ν_{} = {} is not ν_1 or ν_1 − 1", i + 1, nu[i]));
    }
    if lam[r - 1] == pair.t && !near(nu[r - 1]) {
        return Err(format!("λ_r = t but ν_r = {} is not ν_1 or ν_1 − 1", nu[r - 1]));
    }
    Ok(())
}

/// Maximizes `A` by enumerating only pairs in normal form.
///
/// Among maximizers the cheapest is returned, then the first in enumeration
/// order (shorter before longer, larger `ν_1` first).
pub fn optimize_sequence_pair(r: f64, c: u64, t: u32) -> Result<SequencePair> {
    validate(r, t)?;
    let budget = c as f64 + COST_EPS;
    let mut best: Option<(i64, f64, Vec<u32>, Vec<u32>)> = None;
    let mut consider = |lam: Vec<u32>, nu: Vec<u32>, value: i64, cost: f64| {
        let better = match &best {
            None => true,
            Some((v, c0, ..)) => value > *v || (value == *v && cost < *c0 - COST_EPS),
        };
        if better {
            best = Some((value, cost, lam, nu));
        }
    };
    consider(Vec::new(), Vec::new(), 0, 0.0);
    let term = |l: u32, n: u32| (n as i64 * (l as i64 - n as i64), r * l as f64 + n as f64);
    for len in 1usize.. {
        let prefix_len = len - 1;
        if r * (t as f64 * prefix_len as f64 + 1.0) + len as f64 > budget {
            break;
        }
        // (ν_1, b): b leading copies of ν_1, then ν_1 − 1 for the rest of the prefix
        let shapes: Vec<(u32, usize)> = if prefix_len == 0 {
            vec![(0, 0)]
        } else {
            (1..=t)
                .rev()
                .flat_map(|v| (1..=prefix_len).rev().map(move |b| (v, b)))
                .filter(|&(v, b)| b == prefix_len || v >= 2)
                .collect()
        };
        for (v, b) in shapes {
            let mut lam = vec![t; prefix_len];
            let mut nu: Vec<u32> = (0..prefix_len).map(|i| if i < b { v } else { v - 1 }).collect();
            let (pv, pc) = lam
                .iter()
                .zip(&nu)
                .fold((0i64, 0f64), |(a, c), (&l, &n)| {
                    let (tv, tc) = term(l, n);
                    (a + tv, c + tc)
                });
            if pc > budget {
                continue;
            }
            let nu_cap = nu.last().copied().unwrap_or(t);
            for last_l in (1..=t).rev() {
                for last_n in (1..=last_l.min(nu_cap)).rev() {
                    if prefix_len > 0 && last_l == t && !(last_n == v || last_n + 1 == v) {
                        continue;
                    }
                    let (tv, tc) = term(last_l, last_n);
                    if pc + tc > budget {
                        continue;
                    }
                    lam.push(last_l);
                    nu.push(last_n);
                    consider(lam.clone(), nu.clone(), pv + tv, pc + tc);
                    lam.pop();
                    nu.pop();
                }
            }
        }
    }
    let (_, _, lambdas, nus) = best.expect("the empty pair is always feasible");
    Ok(SequencePair { r, c, t, lambdas, nus })
}

/// Brute-force optimum of `A`.
///
/// Terms with `ν = 0` or `λ ≤ ν` contribute nothing or lower `A` while using
/// budget, so only multisets of terms with `1 ≤ ν < λ ≤ t` are enumerated.
pub fn exhaustive_sequence_pair(r: f64, c: u64, t: u32) -> Result<SequencePair> {
    exhaustive_with_budget(r, c, t, DEFAULT_NODE_BUDGET)
}

pub fn exhaustive_with_budget(r: f64, c: u64, t: u32, node_budget: u64) -> Result<SequencePair> {
    validate(r, t)?;
    let items: Vec<(u32, u32, i64, f64)> = (1..=t)
        .flat_map(|l| (1..l).map(move |n| (l, n)))
        .map(|(l, n)| (l, n, n as i64 * (l - n) as i64, r * l as f64 + n as f64))
        .collect();
    struct Dfs<'a> {
        items: &'a [(u32, u32, i64, f64)],
        nodes: u64,
        node_budget: u64,
        chosen: Vec<usize>,
        best: (i64, Vec<usize>),
    }
    impl Dfs<'_> {
        fn go(&mut self, from: usize, left: f64, value: i64) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.node_budget {
                return Err(Error::resource(format!(
                    "exhaustive sequence search exceeded {} nodes",
                    self.node_budget
                )));
            }
            if value > self.best.0 {
                self.best = (value, self.chosen.clone());
            }
            for i in from..self.items.len() {
                let (_, _, v, cost) = self.items[i];
                if cost <= left + COST_EPS {
                    self.chosen.push(i);
                    self.go(i, left - cost, value + v)?;
                    self.chosen.pop();
                }
            }
            Ok(())
        }
    }
    let mut dfs = Dfs {
        items: &items,
        nodes: 0,
        node_budget,
        chosen: Vec::new(),
        best: (0, Vec::new()),
    };
    dfs.go(0, c as f64, 0)?;
    let (lambdas, nus) = dfs.best.1.iter().map(|&i| (items[i].0, items[i].1)).unzip();
    Ok(SequencePair { r, c, t, lambdas, nus })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let p = optimize_sequence_pair(1.0, 0, 3).unwrap();
        assert!(p.lambdas.is_empty() && p.objective() == 0);
        let p = optimize_sequence_pair(1.0, 6, 2).unwrap();
        assert_eq!(p.objective(), 2);
        assert_eq!((p.lambdas.clone(), p.nus.clone()), (vec![2, 2], vec![1, 1]));
        assert_eq!(exhaustive_sequence_pair(1.0, 6, 2).unwrap().objective(), 2);
        assert_eq!(exhaustive_sequence_pair(1.0, 0, 5).unwrap().objective(), 0);
        assert!(optimize_sequence_pair(0.5, 3, 2).is_err());
        assert!(optimize_sequence_pair(1.0, 3, 0).is_err());
    }

    #[test]
    fn normal_form_checker() {
        let mk = |lambdas: Vec<u32>, nus: Vec<u32>| SequencePair { r: 1.0, c: 100, t: 4, lambdas, nus };
        assert!(check_normal_form(&mk(vec![4, 4, 4, 2], vec![2, 2, 1, 1])).is_ok());
        assert!(check_normal_form(&mk(vec![4, 3, 2], vec![2, 2, 1])).is_err());
        assert!(check_normal_form(&mk(vec![4, 4, 4], vec![3, 2, 1])).is_err());
        assert!(check_normal_form(&mk(vec![4, 4], vec![3, 1])).is_err());
        assert!(check_normal_form(&mk(vec![4, 2], vec![3, 1])).is_ok());
        assert!(check_normal_form(&mk(vec![4, 4], vec![2, 0])).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(exhaustive_with_budget(1.0, 40, 6, 1000).unwrap_err().is_resource());
    }
}
