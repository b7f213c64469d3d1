use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::Ratio;
use proptest::prelude::*;
use subgrowth::extremal::*;
use subgrowth::numtheory::{is_prime, scales};

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

#[test]
fn gamma_closed_form_and_ratio_maximizer() {
    let s2 = 2f64.sqrt();
    let g = gamma(1.0).unwrap();
    assert!((g - 0.0428932).abs() < 1e-6);
    let opt = maximize_ratio(1.0).unwrap();
    assert!((opt.sigma - (s2 - 1.0)).abs() < 1e-6, "{opt:?}");
    assert!((opt.rho - (s2 - 1.0)).abs() < 1e-6, "{opt:?}");
    assert!((opt.value - g).abs() < 1e-9, "{opt:?}");
    for r in [1.5, 2.0, 3.0, 6.0] {
        let opt = maximize_ratio(r).unwrap();
        assert!((opt.value - gamma(r).unwrap()).abs() < 1e-9, "R = {r}");
    }
}

proptest! {
    #[test]
    fn gamma_is_below_the_trivial_bound(r in 1.0f64..1e4) {
        let g = gamma(r).unwrap();
        prop_assert!(g > 0.0 && g < 1.0 / (16.0 * r * r));
    }

    #[test]
    fn integer_inequality_on_bounded_multiplicities(
        d in 1u32..=4,
        values in prop::collection::vec(1u64..40, 1..=20),
    ) {
        // clip multiplicities to d
        let mut seen = BTreeMap::new();
        let xs: Vec<u64> = values
            .into_iter()
            .filter(|&x| {
                let c = seen.entry(x).or_insert(0u32);
                *c += 1;
                *c <= d
            })
            .collect();
        prop_assert!(check_product_lower_bound(&xs, d).unwrap());
    }
}

#[test]
fn integer_inequality_extremes() {
    // the tightest multisets take each of 1..=k exactly d times
    for d in 1..=4u32 {
        for k in 1..=12u64 {
            let xs: Vec<u64> = (1..=k).flat_map(|x| std::iter::repeat(x).take(d as usize)).collect();
            assert!(check_product_lower_bound(&xs, d).unwrap(), "d = {d}, k = {k}");
        }
    }
    assert!(check_product_lower_bound(&[1, 1, 1], 2).is_err());
}

/// Unbounded knapsack over items `1 ≤ ν < λ ≤ t`, with costs doubled so that
/// `R ∈ {1, 1.5, 2}` gives integer weights.
fn knapsack(r: f64, c: u64, t: u32) -> i64 {
    let twice_r = (2.0 * r).round() as u64;
    let cap = 2 * c as usize;
    let mut best = vec![0i64; cap + 1];
    for budget in 1..=cap {
        for lam in 2..=t as u64 {
            for nu in 1..lam {
                let w = (twice_r * lam + 2 * nu) as usize;
                if w <= budget {
                    let v = best[budget - w] + (nu * (lam - nu)) as i64;
                    best[budget] = best[budget].max(v);
                }
            }
        }
    }
    best[cap]
}

#[test]
fn structured_optimizer_matches_oracles() {
    for r in [1.0, 1.5, 2.0] {
        for c in 0..=30 {
            for t in 1..=6 {
                let fast = optimize_sequence_pair(r, c, t).unwrap();
                assert!(fast.is_feasible());
                check_normal_form(&fast).unwrap_or_else(|e| panic!("R={r} C={c} t={t}: {e}"));
                let slow = exhaustive_sequence_pair(r, c, t).unwrap();
                assert_eq!(fast.objective(), slow.objective(), "R={r} C={c} t={t}");
                assert_eq!(fast.objective(), knapsack(r, c, t), "R={r} C={c} t={t}");
            }
        }
    }
}

#[test]
fn structured_optimizer_rejects_bad_input() {
    assert!(optimize_sequence_pair(0.5, 10, 3).is_err());
    assert!(optimize_sequence_pair(1.0, 10, 0).is_err());
    assert!(optimize_sequence_pair(f64::NAN, 10, 3).is_err());
}

/// Every set of distinct candidates whose product is at most `limit`, paired
/// with that product, found by plain recursion.
fn sets_below(candidates: &[u64], limit: u64) -> Vec<(u64, Vec<u64>)> {
    fn rec(cands: &[u64], from: usize, prod: u64, limit: u64, cur: &mut Vec<u64>, out: &mut Vec<(u64, Vec<u64>)>) {
        out.push((prod, cur.clone()));
        for i in from..cands.len() {
            let next = prod * cands[i];
            if next > limit {
                break;
            }
            cur.push(cands[i]);
            rec(cands, i + 1, next, limit, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(candidates, 0, 1, limit, &mut Vec::new(), &mut out);
    out
}

/// Best objective for each `n ≤ limit`.
fn oracle_table(problem: GcdProblem, candidates: &[u64], limit: u64) -> Vec<BigUint> {
    let mut by_product = vec![BigUint::from(0u32); limit as usize + 1];
    for (prod, set) in sets_below(candidates, limit) {
        let v = gcd_objective(problem, &set);
        if v > by_product[prod as usize] {
            by_product[prod as usize] = v;
        }
    }
    let mut running = BigUint::from(0u32);
    by_product
        .into_iter()
        .map(|v| {
            running = running.clone().max(v);
            running.clone()
        })
        .collect()
}

#[test]
fn m2_matches_subset_enumeration() {
    const N: u64 = 2000;
    let primes: Vec<u64> = (2..=N).filter(|&p| is_prime(p as u128)).collect();
    let oracle = oracle_table(GcdProblem::M2, &primes, N);
    let bounded = SearchOptions { exhaustive: false, ..Default::default() };
    let full = SearchOptions { exhaustive: true, ..Default::default() };
    for n in 2..=N {
        let fast = m2_search_with(&big(n), bounded).unwrap();
        assert_eq!(fast.objective, oracle[n as usize], "n = {n}");
        assert_eq!(fast.objective, gcd_objective(GcdProblem::M2, &fast.members));
        assert!(fast.product <= big(n));
        let slow = m2_search_with(&big(n), full).unwrap();
        assert_eq!(fast.members, slow.members, "n = {n}");
    }
    let w = m2_search(&big(15)).unwrap();
    assert_eq!((w.members, w.objective), (vec![3, 5], big(32)));
}

#[test]
fn m1_matches_subset_enumeration() {
    const N: u64 = 100;
    let candidates: Vec<u64> = (2..=N).collect();
    let oracle = oracle_table(GcdProblem::M1, &candidates, N);
    for n in 2..=N {
        let w = m1_search(&big(n)).unwrap();
        assert_eq!(w.objective, oracle[n as usize], "n = {n}");
        assert!(w.exhaustive);
        assert_eq!(w.objective, gcd_objective(GcdProblem::M1, &w.members));
    }
}

#[test]
fn m2_is_dominated_by_m1_and_monotone() {
    let mut previous = big(0);
    for n in 2..=300u64 {
        let m2 = m2_search(&big(n)).unwrap();
        // {p − 1} is admissible for M1 at the same bound
        let m1 = m1_search(&big(n)).unwrap();
        assert!(m2.objective <= m1.objective, "n = {n}");
        assert!(m2.objective >= previous, "n = {n}");
        previous = m2.objective;
    }
}

#[test]
fn trend_rows_are_consistent() {
    let ns: Vec<BigUint> = [100u64, 1000, 10_000, 100_000].into_iter().map(big).collect();
    let rows = m2_trend(&ns).unwrap();
    for pair in rows.windows(2) {
        assert!(pair[1].witness.objective >= pair[0].witness.objective);
    }
    for row in &rows {
        assert!(row.ratio > 0.0);
        assert!((row.lambda - scales(row.n.clone().try_into().unwrap()).unwrap().lambda).abs() < 1e-9);
    }
    assert_eq!(rows[0].witness.members, m2_search(&big(100)).unwrap().members);
}

#[test]
fn cyclic_product_search_fixture() {
    let res = cyclic_product_search(CyclicProductConfig::new(30)).unwrap();
    assert!(res.exhaustive);
    assert_eq!(res.s_order, big(6));
    assert_eq!(res.s_index, res.s_order);
    assert_eq!(res.plus, vec![2, 5]);
    assert!(res.minus.is_empty());
    assert_eq!(res.r, 3);
    assert!((res.ratio_order - 0.1896).abs() < 1e-3);
}

#[test]
fn product_group_slack_decreases_within_parity() {
    let rows: Vec<ProductGroupRow> = (2..=12).map(|t| product_group_ratio(t).unwrap()).collect();
    for row in &rows {
        assert!(row.ratio > 1.0 / 16.0, "t = {}", row.t);
    }
    for t in 0..rows.len() - 2 {
        assert!(rows[t + 2].ratio < rows[t].ratio, "t = {}", rows[t].t);
    }
}

#[test]
fn chevalley_table() {
    use ChevalleyFamily::*;
    // (family, rank, dimension of the group)
    let dims = |f: ChevalleyFamily, l: u32| match f {
        A => l * (l + 2),
        B | C => l * (2 * l + 1),
        D => l * (2 * l - 1),
        G2 => 14,
        F4 => 52,
        E6 => 78,
        E7 => 133,
        E8 => 248,
    };
    let mut cases = vec![(G2, 2), (F4, 4), (E6, 6), (E7, 7), (E8, 8)];
    for l in 1..=10 {
        cases.push((A, l));
        if l >= 2 {
            cases.push((B, l));
            cases.push((C, l));
        }
        if l >= 3 {
            cases.push((D, l));
        }
    }
    for (f, l) in cases {
        let params = chevalley_r(f, l).unwrap();
        assert_eq!(params.dim, dims(f, l), "{f:?}{l}");
        assert_eq!(params.r(), Ratio::new(dims(f, l) - l, 2 * l), "{f:?}{l}");
    }
    let r = |f, l| chevalley_r(f, l).unwrap().r();
    assert_eq!(r(A, 1), Ratio::from_integer(1));
    assert_eq!(r(A, 4), Ratio::new(5, 2));
    assert_eq!(r(B, 5), Ratio::from_integer(5));
    assert_eq!(r(C, 3), Ratio::from_integer(3));
    assert_eq!(r(D, 4), Ratio::from_integer(3));
    assert_eq!(r(G2, 2), Ratio::from_integer(3));
    assert_eq!(r(F4, 4), Ratio::from_integer(6));
    assert_eq!(r(E6, 6), Ratio::from_integer(6));
    assert_eq!(r(E7, 7), Ratio::from_integer(9));
    assert_eq!(r(E8, 8), Ratio::from_integer(15));
    assert!(chevalley_r(D, 2).is_err());
    assert!(chevalley_r(E8, 7).is_err());
    assert_eq!(chevalley_from_letter("e", 7).unwrap().family, E7);
}

#[test]
fn uniform_exponent_optimum() {
    for d in 2..=50u32 {
        let argmax = uniform_exponent_argmax(d).unwrap();
        // compare against cross-multiplied integer values
        let value = |nu: u32| ((nu * (d - nu)) as u64, (2 * d - nu) as u64);
        for nu in 0..=d {
            let (a, b) = value(nu);
            let (c, e) = value(argmax[0]);
            assert!(a * e <= c * b);
        }
        assert!(argmax.contains(&rounded_uniform_optimum(d)), "d = {d}: {argmax:?}");
        // the real maximum d(3 − 2√2) sits at ν = d(2 − √2)
        let best = uniform_exponent(d, argmax[0]).unwrap();
        let real = d as f64 * (3.0 - 2.0 * 2f64.sqrt());
        let exact = *best.numer() as f64 / *best.denom() as f64;
        assert!(exact <= real + 1e-12 && real - exact < 0.1, "d = {d}");
    }
    assert_eq!(uniform_exponent_argmax(1).unwrap(), vec![0, 1]);
    assert_eq!(uniform_exponent_argmax(6).unwrap(), vec![3, 4]);
    assert_eq!(uniform_exponent_argmax(35).unwrap(), vec![20, 21]);
    let s2 = 2f64.sqrt();
    assert!((uniform_growth_exponent(10) - ((3.0 - 2.0 * s2) * 100.0 - 2.0 * (2.0 - s2))).abs() < 1e-12);
}
