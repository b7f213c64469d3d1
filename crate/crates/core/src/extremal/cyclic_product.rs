use num_bigint::BigUint;

use crate::abelian::{count_subgroups_index_at_most, count_subgroups_order_at_most, AbelianGroupSpec, CountLimits};
use crate::numtheory::{ln_big, scales, sieve_primes};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclicProductConfig {
    pub n: u64,
    /// Maximum number of prime configurations scored.
    pub budget: u64,
}

impl CyclicProductConfig {
    pub fn new(n: u64) -> Self {
        Self { n, budget: 1_000_000 }
    }
}

/// Best `s_r(X)` for `X = ∏_{q ∈ P−} C_{q−1} × ∏_{q ∈ P+} C_{q+1}` over
/// disjoint prime sets and `r` with `r ∏_{P−} q ∏_{P+} q ≤ n`.
#[derive(Debug, Clone, PartialEq)]
pub struct CyclicProductResult {
    pub n: u64,
    pub minus: Vec<u64>,
    pub plus: Vec<u64>,
    pub r: u64,
    pub group: AbelianGroupSpec,
    /// Subgroups of order at most `r`.
    pub s_order: BigUint,
    /// Subgroups of index at most `r`; equal to `s_order` by duality.
    pub s_index: BigUint,
    pub ratio_order: f64,
    pub ratio_index: f64,
    pub evaluated: u64,
    /// False when the configuration budget ran out before the search finished.
    pub exhaustive: bool,
}

struct State<'a> {
    primes: &'a [u64],
    n: u64,
    budget: u64,
    evaluated: u64,
    minus: Vec<u64>,
    plus: Vec<u64>,
    best: Option<(BigUint, Vec<u64>, Vec<u64>, u64)>,
    truncated: bool,
}

impl State<'_> {
    fn score(&mut self, product: u64) -> Result<()> {
        if self.evaluated >= self.budget {
            self.truncated = true;
            return Ok(());
        }
        self.evaluated += 1;
        let r = self.n / product;
        let orders = self.minus.iter().map(|q| q - 1).chain(self.plus.iter().map(|q| q + 1));
        let spec = AbelianGroupSpec::new_dropping_trivial(orders)?;
        let s = count_subgroups_order_at_most(&spec, &BigUint::from(r), CountLimits::default())?;
        let better = match &self.best {
            None => true,
            Some((b, ..)) => s > *b,
        };
        if better {
            self.best = Some((s, self.minus.clone(), self.plus.clone(), r));
        }
        Ok(())
    }

    fn visit(&mut self, from: usize, product: u64) -> Result<()> {
        self.score(product)?;
        for i in from..self.primes.len() {
            let q = self.primes[i];
            let Some(next) = product.checked_mul(q).filter(|&p| p <= self.n) else {
                break;
            };
            if self.truncated {
                return Ok(());
            }
            self.minus.push(q);
            self.visit(i + 1, next)?;
            self.minus.pop();
            self.plus.push(q);
            self.visit(i + 1, next)?;
            self.plus.pop();
        }
        Ok(())
    }
}

/// Exhaustive search, in increasing prime order, until the budget runs out.
/// The first configuration reaching the largest count wins.
pub fn cyclic_product_search(config: CyclicProductConfig) -> Result<CyclicProductResult> {
    let n = config.n;
    if n < 3 {
        return Err(Error::invalid("need n >= 3"));
    }
    let table = sieve_primes(n)?;
    let mut state = State {
        primes: table.primes(),
        n,
        budget: config.budget.max(1),
        evaluated: 0,
        minus: vec![],
        plus: vec![],
        best: None,
        truncated: false,
    };
    state.visit(0, 1)?;
    let (s_order, minus, plus, r) = state.best.expect("the empty configuration is always scored");
    let group = AbelianGroupSpec::new_dropping_trivial(minus.iter().map(|q| q - 1).chain(plus.iter().map(|q| q + 1)))?;
    let s_index = count_subgroups_index_at_most(&group, &BigUint::from(r), CountLimits::default())?;
    let lambda = scales(n as u128)?.lambda;
    Ok(CyclicProductResult {
        n,
        ratio_order: ln_big(&s_order) / lambda,
        ratio_index: ln_big(&s_index) / lambda,
        minus,
        plus,
        r,
        group,
        s_order,
        s_index,
        evaluated: state.evaluated,
        exhaustive: !state.truncated,
    })
}
