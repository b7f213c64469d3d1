//! Brute-force oracles that work on the explicit element set.

use std::collections::BTreeMap;

use num_bigint::BigUint;

use super::AbelianGroupSpec;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LatticeOptions {
    /// Largest group order accepted.
    pub max_order: u64,
    /// Keep the subgroup list, not just the counts.
    pub keep_subgroups: bool,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions {
            max_order: 10_000,
            keep_subgroups: false,
        }
    }
}

/// A subgroup given by its canonical generating sequence: `g₁` is the least
/// nonidentity element, and each `g_{k+1}` is the least element outside
/// `⟨g₁, …, g_k⟩`. Elements are coordinate vectors in the cyclic factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupRecord {
    pub generators: Vec<Vec<u64>>,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupLatticeAb {
    pub group: AbelianGroupSpec,
    /// Empty unless requested through [`LatticeOptions::keep_subgroups`].
    pub subgroups: Vec<SubgroupRecord>,
    pub counts_by_order: BTreeMap<u64, u64>,
}

impl SubgroupLatticeAb {
    pub fn total(&self) -> u64 {
        self.counts_by_order.values().sum()
    }
}

/// Elements are integers `0..n` in mixed radix over the cyclic orders.
struct Elements {
    radix: Vec<u64>,
    n: usize,
    table: Option<Vec<u32>>,
}

impl Elements {
    fn new(spec: &AbelianGroupSpec, max_order: u64) -> Result<Self> {
        let order = spec.order();
        if order > BigUint::from(max_order) {
            return Err(Error::resource(format!(
                "|G| = {order} exceeds the brute-force limit {max_order}"
            )));
        }
        let radix = spec.cyclic_orders().to_vec();
        let n: usize = radix.iter().product::<u64>() as usize;
        let mut e = Elements { radix, n, table: None };
        if n <= 1024 {
            let mut t = vec![0u32; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = e.add_slow(a as u32, b as u32);
                }
            }
            e.table = Some(t);
        }
        Ok(e)
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut stride) = (0u64, 1u64);
        for &x in &self.radix {
            out += ((a % x + b % x) % x) * stride;
            a /= x;
            b /= x;
            stride *= x;
        }
        out as u32
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        match &self.table {
            Some(t) => t[a as usize * self.n + b as usize],
            None => self.add_slow(a, b),
        }
    }

    fn coords(&self, mut a: u64) -> Vec<u64> {
        self.radix
            .iter()
            .map(|&x| {
                let d = a % x;
                a /= x;
                d
            })
            .collect()
    }
}

struct Search<'a> {
    el: &'a Elements,
    opts: LatticeOptions,
    counts: BTreeMap<u64, u64>,
    subgroups: Vec<SubgroupRecord>,
    gens: Vec<u32>,
    /// Per-depth scratch: least element of the coset of `H` containing each element.
    coset_min: Vec<Vec<u32>>,
}

impl Search<'_> {
    /// Visits `H` (elements listed in `elems`, membership in `bits`) and every
    /// subgroup whose canonical generating sequence extends that of `H`.
    fn visit(&mut self, elems: &[u32], bits: &[u64], last: u32) {
        *self.counts.entry(elems.len() as u64).or_insert(0) += 1;
        if self.opts.keep_subgroups {
            self.subgroups.push(SubgroupRecord {
                generators: self.gens.iter().map(|&g| self.el.coords(g as u64)).collect(),
                order: elems.len() as u64,
            });
        }
        let n = self.el.n;
        if elems.len() == n {
            return;
        }
        let depth = self.gens.len();
        if self.coset_min.len() <= depth {
            self.coset_min.push(vec![0; n]);
        }
        let mut cmin = std::mem::take(&mut self.coset_min[depth]);
        cmin.fill(u32::MAX);
        for x in 0..n as u32 {
            if cmin[x as usize] == u32::MAX {
                for &h in elems {
                    cmin[self.el.add(x, h) as usize] = x;
                }
            }
        }
        let start = if elems.len() == 1 { 1 } else { last + 1 };
        // g must be the least element of H + <g> outside H, so it is the least
        // element of its own coset and every coset kg + H (k ≥ 2) lies above it
        'candidates: for g in start..n as u32 {
            if cmin[g as usize] != g {
                continue;
            }
            let mut c = self.el.add(g, g);
            while cmin[c as usize] != 0 {
                if cmin[c as usize] < g {
                    continue 'candidates;
                }
                c = self.el.add(c, g);
            }
            let mut grown = elems.to_vec();
            let mut grown_bits = bits.to_vec();
            let mut c = g;
            while cmin[c as usize] != 0 {
                for &h in elems {
                    let e = self.el.add(c, h);
                    grown.push(e);
                    set(&mut grown_bits, e);
                }
                c = self.el.add(c, g);
            }
            self.gens.push(g);
            self.visit(&grown, &grown_bits, g);
            self.gens.pop();
        }
        self.coset_min[depth] = cmin;
    }
}

fn set(bits: &mut [u64], i: u32) {
    bits[(i >> 6) as usize] |= 1 << (i & 63);
}

/// Every subgroup of `G`, found by adjoining one element at a time to the
/// explicit element set.
///
/// Each subgroup is reached exactly once, along its canonical generating
/// sequence, so no deduplication table is needed.
pub fn brute_force_lattice(spec: &AbelianGroupSpec, opts: LatticeOptions) -> Result<SubgroupLatticeAb> {
    let el = Elements::new(spec, opts.max_order)?;
    let mut bits = vec![0u64; el.n.div_ceil(64)];
    set(&mut bits, 0);
    let mut search = Search {
        el: &el,
        opts,
        counts: BTreeMap::new(),
        subgroups: Vec::new(),
        gens: Vec::new(),
        coset_min: Vec::new(),
    };
    search.visit(&[0], &bits, 0);
    Ok(SubgroupLatticeAb {
        group: spec.clone(),
        subgroups: search.subgroups,
        counts_by_order: search.counts,
    })
}

/// `|End(G)|` by enumeration: an endomorphism is any choice of images `y_i`
/// of the standard generators with `x_i · y_i = 0`.
pub fn brute_force_endomorphisms(spec: &AbelianGroupSpec, max_order: u64) -> Result<BigUint> {
    let el = Elements::new(spec, max_order)?;
    let mut total = BigUint::from(1u32);
    for &x in spec.cyclic_orders() {
        let killed = (0..el.n as u64)
            .filter(|&y| el.coords(y).iter().zip(&el.radix).all(|(d, m)| (d * x) % m == 0))
            .count();
        total *= killed;
    }
    Ok(total)
}
