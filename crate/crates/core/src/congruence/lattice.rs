use std::collections::{BTreeMap, HashSet};

use fixedbitset::FixedBitSet;

use super::group::FiniteGroup;
use crate::{Error, Result};

/// Largest group order accepted by [`naive_subgroups`].
pub const NAIVE_ORDER_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationOptions {
    /// Keep only subgroups of index at most this in the output list and in
    /// `counts_by_order`. Enumeration itself is always complete.
    pub index_cap: Option<u64>,
    /// Keep element sets of the reported subgroups.
    pub keep_sets: bool,
    /// Abort once this many subgroups have been generated.
    pub max_subgroups: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            index_cap: None,
            keep_sets: true,
            max_subgroups: 5_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: FixedBitSet,
    /// Generators in increasing order; each is the least element outside the
    /// subgroup generated by the earlier ones.
    pub generators: Vec<usize>,
    pub order: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupLattice {
    pub group_order: usize,
    pub index_cap: Option<u64>,
    /// Reported subgroups in generation order (empty unless sets are kept).
    pub subgroups: Vec<Subgroup>,
    pub counts_by_order: BTreeMap<usize, u64>,
    /// Subgroups generated, including those above the index cap.
    pub generated: u64,
}

impl SubgroupLattice {
    /// Number of reported subgroups.
    pub fn total(&self) -> u64 {
        self.counts_by_order.values().sum()
    }

    pub fn counts_by_index(&self) -> BTreeMap<usize, u64> {
        self.counts_by_order
            .iter()
            .map(|(&ord, &c)| (self.group_order / ord, c))
            .collect()
    }

    pub fn count_index_at_most(&self, n: u64) -> u64 {
        self.counts_by_order
            .iter()
            .filter(|(&ord, _)| (self.group_order / ord) as u64 <= n)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Indices into `subgroups` of the maximal proper subgroups.
    pub fn maximal(&self) -> Vec<usize> {
        let proper: Vec<usize> = (0..self.subgroups.len())
            .filter(|&i| self.subgroups[i].order < self.group_order)
            .collect();
        proper
            .iter()
            .copied()
            .filter(|&i| {
                let h = &self.subgroups[i];
                !proper.iter().any(|&j| {
                    let k = &self.subgroups[j];
                    k.order > h.order && k.order % h.order == 0 && h.elements.is_subset(&k.elements)
                })
            })
            .collect()
    }
}

struct Node {
    set: FixedBitSet,
    elems: Vec<usize>,
    gens: Vec<usize>,
}

struct Dfs<'a> {
    g: &'a FiniteGroup,
    opts: EnumerationOptions,
    out: SubgroupLattice,
}

impl Dfs<'_> {
    fn record(&mut self, node: &Node) -> Result<()> {
        self.out.generated += 1;
        if self.out.generated > self.opts.max_subgroups {
            return Err(Error::resource(format!(
                "more than {} subgroups in a group of order {}",
                self.opts.max_subgroups, self.out.group_order
            )));
        }
        let order = node.elems.len();
        let index = (self.out.group_order / order) as u64;
        if self.opts.index_cap.is_none_or(|cap| index <= cap) {
            *self.out.counts_by_order.entry(order).or_insert(0) += 1;
            if self.opts.keep_sets {
                self.out.subgroups.push(Subgroup {
                    elements: node.set.clone(),
                    generators: node.gens.clone(),
                    order,
                });
            }
        }
        Ok(())
    }

    /// `<H, g>` if `g` is its least element outside `H`, else `None`.
    /// Builds the result as a union of right cosets of `H` and stops at the
    /// first element below `g`.
    fn extend(&self, h: &Node, g: usize) -> Option<Node> {
        let mut set = h.set.clone();
        let mut elems = h.elems.clone();
        let mut gens = h.gens.clone();
        gens.push(g);
        let add_coset = |rep: usize, set: &mut FixedBitSet, elems: &mut Vec<usize>| -> bool {
            for i in 0..h.elems.len() {
                let x = self.g.mul(h.elems[i], rep);
                if x < g {
                    return false;
                }
                set.insert(x);
                elems.push(x);
            }
            true
        };
        if !add_coset(g, &mut set, &mut elems) {
            return None;
        }
        let mut reps = vec![g];
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            i += 1;
            for &s in &gens {
                let y = self.g.mul(r, s);
                if !set.contains(y) {
                    if !add_coset(y, &mut set, &mut elems) {
                        return None;
                    }
                    reps.push(y);
                }
            }
        }
        Some(Node { set, elems, gens })
    }

    fn visit(&mut self, h: &Node) -> Result<()> {
        self.record(h)?;
        let start = h.gens.last().map_or(0, |&l| l + 1);
        for g in start..self.g.order() {
            if h.set.contains(g) {
                continue;
            }
            if let Some(k) = self.extend(h, g) {
                self.visit(&k)?;
            }
        }
        Ok(())
    }
}

/// Every subgroup of `g`, each generated exactly once by depth-first
/// canonical augmentation: a subgroup is reached only through its greedy
/// generating sequence, so no deduplication is needed.
pub fn enumerate_subgroups(g: &FiniteGroup, opts: EnumerationOptions) -> Result<SubgroupLattice> {
    let mut dfs = Dfs {
        g,
        opts,
        out: SubgroupLattice {
            group_order: g.order(),
            index_cap: opts.index_cap,
            subgroups: Vec::new(),
            counts_by_order: BTreeMap::new(),
            generated: 0,
        },
    };
    let root = Node {
        set: g.singleton_identity(),
        elems: vec![g.identity()],
        gens: Vec::new(),
    };
    dfs.visit(&root)?;
    Ok(dfs.out)
}

/// Independent oracle for small groups: every subgroup is a join of cyclic
/// subgroups, so join each subgroup found with each cyclic subgroup until
/// nothing new appears.
pub fn naive_subgroups(g: &FiniteGroup) -> Result<HashSet<FixedBitSet>> {
    let n = g.order();
    if n > NAIVE_ORDER_LIMIT {
        return Err(Error::resource(format!(
            "naive enumeration is limited to order {NAIVE_ORDER_LIMIT}, got {n}"
        )));
    }
    let mut cyclic: Vec<(FixedBitSet, usize)> = Vec::new();
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    for a in 0..n {
        let s = g.closure(&[a]);
        if seen.insert(s.clone()) {
            cyclic.push((s, a));
        }
    }
    let mut found: HashSet<FixedBitSet> = HashSet::new();
    let mut list: Vec<(FixedBitSet, Vec<usize>)> = vec![(g.singleton_identity(), Vec::new())];
    found.insert(g.singleton_identity());
    let mut i = 0;
    while i < list.len() {
        for (c, a) in &cyclic {
            if c.is_subset(&list[i].0) {
                continue;
            }
            let mut gens = list[i].1.clone();
            gens.push(*a);
            let s = g.closure(&gens);
            if found.insert(s.clone()) {
                list.push((s, gens));
            }
        }
        i += 1;
    }
    Ok(found)
}
