use std::collections::BTreeMap;

use serde::Serialize;

use super::group::{build_sl2, Sl2ModM};
use super::lattice::{enumerate_subgroups, EnumerationOptions, Subgroup};
use crate::numtheory::is_prime;
use crate::{Error, Result};

/// Types of maximal subgroups of `SL2(F_q)`, tried in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum MaximalClass {
    /// Stabilizer of a line, order `q(q − 1)`.
    Borel,
    /// Order `2(q − 1)` or `2(q + 1)` with a cyclic subgroup of index 2.
    DihedralNormalizer,
    /// Order at most 120.
    Exceptional,
    Unclassified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalClassCount {
    pub class: MaximalClass,
    pub order: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub q: u64,
    pub group_order: usize,
    pub total_subgroups: u64,
    pub maximal_subgroups: usize,
    pub classes: Vec<MaximalClassCount>,
    pub unclassified: usize,
}

impl ClassificationReport {
    pub fn fully_classified(&self) -> bool {
        self.unclassified == 0
    }
}

fn stabilizes_a_line(g: &Sl2ModM, h: &Subgroup) -> bool {
    let q = g.m;
    let lines = (0..q).map(|t| [1, t]).chain([[0, 1]]);
    lines.into_iter().any(|v| {
        h.elements.ones().all(|i| {
            let x = g.elements[i].map(u64::from);
            let w = [(x[0] * v[0] + x[1] * v[1]) % q, (x[2] * v[0] + x[3] * v[1]) % q];
            // w is a multiple of v
            (w[0] * v[1] + (q - w[1]) * v[0]) % q == 0
        })
    })
}

fn has_cyclic_index_two(g: &Sl2ModM, h: &Subgroup) -> bool {
    h.order % 2 == 0 && h.elements.ones().any(|i| g.group.element_order(i) == h.order / 2)
}

pub fn classify(g: &Sl2ModM, h: &Subgroup) -> MaximalClass {
    let q = g.m as usize;
    if h.order == q * (q - 1) && stabilizes_a_line(g, h) {
        MaximalClass::Borel
    } else if (h.order == 2 * (q - 1) || h.order == 2 * (q + 1)) && has_cyclic_index_two(g, h) {
        MaximalClass::DihedralNormalizer
    } else if h.order <= 120 {
        MaximalClass::Exceptional
    } else {
        MaximalClass::Unclassified
    }
}

/// Finds all maximal subgroups of `SL2(F_q)` from the full lattice and sorts
/// them into the three standard types.
pub fn classify_maximal_subgroups(q: u64, cap: u64) -> Result<ClassificationReport> {
    if !is_prime(q as u128) {
        return Err(Error::invalid(format!("{q} is not prime")));
    }
    let g = build_sl2(q, cap)?;
    let lattice = enumerate_subgroups(&g.group, EnumerationOptions::default())?;
    let maximal = lattice.maximal();
    let mut tally: BTreeMap<(MaximalClass, usize), usize> = BTreeMap::new();
    for &i in &maximal {
        let h = &lattice.subgroups[i];
        *tally.entry((classify(&g, h), h.order)).or_insert(0) += 1;
    }
    let unclassified = tally
        .iter()
        .filter(|((c, _), _)| *c == MaximalClass::Unclassified)
        .map(|(_, &n)| n)
        .sum();
    Ok(ClassificationReport {
        q,
        group_order: g.order(),
        total_subgroups: lattice.total(),
        maximal_subgroups: maximal.len(),
        classes: tally
            .into_iter()
            .map(|((class, order), count)| MaximalClassCount { class, order, count })
            .collect(),
        unclassified,
    })
}
