use rayon::prelude::*;
use serde::Serialize;

use super::group::{build_sl2, sl2_order};
use super::lattice::{enumerate_subgroups, EnumerationOptions};
use crate::numtheory::factor;
use crate::{Error, Result};

/// Per-modulus contribution to `γ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulusRow {
    pub m: u64,
    pub group_order: u64,
    /// Subgroups of `SL2(Z/m)` of index at most `n`.
    pub s_n: u64,
    /// Those among them of level exactly `m`: not containing the kernel of
    /// reduction to `Z/(m/p)` for any prime `p | m`.
    pub level_exact: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaReport {
    pub n: u64,
    /// `γ_n = Σ_{m ≤ n} s_n(SL2(Z/m))`.
    pub gamma: u64,
    /// Subgroups of index at most `n` counted once, at their exact level,
    /// over levels `m ≤ n`; a level-truncated stand-in for `C_n`.
    pub c_n_proxy: u64,
    pub rows: Vec<ModulusRow>,
}

fn modulus_row(m: u64, n: u64, cap: u64) -> Result<ModulusRow> {
    let g = build_sl2(m, cap)?;
    let kernels = factor(m as u128)
        .primes()
        .map(|p| g.reduction_kernel(m / p as u64))
        .collect::<Result<Vec<_>>>()?;
    let lattice = enumerate_subgroups(
        &g.group,
        EnumerationOptions {
            index_cap: Some(n),
            keep_sets: true,
            ..Default::default()
        },
    )?;
    let level_exact = lattice
        .subgroups
        .iter()
        .filter(|h| kernels.iter().all(|k| !k.is_subset(&h.elements)))
        .count() as u64;
    Ok(ModulusRow {
        m,
        group_order: g.order() as u64,
        s_n: lattice.total(),
        level_exact,
    })
}

/// `γ_n(SL2(Z))`, one lattice per modulus `m ≤ n`.
///
/// Moduli whose group exceeds `cap` make the whole call fail with
/// [`Error::Partial`] listing the moduli that were within reach.
pub fn gamma_n(n: u64, cap: u64) -> Result<GammaReport> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let within: Vec<u64> = (1..=n)
        .filter(|&m| sl2_order(m).is_ok_and(|o| o <= cap.into()))
        .collect();
    if within.len() < n as usize {
        let first = (1..=n).find(|m| !within.contains(m)).expect("some modulus is over the cap");
        return Err(Error::Partial {
            computed: within,
            reason: format!("|SL2(Z/{first})| exceeds the cap {cap}"),
        });
    }
    let rows = (1..=n)
        .into_par_iter()
        .map(|m| modulus_row(m, n, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(GammaReport {
        n,
        gamma: rows.iter().map(|r| r.s_n).sum(),
        c_n_proxy: rows.iter().map(|r| r.level_exact).sum(),
        rows,
    })
}
