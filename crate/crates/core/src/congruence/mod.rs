//! Congruence quotients `SL2(Z/mZ)`: their subgroup lattices, the census
//! `γ_n`, maximal subgroups of `SL2(F_q)` and the Borel lower-bound
//! construction.

mod census;
mod construction;
mod group;
mod lattice;
mod maximal;

pub use census::{gamma_n, GammaReport, ModulusRow};
pub use construction::{lower_bound_construction, ConstructionReport};
pub use group::{build_sl2, sl2_order, FiniteGroup, Sl2ModM, DEFAULT_ORDER_CAP};
pub use lattice::{enumerate_subgroups, naive_subgroups, EnumerationOptions, Subgroup, SubgroupLattice, NAIVE_ORDER_LIMIT};
pub use maximal::{classify, classify_maximal_subgroups, ClassificationReport, MaximalClass, MaximalClassCount};
