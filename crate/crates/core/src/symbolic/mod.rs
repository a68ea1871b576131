//! Symbolic matrices with skew rank-one rows.
//!
//! An `R_2` row is `(v uᵀ - u vᵀ) x` for a pair of vectors `(u, v)`; an
//! `R_k` row contracts the antisymmetrization of a rank-one `k`-tensor
//! against `k - 1` variable vectors. The generic rank of either matrix is a
//! value of `rho`, so it can be computed exactly without randomness.

mod instance;
mod intersect;
mod random;

pub use instance::{
    evaluate_r2_matrix, evaluate_rk_matrix, r2_family, r2_rank, rk_family, rk_rank,
    split_to_planes, FamilyBuild, PitRank, R2Instance, RkInstance,
};
pub use intersect::{intersect_with_codim_k, intersect_with_hyperplane, IntersectionBasis};
pub use random::{randomized_rank, randomized_rank_seeded, SymbolicMatrix};
