//! Subspace families, their partitions, and exhaustive minimization of
//! `rho_c(F, Π) = Σ_P (d(P) - c)`.

mod bruteforce;
mod family;
mod partition;

pub use bruteforce::{hat_family, rho_bruteforce, rho_of_partition, BRUTEFORCE_LIMIT};
pub use family::SubspaceFamily;
pub use partition::{is_refinement, restrict_partition, Partition, RhoResult};
