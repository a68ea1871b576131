//! Exact computation of the partition function `rho_c` of a family of
//! linear subspaces, and its two main applications: deterministic generic
//! rank of skew rank-one symbolic matrices, and planar generic rigidity.

pub mod engine;
pub mod error;
pub mod io;
pub mod linalg;
pub mod partitions;
pub mod rigidity;
pub mod sfm;
pub mod symbolic;
pub mod verify;

pub use error::{Error, Result};
