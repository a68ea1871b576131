//! Exact scalars, dense matrices, and canonical subspaces.

mod field;
mod matrix;
mod subspace;

pub use field::{
    format_rational, is_nonpositive, is_prime, parse_rational, rational, rational_to_i64,
    FieldSpec, Scalar, DEFAULT_PRIME,
};
pub use matrix::{Matrix, RowReducer};
pub use subspace::{kernel_in_subspace, sample_vector, span_dim, Subspace};
