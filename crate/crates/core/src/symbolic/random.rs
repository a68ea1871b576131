use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{sample_vector, FieldSpec, Matrix, Scalar};

use super::instance::{evaluate_r2_matrix, evaluate_rk_matrix, R2Instance, RkInstance};

/// A matrix whose entries are polynomials in `num_vars` variables, known
/// only through evaluation.
pub trait SymbolicMatrix {
    fn field(&self) -> FieldSpec;
    fn num_rows(&self) -> usize;
    fn num_vars(&self) -> usize;
    /// The same matrix with coefficients mapped into `target`.
    fn over(&self, target: FieldSpec) -> Result<Self>
    where
        Self: Sized;
    fn evaluate(&self, point: &[Scalar]) -> Result<Matrix>;
}

impl SymbolicMatrix for R2Instance {
    fn field(&self) -> FieldSpec {
        R2Instance::field(self)
    }

    fn num_rows(&self) -> usize {
        self.rows().len()
    }

    fn num_vars(&self) -> usize {
        self.ambient_dim()
    }

    fn over(&self, target: FieldSpec) -> Result<Self> {
        R2Instance::over(self, target)
    }

    fn evaluate(&self, point: &[Scalar]) -> Result<Matrix> {
        evaluate_r2_matrix(self, point)
    }
}

/// Variables are the `k - 1` contracted vectors, concatenated.
impl SymbolicMatrix for RkInstance {
    fn field(&self) -> FieldSpec {
        RkInstance::field(self)
    }

    fn num_rows(&self) -> usize {
        self.tensors().len()
    }

    fn num_vars(&self) -> usize {
        (self.order() - 1) * self.ambient_dim()
    }

    fn over(&self, target: FieldSpec) -> Result<Self> {
        RkInstance::over(self, target)
    }

    fn evaluate(&self, point: &[Scalar]) -> Result<Matrix> {
        let xs: Vec<Vec<Scalar>> = point
            .chunks(self.ambient_dim())
            .map(<[_]>::to_vec)
            .collect();
        if point.len() != self.num_vars() {
            return Err(Error::DimensionMismatch {
                context: "evaluation point",
                expected: self.num_vars(),
                found: point.len(),
            });
        }
        evaluate_rk_matrix(self, &xs)
    }
}

/// Maximum rank over `trials` uniformly random points of `F_p`.
///
/// Each trial draws its point from its own generator seeded from `rng`, so
/// the result depends only on the state of `rng`.
pub fn randomized_rank<S, R>(sym: &S, field: FieldSpec, trials: usize, rng: &mut R) -> Result<usize>
where
    S: SymbolicMatrix,
    R: Rng + ?Sized,
{
    let FieldSpec::Prime(p) = field else {
        return Err(Error::BadPrime(0));
    };
    let rows = sym.num_rows();
    if p <= rows as u64 {
        return Err(Error::CharTooSmall {
            characteristic: p,
            rows,
        });
    }
    let local = sym.over(field)?;
    let mut best = 0;
    for _ in 0..trials {
        let mut trial_rng = ChaCha8Rng::seed_from_u64(rng.gen());
        let point = sample_vector(field, local.num_vars(), 0, &mut trial_rng);
        best = best.max(local.evaluate(&point)?.rank());
    }
    Ok(best)
}

/// [`randomized_rank`] driven by a ChaCha8 generator seeded with `seed`.
pub fn randomized_rank_seeded<S: SymbolicMatrix>(
    sym: &S,
    field: FieldSpec,
    trials: usize,
    seed: u64,
) -> Result<usize> {
    randomized_rank(sym, field, trials, &mut ChaCha8Rng::seed_from_u64(seed))
}
