//! Submodular set-function minimization over exact rationals.
//!
//! Two minimizers share one contract: return the global minimum value and
//! the *maximal* minimizer, the union of all minimizing sets. For a
//! submodular function the minimizers form a lattice, so that union is
//! itself a minimizer.
//!
//! * [`minimize_exhaustive`] scans all `2^n` subsets.
//! * [`minimize_polynomial`] runs the Fujishige-Wolfe minimum-norm-point
//!   method on the base polytope in exact arithmetic and reads the maximal
//!   minimizer off the sign pattern of the min-norm base.

mod exhaustive;
mod min_norm;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use exhaustive::{minimize_exhaustive, minimizers_exhaustive, EXHAUSTIVE_LIMIT};
pub use min_norm::minimize_polynomial;

/// A set function on subsets of `0..ground_size`, given by value.
///
/// Subsets are passed as strictly increasing index slices. Evaluation must
/// be deterministic and free of side effects.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;
    fn eval(&self, subset: &[usize]) -> BigRational;
}

/// A [`SetFunction`] backed by a closure.
pub struct FnOracle<F> {
    n: usize,
    f: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&[usize]) -> BigRational + Sync,
{
    pub fn new(n: usize, f: F) -> Self {
        FnOracle { n, f }
    }
}

impl<F> SetFunction for FnOracle<F>
where
    F: Fn(&[usize]) -> BigRational + Sync,
{
    fn ground_size(&self) -> usize {
        self.n
    }

    fn eval(&self, subset: &[usize]) -> BigRational {
        (self.f)(subset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizerResult {
    pub value: BigRational,
    /// Sorted indices.
    pub minimizer: Vec<usize>,
    pub is_maximal: bool,
}

/// Which minimizer the engine calls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SfmBackend {
    Exhaustive,
    #[serde(rename = "mnp")]
    MinNormPoint,
    /// Exhaustive up to 16 elements, min-norm-point above.
    #[default]
    Auto,
}

impl SfmBackend {
    pub const AUTO_EXHAUSTIVE_MAX: usize = 16;

    pub fn minimize(self, oracle: &dyn SetFunction) -> Result<MinimizerResult> {
        match self {
            SfmBackend::Exhaustive => minimize_exhaustive(oracle),
            SfmBackend::MinNormPoint => minimize_polynomial(oracle),
            SfmBackend::Auto if oracle.ground_size() <= Self::AUTO_EXHAUSTIVE_MAX => {
                minimize_exhaustive(oracle)
            }
            SfmBackend::Auto => minimize_polynomial(oracle),
        }
    }
}

pub(crate) fn mask_to_set(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Grows `start` by single elements whose addition does not increase the
/// value, in the given order, until no element qualifies.
///
/// Starting from a minimizer, every accepted step stays inside the set of
/// minimizers, and the fixpoint does not depend on `order`.
pub fn maximality_closure(
    oracle: &dyn SetFunction,
    start: &[usize],
    order: &[usize],
) -> Vec<usize> {
    let n = oracle.ground_size();
    let mut inside = vec![false; n];
    for &i in start {
        inside[i] = true;
    }
    let current = |inside: &[bool]| -> Vec<usize> { (0..n).filter(|&i| inside[i]).collect() };
    let mut value = oracle.eval(&current(&inside));
    loop {
        let mut grew = false;
        for &e in order {
            if inside[e] {
                continue;
            }
            inside[e] = true;
            let v = oracle.eval(&current(&inside));
            if v <= value {
                value = v;
                grew = true;
            } else {
                inside[e] = false;
            }
        }
        if !grew {
            return current(&inside);
        }
    }
}

/// A pair `(X, Y)` with `f(X) + f(Y) < f(X ∪ Y) + f(X ∩ Y)`, if one is
/// found. Checks `trials` random pairs, and every pair when `n <= 6`.
pub fn find_submodularity_violation<R: Rng + ?Sized>(
    oracle: &dyn SetFunction,
    trials: usize,
    rng: &mut R,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = oracle.ground_size();
    let violates = |x: u64, y: u64| {
        let lhs = oracle.eval(&mask_to_set(x, n)) + oracle.eval(&mask_to_set(y, n));
        let rhs = oracle.eval(&mask_to_set(x | y, n)) + oracle.eval(&mask_to_set(x & y, n));
        lhs < rhs
    };
    if n <= 6 {
        let values: Vec<BigRational> = (0..1u64 << n)
            .map(|m| oracle.eval(&mask_to_set(m, n)))
            .collect();
        for x in 0..1usize << n {
            for y in x + 1..1usize << n {
                if &values[x] + &values[y] < &values[x | y] + &values[x & y] {
                    return Some((mask_to_set(x as u64, n), mask_to_set(y as u64, n)));
                }
            }
        }
    }
    let full = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    for _ in 0..trials {
        let (x, y) = (rng.gen::<u64>() & full, rng.gen::<u64>() & full);
        if violates(x, y) {
            return Some((mask_to_set(x, n), mask_to_set(y, n)));
        }
    }
    None
}

pub fn verify_submodular<R: Rng + ?Sized>(
    oracle: &dyn SetFunction,
    trials: usize,
    rng: &mut R,
) -> bool {
    find_submodularity_violation(oracle, trials, rng).is_none()
}
