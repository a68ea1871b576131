use num_rational::BigRational;

use crate::error::{Error, Result};

use super::{mask_to_set, MinimizerResult, SetFunction};

pub const EXHAUSTIVE_LIMIT: usize = 20;

/// The minimum value and every minimizing subset, by full enumeration.
pub fn minimizers_exhaustive(oracle: &dyn SetFunction) -> Result<(BigRational, Vec<Vec<usize>>)> {
    let n = oracle.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut best: Option<BigRational> = None;
    let mut argmins: Vec<u64> = Vec::new();
    for mask in 0..1u64 << n {
        let v = oracle.eval(&mask_to_set(mask, n));
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => argmins.push(mask),
            _ => {
                best = Some(v);
                argmins.clear();
                argmins.push(mask);
            }
        }
    }
    let sets = argmins.iter().map(|&m| mask_to_set(m, n)).collect();
    Ok((best.expect("the empty set is always evaluated"), sets))
}

/// Global minimum over all subsets, returning the union of all minimizers.
///
/// The union is re-evaluated; if it does not attain the minimum the oracle
/// was not submodular and an internal invariant error is raised.
pub fn minimize_exhaustive(oracle: &dyn SetFunction) -> Result<MinimizerResult> {
    let n = oracle.ground_size();
    if n > EXHAUSTIVE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let mut best: Option<BigRational> = None;
    let mut union = 0u64;
    for mask in 0..1u64 << n {
        let v = oracle.eval(&mask_to_set(mask, n));
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => union |= mask,
            _ => {
                best = Some(v);
                union = mask;
            }
        }
    }
    let value = best.expect("the empty set is always evaluated");
    let minimizer = mask_to_set(union, n);
    if oracle.eval(&minimizer) != value {
        return Err(Error::InternalInvariant(
            "union of minimizers is not a minimizer; oracle is not submodular".into(),
        ));
    }
    Ok(MinimizerResult {
        value,
        minimizer,
        is_maximal: true,
    })
}
