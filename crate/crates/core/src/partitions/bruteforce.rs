use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::RowReducer;

use super::family::SubspaceFamily;
use super::partition::{Partition, RhoResult};

/// Largest family `rho_bruteforce` accepts; Bell(12) is about 4.2 million.
pub const BRUTEFORCE_LIMIT: usize = 12;

/// `sum over blocks P of (d(P) - c)`.
pub fn rho_of_partition(
    family: &SubspaceFamily,
    pi: &Partition,
    c: &BigRational,
) -> Result<BigRational> {
    if !pi.covers(family.len()) {
        return Err(Error::InvalidPartition(format!(
            "does not cover the {} family members exactly",
            family.len()
        )));
    }
    let total: usize = pi.blocks().iter().map(|b| family.span_dim_of(b)).sum();
    Ok(BigRational::from_integer(total.into())
        - c * BigRational::from_integer(pi.num_blocks().into()))
}

/// Minimizes over every set partition of `family`.
///
/// Returns the minimum of `rho_c(F, Π)` and, among the minimizers, the one
/// with the fewest blocks. That partition is required to be unique; a tie
/// is reported as an internal invariant violation.
pub fn rho_bruteforce(family: &SubspaceFamily, c: &BigRational) -> Result<RhoResult> {
    let n = family.len();
    if n > BRUTEFORCE_LIMIT {
        return Err(Error::TooLarge {
            size: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    if n == 0 {
        return Ok(RhoResult {
            value: BigRational::zero(),
            partition: Partition::whole(0),
        });
    }
    let dims = subset_dims(family);

    // For every block count k, the least total dimension and how many
    // partitions reach it. The objective is total - k*c, so the integer
    // minimum per k is all that matters.
    let mut best: Vec<Option<(usize, usize, Vec<u32>)>> = vec![None; n + 1];
    let mut blocks: Vec<u32> = Vec::with_capacity(n);
    enumerate(0, n, &dims, &mut blocks, &mut best);

    let mut winner: Option<(BigRational, usize)> = None;
    for (k, entry) in best.iter().enumerate() {
        let Some((total, _, _)) = entry else { continue };
        let value =
            BigRational::from_integer((*total).into()) - c * BigRational::from_integer(k.into());
        match &winner {
            Some((v, _)) if &value >= v => {}
            _ => winner = Some((value, k)),
        }
    }
    let (value, k) = winner.expect("at least one partition");
    let (_, count, masks) = best[k].clone().expect("winning block count");
    if count != 1 {
        return Err(Error::InternalInvariant(format!(
            "{count} distinct minimal partitions with {k} blocks"
        )));
    }
    let partition = Partition::new(masks.iter().map(|&m| mask_indices(m)).collect())?;
    Ok(RhoResult { value, partition })
}

fn enumerate(
    i: usize,
    n: usize,
    dims: &[usize],
    blocks: &mut Vec<u32>,
    best: &mut [Option<(usize, usize, Vec<u32>)>],
) {
    if i == n {
        let total: usize = blocks.iter().map(|&m| dims[m as usize]).sum();
        let slot = &mut best[blocks.len()];
        match slot {
            Some((t, count, _)) if *t == total => *count += 1,
            Some((t, _, _)) if *t < total => {}
            _ => *slot = Some((total, 1, blocks.clone())),
        }
        return;
    }
    let bit = 1u32 << i;
    for b in 0..blocks.len() {
        blocks[b] |= bit;
        enumerate(i + 1, n, dims, blocks, best);
        blocks[b] &= !bit;
    }
    blocks.push(bit);
    enumerate(i + 1, n, dims, blocks, best);
    blocks.pop();
}

/// `d` of every subfamily, indexed by bitmask.
pub(crate) fn subset_dims(family: &SubspaceFamily) -> Vec<usize> {
    let n = family.len();
    let mut dims = vec![0usize; 1 << n];
    for mask in 1usize..(1 << n) {
        let mut r = RowReducer::new(family.field(), family.ambient_dim());
        for (i, m) in family.members().iter().enumerate() {
            if mask >> i & 1 == 1 {
                r.insert_matrix(m.basis());
            }
        }
        dims[mask] = r.rank();
    }
    dims
}

pub(crate) fn mask_indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask >> i & 1 == 1).collect()
}

/// The family of block spans `{sp P : P in pi_star}`, one member per block
/// in block order.
///
/// Two blocks of a minimal partition never share a span of dimension at
/// least `c`, since merging them would not cost more. Such a coincidence
/// is an internal invariant violation. Spans of dimension below `c` can
/// repeat: a member that small is always a singleton block.
pub fn hat_family(
    family: &SubspaceFamily,
    pi_star: &Partition,
    c: &BigRational,
) -> Result<SubspaceFamily> {
    if !pi_star.covers(family.len()) {
        return Err(Error::InvalidPartition(
            "hat partition does not cover the family".into(),
        ));
    }
    let spans: Vec<_> = pi_star.blocks().iter().map(|b| family.span_of(b)).collect();
    for i in 0..spans.len() {
        for j in i + 1..spans.len() {
            if spans[i] == spans[j] && BigRational::from_integer(spans[i].dim().into()) >= *c {
                return Err(Error::InternalInvariant(format!(
                    "blocks {i} and {j} of the minimal partition span the same subspace"
                )));
            }
        }
    }
    SubspaceFamily::new(family.field(), family.ambient_dim(), spans)
}
