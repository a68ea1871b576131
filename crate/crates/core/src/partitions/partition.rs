use std::collections::BTreeSet;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set partition of a finite index set, kept canonical: indices sorted
/// inside each block and blocks sorted by their smallest index. Two
/// partitions are equal iff they are equal as values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Validates nonempty, disjoint blocks and canonicalizes them.
    pub fn new(blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &i in b {
                if !seen.insert(i) {
                    return Err(Error::InvalidPartition(format!("index {i} appears twice")));
                }
            }
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// One block holding `0..n`; no blocks when `n == 0`.
    pub fn whole(n: usize) -> Self {
        Partition {
            blocks: if n == 0 {
                vec![]
            } else {
                vec![(0..n).collect()]
            },
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn ground_set(&self) -> BTreeSet<usize> {
        self.blocks.iter().flatten().copied().collect()
    }

    pub fn is_all_singletons(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    /// Whether the blocks cover exactly `0..n`.
    pub fn covers(&self, n: usize) -> bool {
        let total: usize = self.blocks.iter().map(Vec::len).sum();
        total == n && self.blocks.iter().flatten().all(|&i| i < n)
    }

    /// The block containing `i`.
    pub fn block_of(&self, i: usize) -> Option<&[usize]> {
        self.blocks
            .iter()
            .find(|b| b.contains(&i))
            .map(Vec::as_slice)
    }
}

impl TryFrom<Vec<Vec<usize>>> for Partition {
    type Error = Error;

    fn try_from(blocks: Vec<Vec<usize>>) -> Result<Self> {
        Partition::new(blocks)
    }
}

impl From<Partition> for Vec<Vec<usize>> {
    fn from(p: Partition) -> Self {
        p.blocks
    }
}

/// A value of `rho_c` together with the partition attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoResult {
    pub value: BigRational,
    pub partition: Partition,
}

/// `{P ∩ G : P ∩ G nonempty}`.
pub fn restrict_partition(pi: &Partition, subset: &[usize]) -> Partition {
    let keep: BTreeSet<usize> = subset.iter().copied().collect();
    let blocks = pi
        .blocks()
        .iter()
        .map(|b| {
            b.iter()
                .copied()
                .filter(|i| keep.contains(i))
                .collect::<Vec<_>>()
        })
        .filter(|b| !b.is_empty())
        .collect();
    Partition::new(blocks).expect("restriction of a partition is a partition")
}

/// Whether every block of `finer` lies inside some block of `coarser`.
pub fn is_refinement(finer: &Partition, coarser: &Partition) -> Result<bool> {
    if finer.ground_set() != coarser.ground_set() {
        return Err(Error::MismatchedGroundSet);
    }
    Ok(finer.blocks().iter().all(|b| {
        let host = coarser.block_of(b[0]).expect("same ground set");
        b.iter().all(|i| host.contains(i))
    }))
}
