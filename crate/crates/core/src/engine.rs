//! Incremental computation of `rho_c(F)` and the minimal partition.
//!
//! The family is folded in one subspace at a time. The running state is
//! the hat family (the spans of the current minimal partition's blocks,
//! whose own minimal partition is all singletons), so inserting `g` only
//! needs the single block that absorbs `g`. That block is `X* ∪ {g}` where
//! `X*` is the maximal minimizer of
//!
//! ```text
//! r(X) = d(X ∪ {g}) - c + Σ_{f ∉ X} (d(f) - c)
//! ```
//!
//! over subsets `X` of the hat family, and `min r = rho_c(hat ∪ {g})`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, RowReducer, Subspace};
use crate::partitions::{rho_of_partition, Partition, RhoResult, SubspaceFamily};
use crate::sfm::{MinimizerResult, SetFunction, SfmBackend};

/// `r_{F,g,c}` over the members of `base`.
pub struct InsertionOracle<'a> {
    base: &'a [Subspace],
    dims: Vec<usize>,
    seeded: RowReducer,
    c: BigRational,
    /// `Σ_f (d(f) - c)` over all of `base`.
    complement_total: BigRational,
}

impl<'a> InsertionOracle<'a> {
    pub fn new(base: &'a [Subspace], g: &Subspace, c: &BigRational) -> Result<Self> {
        for f in base {
            if f.ambient_dim() != g.ambient_dim() {
                return Err(Error::MixedAmbient(g.ambient_dim(), f.ambient_dim()));
            }
            if f.field() != g.field() {
                return Err(Error::MixedField(
                    f.field().to_string(),
                    g.field().to_string(),
                ));
            }
        }
        let dims: Vec<usize> = base.iter().map(Subspace::dim).collect();
        let mut seeded = RowReducer::new(g.field(), g.ambient_dim());
        seeded.insert_matrix(g.basis());
        let total_dim: usize = dims.iter().sum();
        let complement_total = BigRational::from_integer(total_dim.into())
            - c * BigRational::from_integer(base.len().into());
        Ok(InsertionOracle {
            base,
            dims,
            seeded,
            c: c.clone(),
            complement_total,
        })
    }
}

impl SetFunction for InsertionOracle<'_> {
    fn ground_size(&self) -> usize {
        self.base.len()
    }

    fn eval(&self, subset: &[usize]) -> BigRational {
        let mut r = self.seeded.clone();
        let mut removed = BigRational::zero();
        for &i in subset {
            r.insert_matrix(self.base[i].basis());
            removed += BigRational::from_integer(self.dims[i].into()) - &self.c;
        }
        BigRational::from_integer(r.rank().into()) - &self.c + &self.complement_total - removed
    }
}

/// Builds `r_{F,g,c}` for a family `base` whose minimal partition is all
/// singletons.
pub fn insertion_oracle<'a>(
    base: &'a SubspaceFamily,
    g: &Subspace,
    c: &BigRational,
) -> Result<InsertionOracle<'a>> {
    if g.ambient_dim() != base.ambient_dim() {
        return Err(Error::MixedAmbient(base.ambient_dim(), g.ambient_dim()));
    }
    InsertionOracle::new(base.members(), g, c)
}

/// The fold state: the current hat family and, for each hat member, the
/// original input indices merged into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineState {
    c: BigRational,
    hat: SubspaceFamily,
    blocks: Vec<Vec<usize>>,
}

impl EngineState {
    pub fn new(field: FieldSpec, ambient_dim: usize, c: BigRational) -> Self {
        EngineState {
            c,
            hat: SubspaceFamily::empty(field, ambient_dim),
            blocks: Vec::new(),
        }
    }

    pub fn c(&self) -> &BigRational {
        &self.c
    }

    pub fn hat(&self) -> &SubspaceFamily {
        &self.hat
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// `Σ over hat members (d - c)`.
    pub fn value(&self) -> BigRational {
        let total: usize = self.hat.members().iter().map(Subspace::dim).sum();
        BigRational::from_integer(total.into())
            - &self.c * BigRational::from_integer(self.hat.len().into())
    }

    /// The minimal partition of the inserted indices.
    pub fn partition(&self) -> Partition {
        Partition::new(self.blocks.clone()).expect("blocks are disjoint and nonempty")
    }

    /// Inserts `g`, recorded under `original_index`.
    pub fn insert_subspace(
        self,
        g: &Subspace,
        original_index: usize,
        backend: SfmBackend,
    ) -> Result<EngineState> {
        self.insert_traced(g, original_index, backend)
            .map(|(s, _)| s)
    }

    /// Like [`insert_subspace`](Self::insert_subspace), also returning the
    /// minimizer of the insertion oracle.
    pub fn insert_traced(
        self,
        g: &Subspace,
        original_index: usize,
        backend: SfmBackend,
    ) -> Result<(EngineState, MinimizerResult)> {
        if g.is_zero() {
            return Err(Error::ZeroSubspace(original_index));
        }
        let found = {
            let oracle = insertion_oracle(&self.hat, g, &self.c)?;
            backend.minimize(&oracle)?
        };
        let EngineState { c, hat, blocks } = self;
        let absorbed = &found.minimizer;

        let mut merged_rows = g.basis().to_rows();
        let mut merged_block = vec![original_index];
        let mut new_members = Vec::with_capacity(hat.len() + 1 - absorbed.len());
        let mut new_blocks = Vec::with_capacity(new_members.capacity());
        for (i, (member, block)) in hat.into_members().into_iter().zip(blocks).enumerate() {
            if absorbed.binary_search(&i).is_ok() {
                merged_rows.extend(member.basis().to_rows());
                merged_block.extend(block);
            } else {
                new_members.push(member);
                new_blocks.push(block);
            }
        }
        let merged = Subspace::span_of(g.field(), g.ambient_dim(), merged_rows)?;
        // repeats are only possible below dimension c (see `hat_family`)
        if new_members.contains(&merged) && BigRational::from_integer(merged.dim().into()) >= c {
            return Err(Error::InternalInvariant(
                "inserted block coincides with an untouched hat member".into(),
            ));
        }
        merged_block.sort_unstable();
        new_members.push(merged);
        new_blocks.push(merged_block);
        let hat = SubspaceFamily::new(g.field(), g.ambient_dim(), new_members)?;
        let state = EngineState {
            c,
            hat,
            blocks: new_blocks,
        };
        if state.value() != found.value {
            return Err(Error::InternalInvariant(format!(
                "hat value {} differs from oracle minimum {}",
                state.value(),
                found.value
            )));
        }
        Ok((state, found))
    }
}

/// `rho_c(F)` and its minimal partition.
///
/// For `c <= 0` merging never hurts, so the answer is `d(F) - c` with the
/// single block `F` (and `0` with no blocks for the empty family).
pub fn rho(family: &SubspaceFamily, c: &BigRational, backend: SfmBackend) -> Result<RhoResult> {
    if family.is_empty() {
        return Ok(RhoResult {
            value: BigRational::zero(),
            partition: Partition::whole(0),
        });
    }
    if !c.is_positive() {
        let value = BigRational::from_integer(family.total_dim().into()) - c;
        return Ok(RhoResult {
            value,
            partition: Partition::whole(family.len()),
        });
    }
    let mut state = EngineState::new(family.field(), family.ambient_dim(), c.clone());
    for (i, g) in family.members().iter().enumerate() {
        state = state.insert_subspace(g, i, backend)?;
    }
    let partition = state.partition();
    let value = state.value();
    let check = rho_of_partition(family, &partition, c)?;
    if check != value {
        return Err(Error::InternalInvariant(format!(
            "engine value {value} disagrees with its partition's value {check}"
        )));
    }
    Ok(RhoResult { value, partition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rational;
    use crate::partitions::rho_bruteforce;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn sub(rows: &[Vec<i64>]) -> Subspace {
        Subspace::from_i64_rows(Q, rows[0].len(), rows).unwrap()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn oracle_on_two_lines_and_diagonal() {
        let base = SubspaceFamily::new(Q, 2, vec![sub(&[vec![1, 0]]), sub(&[vec![0, 1]])]).unwrap();
        let g = sub(&[vec![1, 1]]);
        let o = insertion_oracle(&base, &g, &int(1)).unwrap();
        assert_eq!(o.eval(&[]), int(0));
        assert_eq!(o.eval(&[0]), int(1));
        assert_eq!(o.eval(&[1]), int(1));
        assert_eq!(o.eval(&[0, 1]), int(1));
    }

    #[test]
    fn oracle_on_empty_base() {
        let base = SubspaceFamily::empty(Q, 3);
        let g = sub(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let c = rational(1, 2);
        let o = insertion_oracle(&base, &g, &c).unwrap();
        assert_eq!(o.eval(&[]), rational(3, 2));
    }

    #[test]
    fn oracle_with_coinciding_g() {
        let f = sub(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let base = SubspaceFamily::new(Q, 3, vec![f.clone()]).unwrap();
        let o = insertion_oracle(&base, &f, &int(1)).unwrap();
        assert_eq!(o.eval(&[]), int(2));
        assert_eq!(o.eval(&[0]), int(1));
    }

    #[test]
    fn oracle_rejects_mixed_ambient() {
        let base = SubspaceFamily::new(Q, 2, vec![sub(&[vec![1, 0]])]).unwrap();
        let g = sub(&[vec![1, 0, 0]]);
        assert!(matches!(
            insertion_oracle(&base, &g, &int(1)),
            Err(Error::MixedAmbient(2, 3))
        ));
    }

    #[test]
    fn insertion_examples() {
        for backend in [SfmBackend::Exhaustive, SfmBackend::MinNormPoint] {
            let mut s = EngineState::new(Q, 2, int(1));
            s = s.insert_subspace(&sub(&[vec![1, 0]]), 0, backend).unwrap();
            assert_eq!(s.hat().len(), 1);
            s = s.insert_subspace(&sub(&[vec![0, 1]]), 1, backend).unwrap();
            s = s.insert_subspace(&sub(&[vec![1, 1]]), 2, backend).unwrap();
            assert_eq!(s.hat().len(), 3);
            assert_eq!(s.partition(), Partition::singletons(3));

            let plane = sub(&[vec![1, 0, 0], vec![0, 1, 0]]);
            let mut s = EngineState::new(Q, 3, int(1));
            s = s.insert_subspace(&plane, 0, backend).unwrap();
            let (s, found) = s.insert_traced(&plane, 1, backend).unwrap();
            assert_eq!(found.minimizer, vec![0]);
            assert_eq!(found.value, int(1));
            assert_eq!(s.hat().members(), std::slice::from_ref(&plane));
            assert_eq!(s.partition(), Partition::whole(2));
        }
    }

    #[test]
    fn nonpositive_c_shortcut() {
        let f =
            SubspaceFamily::new(Q, 3, vec![sub(&[vec![1, 0, 0]]), sub(&[vec![0, 1, 1]])]).unwrap();
        let r = rho(&f, &int(-1), SfmBackend::Auto).unwrap();
        assert_eq!(r.value, int(3));
        assert_eq!(r.partition, Partition::whole(2));
        assert_eq!(r, rho_bruteforce(&f, &int(-1)).unwrap());
        let empty = SubspaceFamily::empty(Q, 3);
        assert_eq!(
            rho(&empty, &int(1), SfmBackend::Auto).unwrap().value,
            int(0)
        );
        assert_eq!(
            rho(&empty, &int(-1), SfmBackend::Auto).unwrap().value,
            int(0)
        );
    }

    #[test]
    fn duplicate_plane_family() {
        let plane = sub(&[vec![1, 0, 0], vec![0, 1, 0]]);
        let f = SubspaceFamily::new(Q, 3, vec![plane.clone(), plane]).unwrap();
        for backend in [SfmBackend::Exhaustive, SfmBackend::MinNormPoint] {
            let r = rho(&f, &int(1), backend).unwrap();
            assert_eq!(r.value, int(1));
            assert_eq!(r.partition, Partition::whole(2));
        }
    }
}
