use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, RowReducer, Subspace};

/// An ordered list of nonzero subspaces of a common `K^d`. Duplicates are
/// allowed and meaningful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceFamily {
    field: FieldSpec,
    ambient_dim: usize,
    members: Vec<Subspace>,
}

impl SubspaceFamily {
    pub fn new(field: FieldSpec, ambient_dim: usize, members: Vec<Subspace>) -> Result<Self> {
        for (i, m) in members.iter().enumerate() {
            if m.field() != field {
                return Err(Error::MixedField(m.field().to_string(), field.to_string()));
            }
            if m.ambient_dim() != ambient_dim {
                return Err(Error::MixedAmbient(ambient_dim, m.ambient_dim()));
            }
            if m.is_zero() {
                return Err(Error::ZeroSubspace(i));
            }
        }
        Ok(SubspaceFamily {
            field,
            ambient_dim,
            members,
        })
    }

    pub fn empty(field: FieldSpec, ambient_dim: usize) -> Self {
        SubspaceFamily {
            field,
            ambient_dim,
            members: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn get(&self, i: usize) -> &Subspace {
        &self.members[i]
    }

    pub fn into_members(self) -> Vec<Subspace> {
        self.members
    }

    pub fn push(&mut self, s: Subspace) -> Result<()> {
        if s.field() != self.field {
            return Err(Error::MixedField(
                s.field().to_string(),
                self.field.to_string(),
            ));
        }
        if s.ambient_dim() != self.ambient_dim {
            return Err(Error::MixedAmbient(self.ambient_dim, s.ambient_dim()));
        }
        if s.is_zero() {
            return Err(Error::ZeroSubspace(self.members.len()));
        }
        self.members.push(s);
        Ok(())
    }

    /// `self` followed by `other`, as a family on `0..len + other.len`.
    pub fn union(&self, other: &SubspaceFamily) -> Result<SubspaceFamily> {
        let mut out = self.clone();
        for s in other.members() {
            out.push(s.clone())?;
        }
        Ok(out)
    }

    /// The members at `indices`, in the order given.
    pub fn subfamily(&self, indices: &[usize]) -> SubspaceFamily {
        SubspaceFamily {
            field: self.field,
            ambient_dim: self.ambient_dim,
            members: indices.iter().map(|&i| self.members[i].clone()).collect(),
        }
    }

    /// `d(P)` for the members at `indices`.
    pub fn span_dim_of(&self, indices: &[usize]) -> usize {
        let mut r = RowReducer::new(self.field, self.ambient_dim);
        for &i in indices {
            r.insert_matrix(self.members[i].basis());
        }
        r.rank()
    }

    /// `sp P` for the members at `indices`.
    pub fn span_of(&self, indices: &[usize]) -> Subspace {
        let rows = indices
            .iter()
            .flat_map(|&i| self.members[i].basis().to_rows())
            .collect();
        Subspace::span_of(self.field, self.ambient_dim, rows)
            .expect("members share one ambient space")
    }

    /// `d(F)`.
    pub fn total_dim(&self) -> usize {
        let all: Vec<usize> = (0..self.len()).collect();
        self.span_dim_of(&all)
    }

    /// Same members, compared as multisets.
    pub fn same_multiset(&self, other: &SubspaceFamily) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let mut used = vec![false; other.len()];
        self.members.iter().all(|m| {
            match (0..other.len()).find(|&j| !used[j] && &other.members[j] == m) {
                Some(j) => {
                    used[j] = true;
                    true
                }
                None => false,
            }
        })
    }
}
