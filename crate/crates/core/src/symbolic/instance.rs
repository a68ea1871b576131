use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::engine::rho;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar, Subspace};
use crate::partitions::SubspaceFamily;
use crate::sfm::SfmBackend;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R2Instance {
    field: FieldSpec,
    ambient_dim: usize,
    rows: Vec<(Vec<Scalar>, Vec<Scalar>)>,
}

impl R2Instance {
    pub fn new(
        field: FieldSpec,
        ambient_dim: usize,
        rows: Vec<(Vec<Scalar>, Vec<Scalar>)>,
    ) -> Result<Self> {
        for (u, v) in &rows {
            check_vector(field, ambient_dim, u, "R_2 row vector")?;
            check_vector(field, ambient_dim, v, "R_2 row vector")?;
        }
        Ok(R2Instance {
            field,
            ambient_dim,
            rows,
        })
    }

    pub fn from_i64(ambient_dim: usize, rows: &[(Vec<i64>, Vec<i64>)]) -> Result<Self> {
        let f = FieldSpec::Rationals;
        let conv = |v: &[i64]| v.iter().map(|&a| f.from_i64(a)).collect::<Vec<_>>();
        R2Instance::new(
            f,
            ambient_dim,
            rows.iter().map(|(u, v)| (conv(u), conv(v))).collect(),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rows(&self) -> &[(Vec<Scalar>, Vec<Scalar>)] {
        &self.rows
    }

    /// The same instance with every scalar mapped into `target`.
    pub fn over(&self, target: FieldSpec) -> Result<R2Instance> {
        let rows = self
            .rows
            .iter()
            .map(|(u, v)| {
                Ok((
                    convert_all(target, self.field, u)?,
                    convert_all(target, self.field, v)?,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(R2Instance {
            field: target,
            ambient_dim: self.ambient_dim,
            rows,
        })
    }
}

/// `k`-tensors given by their rank-one factors, all in `K^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RkInstance {
    field: FieldSpec,
    ambient_dim: usize,
    k: usize,
    tensors: Vec<Vec<Vec<Scalar>>>,
}

impl RkInstance {
    pub fn new(
        field: FieldSpec,
        ambient_dim: usize,
        k: usize,
        tensors: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self> {
        if k < 2 || k >= ambient_dim {
            return Err(Error::BadOrder { k, n: ambient_dim });
        }
        for t in &tensors {
            if t.len() != k {
                return Err(Error::DimensionMismatch {
                    context: "tensor factor count",
                    expected: k,
                    found: t.len(),
                });
            }
            for a in t {
                check_vector(field, ambient_dim, a, "tensor factor")?;
            }
        }
        Ok(RkInstance {
            field,
            ambient_dim,
            k,
            tensors,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn tensors(&self) -> &[Vec<Vec<Scalar>>] {
        &self.tensors
    }

    pub fn over(&self, target: FieldSpec) -> Result<RkInstance> {
        let tensors = self
            .tensors
            .iter()
            .map(|t| {
                t.iter()
                    .map(|a| convert_all(target, self.field, a))
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(RkInstance {
            field: target,
            ambient_dim: self.ambient_dim,
            k: self.k,
            tensors,
        })
    }
}

fn check_vector(field: FieldSpec, dim: usize, v: &[Scalar], context: &'static str) -> Result<()> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            context,
            expected: dim,
            found: v.len(),
        });
    }
    if let Some(s) = v.iter().find(|s| !field.contains(s)) {
        return Err(Error::MixedField(format!("{s:?}"), field.to_string()));
    }
    Ok(())
}

fn convert_all(target: FieldSpec, from: FieldSpec, v: &[Scalar]) -> Result<Vec<Scalar>> {
    v.iter().map(|s| target.convert(s, from)).collect()
}

/// A family built from symbolic rows, with the rows that contributed no
/// member because their row vanishes identically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyBuild {
    pub family: SubspaceFamily,
    /// Source row of each family member.
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
}

fn build_family<'a>(
    field: FieldSpec,
    dim: usize,
    factors: impl Iterator<Item = (usize, &'a [Vec<Scalar>])>,
) -> Result<FamilyBuild> {
    let mut members = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for (i, vs) in factors {
        let span = Subspace::span_of(field, dim, vs.to_vec())?;
        if span.dim() == vs.len() {
            members.push(span);
            kept.push(i);
        } else {
            dropped.push(i);
        }
    }
    Ok(FamilyBuild {
        family: SubspaceFamily::new(field, dim, members)?,
        kept,
        dropped,
    })
}

/// `{span{u_i, v_i}}`, skipping rows with `u_i ∥ v_i`.
pub fn r2_family(inst: &R2Instance) -> Result<FamilyBuild> {
    let pairs: Vec<Vec<Vec<Scalar>>> = inst
        .rows
        .iter()
        .map(|(u, v)| vec![u.clone(), v.clone()])
        .collect();
    build_family(
        inst.field,
        inst.ambient_dim,
        pairs.iter().map(Vec::as_slice).enumerate(),
    )
}

/// `{span{a¹_i, …, a^k_i}}`, skipping tensors with dependent factors.
pub fn rk_family(inst: &RkInstance) -> Result<FamilyBuild> {
    build_family(
        inst.field,
        inst.ambient_dim,
        inst.tensors.iter().map(Vec::as_slice).enumerate(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitRank {
    pub rank: usize,
    pub dropped_rows: Vec<usize>,
}

fn rho_as_rank(family: &SubspaceFamily, c: usize, backend: SfmBackend) -> Result<usize> {
    let c = BigRational::from_integer(BigInt::from(c));
    let value = rho(family, &c, backend)?.value;
    if !value.is_integer() || value.is_negative() {
        return Err(Error::InternalInvariant(format!(
            "rank value {value} is not a nonnegative integer"
        )));
    }
    value
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::InternalInvariant("rank does not fit in usize".into()))
}

/// Generic rank of the `R_2` matrix, as `rho_1` of its family.
pub fn r2_rank(inst: &R2Instance, backend: SfmBackend) -> Result<PitRank> {
    let built = r2_family(inst)?;
    Ok(PitRank {
        rank: rho_as_rank(&built.family, 1, backend)?,
        dropped_rows: built.dropped,
    })
}

/// Generic rank of the `R_k` matrix, as `rho_{k-1}` of its family.
pub fn rk_rank(inst: &RkInstance, backend: SfmBackend) -> Result<PitRank> {
    let built = rk_family(inst)?;
    Ok(PitRank {
        rank: rho_as_rank(&built.family, inst.k - 1, backend)?,
        dropped_rows: built.dropped,
    })
}

/// The matrix with rows `(u_i·x) v_i - (v_i·x) u_i`.
pub fn evaluate_r2_matrix(inst: &R2Instance, x: &[Scalar]) -> Result<Matrix> {
    check_vector(inst.field, inst.ambient_dim, x, "evaluation point")?;
    let f = inst.field;
    let rows = inst
        .rows
        .iter()
        .map(|(u, v)| {
            let ux = f.dot(u, x);
            let vx = f.dot(v, x);
            v.iter()
                .zip(u)
                .map(|(vi, ui)| f.sub(&f.mul(&ux, vi), &f.mul(&vx, ui)))
                .collect()
        })
        .collect();
    Matrix::from_rows(f, inst.ambient_dim, rows)
}

/// Contracts each antisymmetrized tensor against `xs[0], …, xs[k-2]` in
/// its first `k - 1` slots.
///
/// The contraction equals the determinant of the `k × k` matrix whose
/// first `k - 1` rows are `(x^r · a^j)_j` and whose last row holds the
/// vectors `a^j`, so each row is a cofactor expansion along that last row.
pub fn evaluate_rk_matrix(inst: &RkInstance, xs: &[Vec<Scalar>]) -> Result<Matrix> {
    let k = inst.k;
    if xs.len() != k - 1 {
        return Err(Error::DimensionMismatch {
            context: "number of variable vectors",
            expected: k - 1,
            found: xs.len(),
        });
    }
    for x in xs {
        check_vector(inst.field, inst.ambient_dim, x, "evaluation point")?;
    }
    let f = inst.field;
    let mut rows = Vec::with_capacity(inst.tensors.len());
    for t in &inst.tensors {
        let pairing: Vec<Vec<Scalar>> = xs
            .iter()
            .map(|x| t.iter().map(|a| f.dot(x, a)).collect())
            .collect();
        let mut row = vec![f.zero(); inst.ambient_dim];
        for (j, a) in t.iter().enumerate() {
            let minor_rows: Vec<Vec<Scalar>> = pairing
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, s)| s.clone())
                        .collect()
                })
                .collect();
            let minor = Matrix::from_rows(f, k - 1, minor_rows)?.det()?;
            // sign of entry (k, j+1) in 1-based indexing
            let cof = if (k + j + 1).is_multiple_of(2) {
                minor
            } else {
                f.neg(&minor)
            };
            if cof.is_zero() {
                continue;
            }
            for (r, ai) in row.iter_mut().zip(a) {
                *r = f.mul_add(r, &cof, ai);
            }
        }
        rows.push(row);
    }
    Matrix::from_rows(f, inst.ambient_dim, rows)
}

/// Replaces each member by the planes spanned by pairs of its basis
/// vectors. `rho_1` is unchanged by this.
pub fn split_to_planes(family: &SubspaceFamily) -> Result<SubspaceFamily> {
    let field = family.field();
    let d = family.ambient_dim();
    let mut planes = Vec::new();
    for (idx, m) in family.members().iter().enumerate() {
        if m.dim() < 2 {
            return Err(Error::DimTooSmall(idx));
        }
        let basis = m.basis();
        for i in 0..m.dim() {
            for j in i + 1..m.dim() {
                planes.push(Subspace::from_rows(
                    field,
                    d,
                    vec![basis.row(i).to_vec(), basis.row(j).to_vec()],
                )?);
            }
        }
    }
    SubspaceFamily::new(field, d, planes)
}
