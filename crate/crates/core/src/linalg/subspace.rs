use rand::Rng;

use crate::error::{Error, Result};

use super::field::{FieldSpec, Scalar};
use super::matrix::{rref_rows, Matrix, RowReducer};

/// A linear subspace of `K^d`, stored by the reduced row echelon form of
/// any generating set. Two subspaces are equal iff their bases are
/// identical entry-wise.
///
/// The zero subspace is representable (an empty basis); it is produced by
/// intersections and rejected by [`SubspaceFamily`](crate::partitions::SubspaceFamily).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// Span of `rows`, which must contain a nonzero vector.
    pub fn from_rows(field: FieldSpec, ambient_dim: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let s = Subspace::span_of(field, ambient_dim, rows)?;
        if s.is_zero() {
            return Err(Error::AllRowsZero);
        }
        Ok(s)
    }

    /// Span of `rows`; the zero subspace when they all vanish.
    pub fn span_of(field: FieldSpec, ambient_dim: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        for r in &rows {
            if r.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    context: "subspace generator",
                    expected: ambient_dim,
                    found: r.len(),
                });
            }
            if let Some(bad) = r.iter().find(|s| !field.contains(s)) {
                return Err(Error::BadScalar {
                    path: "subspace generator".into(),
                    reason: format!("{bad} is not an element of {field}"),
                });
            }
        }
        let (rows, _) = rref_rows(field, ambient_dim, rows);
        Ok(Subspace {
            basis: Matrix::from_rows(field, ambient_dim, rows)?,
        })
    }

    pub fn from_i64_rows(field: FieldSpec, ambient_dim: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.from_i64(v)).collect())
            .collect();
        Subspace::from_rows(field, ambient_dim, rows)
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient_dim),
        }
    }

    /// The whole space `K^d`.
    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.num_cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.num_rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn contains_vector(&self, v: &[Scalar]) -> bool {
        let mut r = RowReducer::new(self.field(), self.ambient_dim());
        r.insert_matrix(&self.basis);
        r.contains(v)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        let mut r = RowReducer::new(other.field(), other.ambient_dim());
        r.insert_matrix(&other.basis);
        self.basis.rows().all(|v| r.contains(v))
    }

    /// Span of this subspace together with `others`.
    pub fn join<'a>(&self, others: impl IntoIterator<Item = &'a Subspace>) -> Result<Subspace> {
        let mut rows = self.basis.to_rows();
        for o in others {
            check_compatible(self, o)?;
            rows.extend(o.basis.to_rows());
        }
        Subspace::span_of(self.field(), self.ambient_dim(), rows)
    }
}

fn check_compatible(a: &Subspace, b: &Subspace) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::MixedField(
            a.field().to_string(),
            b.field().to_string(),
        ));
    }
    if a.ambient_dim() != b.ambient_dim() {
        return Err(Error::MixedAmbient(a.ambient_dim(), b.ambient_dim()));
    }
    Ok(())
}

/// Dimension of the span of the union; 0 for an empty list.
pub fn span_dim<'a, I>(subspaces: I) -> Result<usize>
where
    I: IntoIterator<Item = &'a Subspace>,
{
    let mut it = subspaces.into_iter();
    let Some(first) = it.next() else {
        return Ok(0);
    };
    let mut reducer = RowReducer::new(first.field(), first.ambient_dim());
    reducer.insert_matrix(first.basis());
    for s in it {
        check_compatible(first, s)?;
        reducer.insert_matrix(s.basis());
    }
    Ok(reducer.rank())
}

/// `{v in f : constraints * v = 0}`, possibly the zero subspace.
pub fn kernel_in_subspace(f: &Subspace, constraints: &Matrix) -> Result<Subspace> {
    if constraints.num_cols() != f.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "constraint rows",
            expected: f.ambient_dim(),
            found: constraints.num_cols(),
        });
    }
    if constraints.field() != f.field() {
        return Err(Error::MixedField(
            constraints.field().to_string(),
            f.field().to_string(),
        ));
    }
    let field = f.field();
    // coefficients a with constraints * (basis^T a) = 0
    let m = constraints.mul(&f.basis().transpose())?;
    let coeffs = m.nullspace();
    let rows = coeffs
        .iter()
        .map(|a| {
            let mut v = vec![field.zero(); f.ambient_dim()];
            for (ai, b) in a.iter().zip(f.basis().rows()) {
                if ai.is_zero() {
                    continue;
                }
                for (vc, bc) in v.iter_mut().zip(b) {
                    *vc = field.mul_add(vc, ai, bc);
                }
            }
            v
        })
        .collect();
    Subspace::span_of(field, f.ambient_dim(), rows)
}

/// `dim` independent uniform draws: residues over `F_p`, integers in
/// `[-rational_bound, rational_bound]` over the rationals.
pub fn sample_vector<R: Rng + ?Sized>(
    field: FieldSpec,
    dim: usize,
    rational_bound: u64,
    rng: &mut R,
) -> Vec<Scalar> {
    (0..dim)
        .map(|_| field.sample(rational_bound, rng))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn sub(rows: &[Vec<i64>]) -> Subspace {
        Subspace::from_i64_rows(Q, rows[0].len(), rows).unwrap()
    }

    #[test]
    fn already_reduced_rows() {
        let s = sub(&[vec![1, 1, 0], vec![0, 0, 1]]);
        assert_eq!(s.dim(), 2);
        assert_eq!(
            s.basis(),
            &Matrix::from_i64_rows(Q, 3, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap()
        );
    }

    #[test]
    fn scaling_is_normalized() {
        assert_eq!(sub(&[vec![2, 2, 0]]), sub(&[vec![1, 1, 0]]));
    }

    #[test]
    fn all_zero_rows_rejected() {
        let err = Subspace::from_i64_rows(Q, 3, &[vec![0, 0, 0]]).unwrap_err();
        assert_eq!(err, Error::AllRowsZero);
    }

    #[test]
    fn ragged_generators_rejected() {
        let err = Subspace::from_i64_rows(Q, 3, &[vec![1, 0]]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn span_dim_examples() {
        let e1 = sub(&[vec![1, 0]]);
        let e2 = sub(&[vec![0, 1]]);
        assert_eq!(span_dim([&e1, &e2]).unwrap(), 2);
        let plane = sub(&[vec![1, 0, 0], vec![0, 1, 0]]);
        assert_eq!(span_dim([&plane, &plane]).unwrap(), 2);
        assert_eq!(span_dim(std::iter::empty()).unwrap(), 0);
    }

    #[test]
    fn span_dim_rejects_mixed_ambient() {
        let a = sub(&[vec![1, 0]]);
        let b = sub(&[vec![1, 0, 0]]);
        assert_eq!(span_dim([&a, &b]).unwrap_err(), Error::MixedAmbient(2, 3));
    }

    #[test]
    fn kernel_examples() {
        let full = Subspace::full(Q, 3);
        let x = Matrix::from_i64_rows(Q, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(
            kernel_in_subspace(&full, &x).unwrap(),
            sub(&[vec![0, 0, 1]])
        );

        let e1 = sub(&[vec![1, 0, 0]]);
        let vacuous = Matrix::from_i64_rows(Q, 3, &[vec![0, 1, 0]]).unwrap();
        assert_eq!(kernel_in_subspace(&e1, &vacuous).unwrap(), e1);

        let killing = Matrix::from_i64_rows(Q, 3, &[vec![1, 0, 0]]).unwrap();
        assert!(kernel_in_subspace(&e1, &killing).unwrap().is_zero());

        let short = Matrix::from_i64_rows(Q, 2, &[vec![1, 0]]).unwrap();
        assert!(matches!(
            kernel_in_subspace(&e1, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let f7 = FieldSpec::prime(7).unwrap();
        let a = sample_vector(f7, 3, 0, &mut ChaCha8Rng::seed_from_u64(9));
        let b = sample_vector(f7, 3, 0, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!(a.iter().all(|s| f7.contains(s)));
        assert!(sample_vector(f7, 0, 0, &mut ChaCha8Rng::seed_from_u64(1)).is_empty());
        let r = sample_vector(Q, 50, 3, &mut ChaCha8Rng::seed_from_u64(2));
        for s in r {
            let v = s.as_rational().unwrap();
            assert!(v.is_integer() && v.numer() >= &(-3).into() && v.numer() <= &3.into());
        }
    }
}
