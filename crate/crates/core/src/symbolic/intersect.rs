use crate::error::{Error, Result};
use crate::linalg::{kernel_in_subspace, Matrix, RowReducer, Scalar, Subspace};

/// Explicit vectors spanning `f ∩ {w : X w = 0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionBasis {
    pub subspace: Subspace,
    pub constraints: Matrix,
    pub basis_vectors: Vec<Vec<Scalar>>,
    /// Set when the vectors come from a plain kernel computation rather
    /// than the closed-form construction.
    pub fallback: bool,
}

impl IntersectionBasis {
    pub fn span(&self) -> Result<Subspace> {
        Subspace::span_of(
            self.subspace.field(),
            self.subspace.ambient_dim(),
            self.basis_vectors.clone(),
        )
    }

    /// Every vector is in `f` and annihilated by every constraint row.
    pub fn is_exact(&self) -> bool {
        let f = self.subspace.field();
        self.basis_vectors.iter().all(|w| {
            self.subspace.contains_vector(w)
                && self.constraints.rows().all(|x| f.dot(x, w).is_zero())
        })
    }
}

fn check_constraints(f: &Subspace, x: &Matrix) -> Result<()> {
    if x.num_cols() != f.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "constraint rows",
            expected: f.ambient_dim(),
            found: x.num_cols(),
        });
    }
    if x.field() != f.field() {
        return Err(Error::MixedField(
            x.field().to_string(),
            f.field().to_string(),
        ));
    }
    Ok(())
}

/// `f ∩ x^⊥` via `w_ij = (v_j·x) v_i - (v_i·x) v_j`, pivoting on the first
/// basis vector `v_i` with `v_i·x ≠ 0`. If there is none, `f ⊆ x^⊥` and
/// the basis of `f` is returned.
pub fn intersect_with_hyperplane(f: &Subspace, x: &[Scalar]) -> Result<IntersectionBasis> {
    let field = f.field();
    let constraints = Matrix::from_rows(field, f.ambient_dim(), vec![x.to_vec()])?;
    check_constraints(f, &constraints)?;
    let basis = f.basis();
    let dots: Vec<Scalar> = basis.rows().map(|v| field.dot(v, x)).collect();
    let basis_vectors = match dots.iter().position(|d| !d.is_zero()) {
        None => basis.to_rows(),
        Some(i) => (0..basis.num_rows())
            .filter(|&j| j != i)
            .map(|j| {
                basis
                    .row(i)
                    .iter()
                    .zip(basis.row(j))
                    .map(|(vi, vj)| field.sub(&field.mul(&dots[j], vi), &field.mul(&dots[i], vj)))
                    .collect()
            })
            .collect(),
    };
    Ok(IntersectionBasis {
        subspace: f.clone(),
        constraints,
        basis_vectors,
        fallback: false,
    })
}

/// `f ∩ {w : X w = 0}` for a `k`-row `X`.
///
/// With `M = X Vᵀ` (`V` the basis of `f`, `m = dim f`) and `T` the
/// lexicographically first set of `k` independent columns of `M`, each
/// remaining column `i` gives `S = (i, T…)` and
///
/// ```text
/// w_S = Σ_{j=1}^{k+1} (-1)^j det(M_{S ∖ s_j}) v_{s_j}
/// ```
///
/// These `m - k` vectors form a basis whenever the intersection has the
/// expected dimension `m - k`. Otherwise the exact kernel is returned with
/// `fallback` set.
pub fn intersect_with_codim_k(f: &Subspace, x: &Matrix) -> Result<IntersectionBasis> {
    check_constraints(f, x)?;
    let field = f.field();
    let m = f.dim();
    let k = x.num_rows();
    let kernel = kernel_in_subspace(f, x)?;
    if k >= m || kernel.dim() != m - k {
        return Ok(IntersectionBasis {
            subspace: f.clone(),
            constraints: x.clone(),
            basis_vectors: kernel.basis().to_rows(),
            fallback: true,
        });
    }
    let basis = f.basis();
    let mm = x.mul(&basis.transpose())?;
    let cols: Vec<Vec<Scalar>> = mm.transpose().to_rows();

    // greedy over columns yields the lexicographically first basis
    let mut reducer = RowReducer::new(field, k);
    let mut t = Vec::with_capacity(k);
    for (j, col) in cols.iter().enumerate() {
        if reducer.insert(col) {
            t.push(j);
        }
    }
    if t.len() != k {
        return Err(Error::InternalInvariant(
            "constraint image has unexpected rank".into(),
        ));
    }

    let mut basis_vectors = Vec::with_capacity(m - k);
    for i in (0..m).filter(|i| !t.contains(i)) {
        let s: Vec<usize> = std::iter::once(i).chain(t.iter().copied()).collect();
        let mut w = vec![field.zero(); f.ambient_dim()];
        for j in 0..=k {
            let rest: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(p, _)| p != j)
                .map(|(_, &c)| c)
                .collect();
            let det = mm.select_columns(&rest).det()?;
            if det.is_zero() {
                continue;
            }
            // (-1)^j with j counted from 1
            let coeff = if j % 2 == 0 { field.neg(&det) } else { det };
            for (wc, vc) in w.iter_mut().zip(basis.row(s[j])) {
                *wc = field.mul_add(wc, &coeff, vc);
            }
        }
        basis_vectors.push(w);
    }
    let out = IntersectionBasis {
        subspace: f.clone(),
        constraints: x.clone(),
        basis_vectors,
        fallback: false,
    };
    if !out.is_exact() || out.span()? != kernel {
        return Err(Error::InternalInvariant(
            "signed-minor vectors do not form a basis of the intersection".into(),
        ));
    }
    Ok(out)
}
