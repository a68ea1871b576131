//! Seeded random instances.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::{FieldSpec, Matrix, Scalar, Subspace};
use crate::partitions::{Partition, SubspaceFamily};
use crate::rigidity::Graph;
use crate::symbolic::{R2Instance, RkInstance};

/// Bounds for [`random_family`].
#[derive(Clone, Copy, Debug)]
pub struct FamilyShape {
    pub min_members: usize,
    pub max_members: usize,
    pub min_ambient: usize,
    pub max_ambient: usize,
    pub min_dim: usize,
    pub max_dim: usize,
}

impl FamilyShape {
    pub const SMALL: FamilyShape = FamilyShape {
        min_members: 1,
        max_members: 7,
        min_ambient: 1,
        max_ambient: 8,
        min_dim: 1,
        max_dim: 3,
    };
}

/// A vector with entries in `[-2, 2]`, about half of them zero. Small
/// sparse entries make coincidences and dependencies common.
pub fn small_vector<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, dim: usize) -> Vec<Scalar> {
    (0..dim)
        .map(|_| {
            if rng.gen_bool(0.5) {
                field.zero()
            } else {
                field.from_i64(rng.gen_range(-2..=2))
            }
        })
        .collect()
}

/// Vector with uniform entries: residues over `F_p`, integers in
/// `[-9, 9]` over the rationals.
pub fn uniform_vector<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec, dim: usize) -> Vec<Scalar> {
    (0..dim).map(|_| field.sample(9, rng)).collect()
}

/// A subspace of exactly dimension `dim` (`1 <= dim <= ambient`).
pub fn random_subspace<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    ambient: usize,
    dim: usize,
) -> Subspace {
    assert!(dim <= ambient);
    loop {
        let rows = (0..dim)
            .map(|_| small_vector(rng, field, ambient))
            .collect();
        if let Ok(s) = Subspace::span_of(field, ambient, rows) {
            if s.dim() == dim {
                return s;
            }
        }
    }
}

/// A family whose members are mostly fresh random subspaces, with some
/// repeats and some spans of earlier members mixed in.
pub fn random_family<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    shape: FamilyShape,
) -> SubspaceFamily {
    let ambient = rng.gen_range(shape.min_ambient.max(shape.min_dim)..=shape.max_ambient);
    let members = rng.gen_range(shape.min_members..=shape.max_members);
    random_family_in(rng, field, ambient, members, shape.min_dim, shape.max_dim)
}

pub fn random_family_in<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    ambient: usize,
    members: usize,
    min_dim: usize,
    max_dim: usize,
) -> SubspaceFamily {
    let max_dim = max_dim.min(ambient);
    let mut out: Vec<Subspace> = Vec::with_capacity(members);
    for _ in 0..members {
        let roll: f64 = rng.gen();
        let member = if !out.is_empty() && roll < 0.15 {
            out.choose(rng).expect("nonempty").clone()
        } else if !out.is_empty() && roll < 0.25 {
            // a line or plane inside the span of two earlier members
            let a = out.choose(rng).expect("nonempty");
            let b = out.choose(rng).expect("nonempty");
            let joined = a.join([b]).expect("same ambient");
            let dim = rng.gen_range(min_dim..=max_dim).min(joined.dim()).max(1);
            sub_of(rng, &joined, dim)
        } else {
            let dim = rng.gen_range(min_dim..=max_dim);
            random_subspace(rng, field, ambient, dim)
        };
        if member.dim() >= min_dim {
            out.push(member);
        } else {
            let dim = rng.gen_range(min_dim..=max_dim);
            out.push(random_subspace(rng, field, ambient, dim));
        }
    }
    SubspaceFamily::new(field, ambient, out).expect("members are nonzero and compatible")
}

/// A random subspace of `s` of the given dimension.
pub fn sub_of<R: Rng + ?Sized>(rng: &mut R, s: &Subspace, dim: usize) -> Subspace {
    let field = s.field();
    loop {
        let rows: Vec<Vec<Scalar>> = (0..dim)
            .map(|_| {
                let coeffs = small_vector(rng, field, s.dim());
                let mut v = vec![field.zero(); s.ambient_dim()];
                for (c, b) in coeffs.iter().zip(s.basis().rows()) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = field.mul_add(vi, c, bi);
                    }
                }
                v
            })
            .collect();
        if let Ok(sub) = Subspace::span_of(field, s.ambient_dim(), rows) {
            if sub.dim() == dim {
                return sub;
            }
        }
    }
}

/// A uniformly random set partition of `0..n` by random labels.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Partition {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        blocks[rng.gen_range(0..n)].push(i);
    }
    Partition::new(blocks.into_iter().filter(|b| !b.is_empty()).collect())
        .expect("labels give a partition")
}

pub fn random_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    rows: usize,
    cols: usize,
) -> Matrix {
    Matrix::from_rows(
        field,
        cols,
        (0..rows)
            .map(|_| uniform_vector(rng, field, cols))
            .collect(),
    )
    .expect("consistent shape")
}

/// Random `R_2` rows over the rationals. Vectors are drawn from a random
/// low-dimensional subspace about a third of the time, and about one row
/// in ten is degenerate.
pub fn random_r2<R: Rng + ?Sized>(rng: &mut R, max_rows: usize, max_dim: usize) -> R2Instance {
    let field = FieldSpec::Rationals;
    let d = rng.gen_range(2..=max_dim);
    let m = rng.gen_range(1..=max_rows);
    let pool = if rng.gen_bool(0.35) {
        let dim = rng.gen_range(2..=d);
        Some(random_subspace(rng, field, d, dim))
    } else {
        None
    };
    let draw = |rng: &mut R| match &pool {
        Some(p) => sub_of(rng, p, 1).basis().row(0).to_vec(),
        None => small_vector(rng, field, d),
    };
    let rows = (0..m)
        .map(|_| {
            let u = draw(rng);
            let v = if rng.gen_bool(0.1) {
                u.iter().map(|s| field.mul(s, &field.from_i64(2))).collect()
            } else {
                draw(rng)
            };
            (u, v)
        })
        .collect();
    R2Instance::new(field, d, rows).expect("consistent lengths")
}

/// Random rank-one `k`-tensors over the rationals, with the same mix of
/// low-dimensional factors and degenerate tensors as [`random_r2`].
pub fn random_rk<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    max_tensors: usize,
    min_n: usize,
    max_n: usize,
) -> RkInstance {
    let field = FieldSpec::Rationals;
    let n = rng.gen_range(min_n.max(k + 1)..=max_n);
    let m = rng.gen_range(1..=max_tensors);
    let pool = if rng.gen_bool(0.35) {
        let dim = rng.gen_range(k..=n);
        Some(random_subspace(rng, field, n, dim))
    } else {
        None
    };
    let tensors = (0..m)
        .map(|_| {
            let mut t: Vec<Vec<Scalar>> = (0..k)
                .map(|_| match &pool {
                    Some(p) => sub_of(rng, p, 1).basis().row(0).to_vec(),
                    None => small_vector(rng, field, n),
                })
                .collect();
            if rng.gen_bool(0.1) {
                t[1] = t[0].clone();
            }
            t
        })
        .collect();
    RkInstance::new(field, n, k, tensors).expect("valid order and lengths")
}

/// `G(n, density)`, possibly with no edges.
pub fn random_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64) -> Graph {
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Graph::new(n, edges).expect("simple by construction")
}

/// Every simple graph on `0..n`, one per edge subset.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| {
        let edges = (0..m)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| pairs[i])
            .collect();
        Graph::new(n, edges).expect("simple by construction")
    })
}
