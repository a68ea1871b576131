//! Generic rigidity of graphs in `t` dimensions.
//!
//! Edge `{u, v}` contributes the `t`-dimensional subspace of `K^{tn}`
//! spanned by `e_{jn+u} - e_{jn+v}` for `j < t`, and the generic rank of
//! the rigidity matrix `M_{G,2}` is `rho_1` of those planes. Coordinate
//! `j` of vertex `u` is variable `j·n + u` throughout.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::rho;
use crate::error::{Error, Result};
use crate::linalg::{FieldSpec, Matrix, Scalar, Subspace, DEFAULT_PRIME};
use crate::partitions::SubspaceFamily;
use crate::sfm::SfmBackend;
use crate::symbolic::{randomized_rank, R2Instance, SymbolicMatrix};

/// A simple undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::LoopEdge(u));
            }
            if u >= n || v >= n {
                return Err(Error::BadVertex { u, v, n });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(Graph { n, edges })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        Graph { n, edges }
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| (v - 1, v)).collect();
        Graph { n, edges }
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.edges.push((n - 1, 0));
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges
            .iter()
            .any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        let mut edges = self.edges.clone();
        edges.push((u, v));
        Graph::new(self.n, edges)
    }
}

/// `span{e_{jn+u} - e_{jn+v} : j < t}` in `K^{tn}`.
pub fn edge_subspace(field: FieldSpec, n: usize, u: usize, v: usize, t: usize) -> Result<Subspace> {
    if u == v || u >= n || v >= n {
        return Err(Error::BadVertex { u, v, n });
    }
    let rows = (0..t)
        .map(|j| {
            let mut row = vec![field.zero(); t * n];
            row[j * n + u] = field.one();
            row[j * n + v] = field.from_i64(-1);
            row
        })
        .collect();
    Subspace::from_rows(field, t * n, rows)
}

/// One edge subspace per edge, in edge order.
pub fn rigidity_family(graph: &Graph, t: usize, field: FieldSpec) -> Result<SubspaceFamily> {
    let members = graph
        .edges
        .iter()
        .map(|&(u, v)| edge_subspace(field, graph.n, u, v, t))
        .collect::<Result<_>>()?;
    SubspaceFamily::new(field, t * graph.n, members)
}

/// Generic rank of `M_{G,2}`, computed exactly as `rho_1` of the edge
/// planes.
///
/// The planes are spanned by `±1` incidence vectors, whose span ranks are
/// the same over every field, so the work is done over `F_p`.
pub fn rigidity_rank_2d(graph: &Graph) -> Result<usize> {
    rigidity_rank_2d_with(graph, SfmBackend::Auto)
}

pub fn rigidity_rank_2d_with(graph: &Graph, backend: SfmBackend) -> Result<usize> {
    let family = rigidity_family(graph, 2, FieldSpec::Prime(DEFAULT_PRIME))?;
    let value = rho(&family, &BigRational::one(), backend)?.value;
    if !value.is_integer() {
        return Err(Error::InternalInvariant(format!(
            "rigidity rank {value} is fractional"
        )));
    }
    value
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::InternalInvariant(format!("rigidity rank {value} is negative")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    Deterministic,
    Randomized,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub dimension: usize,
    pub rank: usize,
    pub required: usize,
    pub rigid: bool,
    pub dof: usize,
    pub method: RankMethod,
}

/// Parameters for randomized rank evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomizedOptions {
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for RandomizedOptions {
    fn default() -> Self {
        RandomizedOptions {
            prime: DEFAULT_PRIME,
            trials: 5,
            seed: 0,
        }
    }
}

/// Rank, required rank `t·n - t(t+1)/2` and degrees of freedom.
///
/// `t = 2` is exact; other dimensions use random evaluation of `M_{G,t}`.
/// Graphs with `n <= t` are rejected since the required rank is not given
/// by the formula there.
pub fn rigidity_report(
    graph: &Graph,
    t: usize,
    opts: &RandomizedOptions,
    backend: SfmBackend,
) -> Result<RigidityReport> {
    if t == 0 || graph.n <= t {
        return Err(Error::TooFewVertices { n: graph.n, t });
    }
    let required = t * graph.n - t * (t + 1) / 2;
    let (rank, method) = if t == 2 {
        (
            rigidity_rank_2d_with(graph, backend)?,
            RankMethod::Deterministic,
        )
    } else {
        let field = FieldSpec::prime(opts.prime)?;
        let m = RigidityMatrix::new(graph.clone(), t, FieldSpec::Rationals);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (
            randomized_rank(&m, field, opts.trials, &mut rng)?,
            RankMethod::Randomized,
        )
    };
    if rank > required {
        return Err(Error::InternalInvariant(format!(
            "rank {rank} exceeds the maximum {required}"
        )));
    }
    Ok(RigidityReport {
        dimension: t,
        rank,
        required,
        rigid: rank == required,
        dof: required - rank,
        method,
    })
}

/// Row of `M_{G,t}` for edge `edge` at the placement `x`: `x_{u,j} -
/// x_{v,j}` in column `(u, j)` and its negation in column `(v, j)`.
pub fn symbolic_rigidity_row(
    field: FieldSpec,
    graph: &Graph,
    t: usize,
    edge: usize,
    x: &[Scalar],
) -> Result<Vec<Scalar>> {
    let n = graph.n;
    if x.len() != t * n {
        return Err(Error::DimensionMismatch {
            context: "placement",
            expected: t * n,
            found: x.len(),
        });
    }
    let &(u, v) = graph.edges.get(edge).ok_or(Error::DimensionMismatch {
        context: "edge index",
        expected: graph.edges.len(),
        found: edge,
    })?;
    let mut row = vec![field.zero(); t * n];
    for j in 0..t {
        let d = field.sub(&x[j * n + u], &x[j * n + v]);
        row[j * n + v] = field.neg(&d);
        row[j * n + u] = d;
    }
    Ok(row)
}

/// `M_{G,t}` as a [`SymbolicMatrix`] in the `t·n` placement variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityMatrix {
    graph: Graph,
    t: usize,
    field: FieldSpec,
}

impl RigidityMatrix {
    pub fn new(graph: Graph, t: usize, field: FieldSpec) -> Self {
        RigidityMatrix { graph, t, field }
    }
}

impl SymbolicMatrix for RigidityMatrix {
    fn field(&self) -> FieldSpec {
        self.field
    }

    fn num_rows(&self) -> usize {
        self.graph.num_edges()
    }

    fn num_vars(&self) -> usize {
        self.t * self.graph.n
    }

    fn over(&self, target: FieldSpec) -> Result<Self> {
        Ok(RigidityMatrix {
            field: target,
            ..self.clone()
        })
    }

    fn evaluate(&self, point: &[Scalar]) -> Result<Matrix> {
        let rows = (0..self.graph.num_edges())
            .map(|e| symbolic_rigidity_row(self.field, &self.graph, self.t, e, point))
            .collect::<Result<_>>()?;
        Matrix::from_rows(self.field, self.num_vars(), rows)
    }
}

/// The `R_2` instance with `u = e_u - e_v` and `v = e_{n+u} - e_{n+v}` per
/// edge. At the point `(x_{·,1}, -x_{·,0})` it evaluates to `M_{G,2}` at
/// `x`.
pub fn rigidity_r2_instance(graph: &Graph, field: FieldSpec) -> Result<R2Instance> {
    let n = graph.n;
    let rows = graph
        .edges
        .iter()
        .map(|&(a, b)| {
            let mut u = vec![field.zero(); 2 * n];
            let mut v = vec![field.zero(); 2 * n];
            u[a] = field.one();
            u[b] = field.from_i64(-1);
            v[n + a] = field.one();
            v[n + b] = field.from_i64(-1);
            (u, v)
        })
        .collect();
    R2Instance::new(field, 2 * n, rows)
}

/// Whether the graph contains a spanning Laman subgraph, by the (2,3)
/// pebble game.
pub fn laman_oracle(graph: &Graph) -> Result<bool> {
    if graph.n < 2 {
        return Err(Error::TooFewVertices { n: graph.n, t: 2 });
    }
    let mut game = PebbleGame::new(graph.n);
    let accepted = graph
        .edges
        .iter()
        .filter(|&&(u, v)| game.try_add(u, v))
        .count();
    Ok(accepted == 2 * graph.n - 3)
}

struct PebbleGame {
    pebbles: Vec<u8>,
    out: Vec<Vec<usize>>,
}

impl PebbleGame {
    fn new(n: usize) -> Self {
        PebbleGame {
            pebbles: vec![2; n],
            out: vec![Vec::new(); n],
        }
    }

    fn try_add(&mut self, u: usize, v: usize) -> bool {
        loop {
            if self.pebbles[u] + self.pebbles[v] == 4 {
                self.pebbles[u] -= 1;
                self.out[u].push(v);
                return true;
            }
            if self.pebbles[u] < 2 && self.gather(u, v) {
                continue;
            }
            if self.pebbles[v] < 2 && self.gather(v, u) {
                continue;
            }
            return false;
        }
    }

    /// Moves one free pebble to `root` along reversed edges, never
    /// visiting `blocked`.
    fn gather(&mut self, root: usize, blocked: usize) -> bool {
        let n = self.pebbles.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        seen[blocked] = true;
        let mut stack = vec![root];
        while let Some(w) = stack.pop() {
            if w != root && self.pebbles[w] > 0 {
                // reverse the path root -> ... -> w
                self.pebbles[w] -= 1;
                let mut cur = w;
                while cur != root {
                    let p = parent[cur];
                    let pos = self.out[p]
                        .iter()
                        .position(|&x| x == cur)
                        .expect("tree edge");
                    self.out[p].swap_remove(pos);
                    self.out[cur].push(p);
                    cur = p;
                }
                self.pebbles[root] += 1;
                return true;
            }
            for &x in &self.out[w] {
                if !seen[x] {
                    seen[x] = true;
                    parent[x] = w;
                    stack.push(x);
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn qv(v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&a| Q.from_i64(a)).collect()
    }

    #[test]
    fn graph_validation() {
        assert_eq!(Graph::new(3, vec![(2, 2)]).unwrap_err(), Error::LoopEdge(2));
        assert_eq!(
            Graph::new(3, vec![(0, 1), (1, 0)]).unwrap_err(),
            Error::DuplicateEdge(1, 0)
        );
        assert!(matches!(
            Graph::new(3, vec![(0, 3)]),
            Err(Error::BadVertex { .. })
        ));
    }

    #[test]
    fn edge_subspace_examples() {
        let s = edge_subspace(Q, 3, 0, 1, 2).unwrap();
        let expected =
            Subspace::from_i64_rows(Q, 6, &[vec![1, -1, 0, 0, 0, 0], vec![0, 0, 0, 1, -1, 0]])
                .unwrap();
        assert_eq!(s, expected);
        let s = edge_subspace(Q, 2, 0, 1, 1).unwrap();
        assert_eq!(s, Subspace::from_i64_rows(Q, 2, &[vec![1, -1]]).unwrap());
        assert!(matches!(
            edge_subspace(Q, 3, 1, 1, 2),
            Err(Error::BadVertex { .. })
        ));
    }

    #[test]
    fn family_shapes() {
        assert_eq!(rigidity_family(&Graph::complete(3), 2, Q).unwrap().len(), 3);
        assert_eq!(rigidity_family(&Graph::path(2), 2, Q).unwrap().len(), 1);
        assert!(rigidity_family(&Graph::new(4, vec![]).unwrap(), 2, Q)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn named_ranks() {
        assert_eq!(rigidity_rank_2d(&Graph::complete(3)).unwrap(), 3);
        assert_eq!(rigidity_rank_2d(&Graph::path(3)).unwrap(), 2);
        assert_eq!(rigidity_rank_2d(&Graph::cycle(4)).unwrap(), 4);
        assert_eq!(rigidity_rank_2d(&Graph::complete(4)).unwrap(), 5);
    }

    #[test]
    fn reports() {
        let opts = RandomizedOptions::default();
        let k3 = rigidity_report(&Graph::complete(3), 2, &opts, SfmBackend::Auto).unwrap();
        assert_eq!((k3.rank, k3.required, k3.rigid, k3.dof), (3, 3, true, 0));
        assert_eq!(k3.method, RankMethod::Deterministic);
        let c4 = rigidity_report(&Graph::cycle(4), 2, &opts, SfmBackend::Auto).unwrap();
        assert_eq!((c4.rank, c4.required, c4.rigid, c4.dof), (4, 5, false, 1));
        let k4 = rigidity_report(&Graph::complete(4), 3, &opts, SfmBackend::Auto).unwrap();
        assert_eq!((k4.rank, k4.required, k4.rigid), (6, 6, true));
        assert_eq!(k4.method, RankMethod::Randomized);
        assert_eq!(
            rigidity_report(&Graph::complete(2), 2, &opts, SfmBackend::Auto).unwrap_err(),
            Error::TooFewVertices { n: 2, t: 2 }
        );
    }

    #[test]
    fn rigidity_rows() {
        let g = Graph::path(2);
        let row = symbolic_rigidity_row(Q, &g, 1, 0, &qv(&[5, 3])).unwrap();
        assert_eq!(row, qv(&[2, -2]));
        let g = Graph::complete(3);
        let row = symbolic_rigidity_row(Q, &g, 2, 0, &qv(&[4, 4, 1, 7, 7, 0])).unwrap();
        assert!(row.iter().all(Scalar::is_zero));
    }

    #[test]
    fn r2_rows_give_rigidity_rows() {
        let g = Graph::complete(3);
        let n = 3;
        let inst = rigidity_r2_instance(&g, Q).unwrap();
        // x_{u,0} in columns 0..n, x_{u,1} in columns n..2n
        let placement = qv(&[2, -1, 5, 3, 0, 7]);
        let point: Vec<Scalar> = placement[n..]
            .iter()
            .cloned()
            .chain(placement[..n].iter().map(|s| Q.neg(s)))
            .collect();
        let m = crate::symbolic::evaluate_r2_matrix(&inst, &point).unwrap();
        for e in 0..g.num_edges() {
            assert_eq!(
                m.row(e),
                symbolic_rigidity_row(Q, &g, 2, e, &placement)
                    .unwrap()
                    .as_slice()
            );
        }
    }

    #[test]
    fn laman_examples() {
        assert!(laman_oracle(&Graph::complete(3)).unwrap());
        assert!(!laman_oracle(&Graph::cycle(4)).unwrap());
        assert!(laman_oracle(&Graph::complete(4)).unwrap());
        assert!(laman_oracle(&Graph::path(2)).unwrap());
        assert!(matches!(
            laman_oracle(&Graph::new(1, vec![]).unwrap()),
            Err(Error::TooFewVertices { .. })
        ));
        // two triangles sharing a vertex: 6 edges on 5 vertices, needs 7
        let bowtie = Graph::new(5, vec![(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        assert!(!laman_oracle(&bowtie).unwrap());
    }
}
