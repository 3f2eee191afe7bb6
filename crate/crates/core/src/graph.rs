//! Simple connected graphs with their symmetric arc sets, torus generators
//! and the classical vertex matrices (A, D, Δ, P).
//!
//! Arcs are stored in CSR layout: the out-arcs of vertex `v` occupy the index
//! range `arc_offsets[v]..arc_offsets[v + 1]`, in the order of that vertex's
//! neighbor list. For graphs built from an edge list neighbors are sorted
//! ascending; the torus builder uses direction order instead.

use std::collections::{BTreeSet, VecDeque};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Arc = usize;

/// The symmetric arc set D(G) with its inversion involution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcSet {
    offsets: Vec<usize>,
    origin: Vec<Vertex>,
    terminus: Vec<Vertex>,
    inverse: Vec<Arc>,
    edge_of: Vec<usize>,
}

impl ArcSet {
    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    pub fn origin(&self, e: Arc) -> Vertex {
        self.origin[e]
    }

    pub fn terminus(&self, e: Arc) -> Vertex {
        self.terminus[e]
    }

    pub fn inverse(&self, e: Arc) -> Arc {
        self.inverse[e]
    }

    pub fn edge_of(&self, e: Arc) -> usize {
        self.edge_of[e]
    }

    /// Out-arcs of `v` in arc order.
    pub fn out_arcs(&self, v: Vertex) -> std::ops::Range<Arc> {
        self.offsets[v]..self.offsets[v + 1]
    }
}

/// A simple connected undirected graph. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<[Vertex; 2]>,
    arcs: ArcSet,
}

impl Graph {
    /// Builds a graph from an edge list; neighbors are visited in ascending order.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut lists = vec![Vec::new(); n];
        let mut seen = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::InvalidGraph(format!("multiple edge {u}-{v}")));
            }
            lists[u].push(v);
            lists[v].push(u);
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        Self::from_neighbor_lists(lists)
    }

    /// Builds a graph whose arc order at each vertex follows the given
    /// neighbor lists exactly. The lists must describe a symmetric relation.
    pub fn from_neighbor_lists(lists: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = lists.len();
        if n == 0 {
            return Err(Error::InvalidGraph("graph has no vertices".into()));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut origin = Vec::new();
        let mut terminus = Vec::new();
        for (v, l) in lists.iter().enumerate() {
            let mut local = BTreeSet::new();
            for &w in l {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
                if w == v {
                    return Err(Error::InvalidGraph(format!("loop at vertex {v}")));
                }
                if !local.insert(w) {
                    return Err(Error::InvalidGraph(format!("multiple edge {v}-{w}")));
                }
                origin.push(v);
                terminus.push(w);
            }
            offsets.push(origin.len());
        }

        let find = |u: Vertex, w: Vertex| -> Option<Arc> {
            (offsets[u]..offsets[u + 1]).find(|&a| terminus[a] == w)
        };
        let mut inverse = vec![usize::MAX; origin.len()];
        let mut edge_of = vec![usize::MAX; origin.len()];
        let mut edges = Vec::new();
        for e in 0..origin.len() {
            let (u, w) = (origin[e], terminus[e]);
            let back = find(w, u).ok_or_else(|| {
                Error::InvalidGraph(format!("neighbor lists are not symmetric at {u}-{w}"))
            })?;
            inverse[e] = back;
            if edge_of[e] == usize::MAX {
                edge_of[e] = edges.len();
                edge_of[back] = edges.len();
                edges.push([u.min(w), u.max(w)]);
            }
        }

        let g = Graph {
            n,
            edges,
            arcs: ArcSet {
                offsets,
                origin,
                terminus,
                inverse,
                edge_of,
            },
        };
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    /// Cycle graph C_n.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs n >= 3, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    /// Complete graph K_n.
    pub fn complete(n: usize) -> Result<Self> {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Self::from_edges(n, &edges)
    }

    /// Path graph on `n` vertices.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `[u, v]` with `u < v`, in order of first appearance in the arc order.
    pub fn edges(&self) -> &[[Vertex; 2]] {
        &self.edges
    }

    pub fn arcs(&self) -> &ArcSet {
        &self.arcs
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.arcs.out_arcs(v).len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.arcs.out_arcs(v).map(move |a| self.arcs.terminus(a))
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.arc_between(u, v).is_some()
    }

    pub fn arc_between(&self, u: Vertex, v: Vertex) -> Option<Arc> {
        self.arcs.out_arcs(u).find(|&a| self.arcs.terminus(a) == v)
    }

    /// Betti number r = m − n + 1.
    pub fn betti_number(&self) -> i64 {
        self.edge_count() as i64 - self.n as i64 + 1
    }

    fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    /// Hop distances from `source`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, source: Vertex) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::from([source]);
        dist[source] = Some(0);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].unwrap_or(0);
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Checks that `map` (old vertex -> new vertex) is an automorphism.
    pub fn is_automorphism(&self, map: &[Vertex]) -> bool {
        if map.len() != self.n {
            return false;
        }
        let image: BTreeSet<_> = map.iter().copied().collect();
        image.len() == self.n
            && self
                .edges
                .iter()
                .all(|&[u, v]| self.has_edge(map[u], map[v]))
    }
}

/// Serialized graph input: `{"n": int, "edges": [[u, v], ...], "rotation": [[...], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInput {
    pub n: usize,
    pub edges: Vec<[Vertex; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<Vertex>>>,
}

impl GraphInput {
    pub fn to_graph(&self) -> Result<Graph> {
        let edges: Vec<_> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::from_edges(self.n, &edges)
    }
}

/// The d-dimensional discrete torus T^d_N.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSpec {
    pub dim: usize,
    pub side: usize,
}

impl TorusSpec {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        if dim < 1 {
            return Err(Error::InvalidDimension(dim));
        }
        if side < 3 {
            return Err(Error::NonSimpleTorus { side });
        }
        Ok(Self { dim, side })
    }

    pub fn vertex_count(&self) -> usize {
        self.side.pow(self.dim as u32)
    }

    /// Number of direction slots, ordered (+e₁, −e₁, …, +e_d, −e_d).
    pub fn slots(&self) -> usize {
        2 * self.dim
    }

    /// Coordinates of a vertex; the first coordinate is the most significant.
    pub fn coords(&self, index: Vertex) -> Vec<usize> {
        let mut c = vec![0; self.dim];
        let mut rest = index;
        for j in (0..self.dim).rev() {
            c[j] = rest % self.side;
            rest /= self.side;
        }
        c
    }

    pub fn index(&self, coords: &[usize]) -> Vertex {
        coords
            .iter()
            .fold(0, |acc, &c| acc * self.side + c % self.side)
    }

    /// Neighbor of `v` across direction slot `slot`.
    pub fn step(&self, v: Vertex, slot: usize) -> Vertex {
        let mut c = self.coords(v);
        let j = slot / 2;
        c[j] = if slot % 2 == 0 {
            (c[j] + 1) % self.side
        } else {
            (c[j] + self.side - 1) % self.side
        };
        self.index(&c)
    }

    /// Vertex map of the translation by `shift`.
    pub fn translation(&self, shift: &[usize]) -> Vec<Vertex> {
        (0..self.vertex_count())
            .map(|v| {
                let c: Vec<_> = self
                    .coords(v)
                    .iter()
                    .zip(shift)
                    .map(|(a, b)| a + b)
                    .collect();
                self.index(&c)
            })
            .collect()
    }
}

/// Builds T^d_N. Arc `v * 2d + slot` leaves `v` in direction `slot`.
pub fn build_torus(spec: TorusSpec) -> Result<Graph> {
    let spec = TorusSpec::new(spec.dim, spec.side)?;
    let lists = (0..spec.vertex_count())
        .map(|v| (0..spec.slots()).map(|s| spec.step(v, s)).collect())
        .collect();
    Graph::from_neighbor_lists(lists)
}

pub fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.vertex_count();
    let mut a = DMatrix::zeros(n, n);
    for &[u, v] in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

pub fn degree_matrix(g: &Graph) -> DMatrix<f64> {
    let d: Vec<f64> = g.degrees().into_iter().map(|d| d as f64).collect();
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
}

/// Δ = D − A.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    degree_matrix(g) - adjacency_matrix(g)
}

/// Simple random walk transition matrix P = D⁻¹A.
pub fn transition_matrix(g: &Graph) -> DMatrix<f64> {
    let mut p = adjacency_matrix(g);
    for v in 0..g.vertex_count() {
        let d = g.degree(v) as f64;
        p.row_mut(v).unscale_mut(d);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_sizes() {
        let g = build_torus(TorusSpec { dim: 2, side: 3 }).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 18));
        let g = build_torus(TorusSpec { dim: 3, side: 3 }).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (27, 81));
        assert!(g.degrees().iter().all(|&d| d == 6));
    }

    #[test]
    fn torus_rejects_small_side_and_dimension() {
        assert_eq!(
            build_torus(TorusSpec { dim: 2, side: 2 }),
            Err(Error::NonSimpleTorus { side: 2 })
        );
        assert_eq!(
            build_torus(TorusSpec { dim: 0, side: 4 }),
            Err(Error::InvalidDimension(0))
        );
    }

    #[test]
    fn torus_arc_order_is_direction_order() {
        let spec = TorusSpec::new(2, 4).unwrap();
        let g = build_torus(spec).unwrap();
        let arcs = g.arcs();
        for v in 0..spec.vertex_count() {
            for s in 0..4 {
                let a = v * 4 + s;
                assert_eq!(arcs.origin(a), v);
                assert_eq!(arcs.terminus(a), spec.step(v, s));
            }
        }
        // (0,0) -> +e1 is (1,0) = index 4
        assert_eq!(arcs.terminus(0), 4);
        assert_eq!(arcs.terminus(1), 12);
    }

    #[test]
    fn torus_translations_are_automorphisms() {
        let spec = TorusSpec::new(2, 5).unwrap();
        let g = build_torus(spec).unwrap();
        for shift in [[1, 0], [0, 1], [2, 3], [4, 4]] {
            assert!(g.is_automorphism(&spec.translation(&shift)));
        }
    }

    #[test]
    fn rejects_non_simple_and_disconnected() {
        assert!(matches!(
            Graph::from_edges(3, &[(0, 0)]),
            Err(Error::InvalidGraph(_))
        ));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0), (1, 2)]),
            Err(Error::InvalidGraph(_))
        ));
        assert_eq!(
            Graph::from_edges(4, &[(0, 1), (2, 3)]),
            Err(Error::Disconnected)
        );
        assert_eq!(
            Graph::from_edges(2, &[(0, 5)]),
            Err(Error::VertexOutOfRange { vertex: 5, n: 2 })
        );
    }

    #[test]
    fn arc_inverse_is_fixed_point_free_involution() {
        for g in [
            Graph::complete(5).unwrap(),
            build_torus(TorusSpec::new(2, 3).unwrap()).unwrap(),
        ] {
            let arcs = g.arcs();
            assert_eq!(arcs.len(), 2 * g.edge_count());
            for e in 0..arcs.len() {
                let f = arcs.inverse(e);
                assert_ne!(e, f);
                assert_eq!(arcs.inverse(f), e);
                assert_eq!(arcs.origin(f), arcs.terminus(e));
                assert_eq!(arcs.edge_of(e), arcs.edge_of(f));
            }
            assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        }
    }

    #[test]
    fn classical_matrices() {
        let c3 = Graph::cycle(3).unwrap();
        let a = adjacency_matrix(&c3);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(a[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
        let k2 = Graph::path(2).unwrap();
        assert_eq!(adjacency_matrix(&k2), DMatrix::from_row_slice(2, 2, &[0., 1., 1., 0.]));

        let t = build_torus(TorusSpec::new(2, 3).unwrap()).unwrap();
        let at = adjacency_matrix(&t);
        assert!(at.row_iter().all(|r| r.sum() == 4.0));
        assert_eq!(transition_matrix(&t), &at / 4.0);

        let lap = laplacian(&Graph::complete(4).unwrap());
        let ones = nalgebra::DVector::from_element(4, 1.0);
        assert_eq!((lap * ones).amax(), 0.0);
    }
}
