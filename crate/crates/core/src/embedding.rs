//! Orientable embeddings encoded as rotation systems.
//!
//! Faces are the orbits of `next(e) = σ_{t(e)}(e⁻¹)`, the rotation-successor
//! of the inverse arc at the head of `e`. Each face starts at its smallest
//! arc index and faces are listed in order of their starting arc.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{build_torus, Arc, Graph, TorusSpec, Vertex};

/// Cyclic order of the out-arcs around each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<Arc>>,
    successor: Vec<Arc>,
}

impl RotationSystem {
    pub fn from_arcs(g: &Graph, order: Vec<Vec<Arc>>) -> Result<Self> {
        let arcs = g.arcs();
        if order.len() != g.vertex_count() {
            return Err(Error::InvalidRotation(format!(
                "{} vertex lists for {} vertices",
                order.len(),
                g.vertex_count()
            )));
        }
        let mut successor = vec![usize::MAX; arcs.len()];
        for (v, cyc) in order.iter().enumerate() {
            let expected: BTreeSet<Arc> = arcs.out_arcs(v).collect();
            let got: BTreeSet<Arc> = cyc.iter().copied().collect();
            if got.len() != cyc.len() || got != expected {
                return Err(Error::InvalidRotation(format!(
                    "rotation at vertex {v} is not a permutation of its out-arcs"
                )));
            }
            for (i, &a) in cyc.iter().enumerate() {
                successor[a] = cyc[(i + 1) % cyc.len()];
            }
        }
        Ok(Self { order, successor })
    }

    /// Rotation given as neighbor vertices in cyclic order.
    pub fn from_neighbors(g: &Graph, lists: &[Vec<Vertex>]) -> Result<Self> {
        if lists.len() != g.vertex_count() {
            return Err(Error::InvalidRotation(format!(
                "{} vertex lists for {} vertices",
                lists.len(),
                g.vertex_count()
            )));
        }
        let order = lists
            .iter()
            .enumerate()
            .map(|(v, l)| {
                l.iter()
                    .map(|&w| {
                        g.arc_between(v, w).ok_or_else(|| {
                            Error::InvalidRotation(format!("{v}-{w} is not an edge"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_arcs(g, order)
    }

    /// Out-arcs in arc order at every vertex.
    pub fn arc_order(g: &Graph) -> Self {
        let order = (0..g.vertex_count())
            .map(|v| g.arcs().out_arcs(v).collect())
            .collect();
        Self::from_arcs(g, order).expect("arc order is a valid rotation")
    }

    pub fn at(&self, v: Vertex) -> &[Arc] {
        &self.order[v]
    }

    pub fn successor(&self, e: Arc) -> Arc {
        self.successor[e]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    arcs: Vec<Arc>,
    vertices: Vec<Vertex>,
}

impl Face {
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Boundary vertices in traversal order (origins of the arcs).
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// A face is bounded by a cycle when it has at least three arcs and
    /// never revisits a vertex.
    pub fn is_cycle(&self) -> bool {
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        self.arcs.len() >= 3 && distinct.len() == self.vertices.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    graph: Graph,
    rotation: RotationSystem,
    faces: Vec<Face>,
    face_of_arc: Vec<usize>,
    genus: usize,
}

impl EmbeddedGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self) -> &RotationSystem {
        &self.rotation
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn face_of_arc(&self, e: Arc) -> usize {
        self.face_of_arc[e]
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// n − m + k.
    pub fn euler_characteristic(&self) -> i64 {
        self.graph.vertex_count() as i64 - self.graph.edge_count() as i64
            + self.faces.len() as i64
    }

    /// Face boundaries as vertex cycles, for reporting.
    pub fn face_report(&self) -> Vec<Vec<Vertex>> {
        self.faces.iter().map(|f| f.vertices.clone()).collect()
    }
}

/// Traces the faces of `rot` and validates the Euler formula.
pub fn trace_faces(g: &Graph, rot: &RotationSystem) -> Result<EmbeddedGraph> {
    let arcs = g.arcs();
    if rot.successor.len() != arcs.len() {
        return Err(Error::InvalidRotation(
            "rotation system belongs to a different graph".into(),
        ));
    }
    let next = |e: Arc| rot.successor(arcs.inverse(e));
    let mut face_of_arc = vec![usize::MAX; arcs.len()];
    let mut faces = Vec::new();
    for start in 0..arcs.len() {
        if face_of_arc[start] != usize::MAX {
            continue;
        }
        let id = faces.len();
        let mut face_arcs = Vec::new();
        let mut e = start;
        loop {
            face_of_arc[e] = id;
            face_arcs.push(e);
            e = next(e);
            if e == start {
                break;
            }
            if face_of_arc[e] != usize::MAX {
                return Err(Error::InvalidRotation(format!(
                    "face tracing from arc {start} entered another face"
                )));
            }
        }
        let vertices = face_arcs.iter().map(|&a| arcs.origin(a)).collect();
        faces.push(Face {
            arcs: face_arcs,
            vertices,
        });
    }

    let chi =
        g.vertex_count() as i64 - g.edge_count() as i64 + faces.len() as i64;
    let twice_genus = 2 - chi;
    if twice_genus < 0 || twice_genus % 2 != 0 {
        return Err(Error::InvalidEmbedding(format!(
            "Euler characteristic {chi} gives no nonnegative integer genus"
        )));
    }
    Ok(EmbeddedGraph {
        graph: g.clone(),
        rotation: rot.clone(),
        faces,
        face_of_arc,
        genus: (twice_genus / 2) as usize,
    })
}

/// T²_N on the torus with rotation (+e₁, +e₂, −e₁, −e₂) at every vertex.
pub fn torus_embedding(side: usize) -> Result<EmbeddedGraph> {
    let spec = TorusSpec::new(2, side)?;
    let g = build_torus(spec)?;
    // arc v*4 + slot, slots ordered (+e1, −e1, +e2, −e2)
    let order = (0..spec.vertex_count())
        .map(|v| [0, 2, 1, 3].iter().map(|s| v * 4 + s).collect())
        .collect();
    let rot = RotationSystem::from_arcs(&g, order)?;
    trace_faces(&g, &rot)
}

/// Cycle C_n drawn on the sphere: two n-gon faces.
pub fn cycle_embedding(n: usize) -> Result<EmbeddedGraph> {
    let g = Graph::cycle(n)?;
    let rot = RotationSystem::arc_order(&g);
    trace_faces(&g, &rot)
}

pub fn is_circular(emb: &EmbeddedGraph) -> bool {
    emb.faces.iter().all(Face::is_cycle)
}

pub fn require_circular(emb: &EmbeddedGraph) -> Result<()> {
    match emb.faces.iter().position(|f| !f.is_cycle()) {
        Some(face) => Err(Error::NonCircular { face }),
        None => Ok(()),
    }
}

/// Faces become vertices, joined once per shared primal edge.
pub fn dual_graph(emb: &EmbeddedGraph) -> Result<Graph> {
    require_circular(emb)?;
    let g = &emb.graph;
    let arcs = g.arcs();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (idx, &[u, v]) in g.edges().iter().enumerate() {
        let a = g.arc_between(u, v).expect("edge arcs exist");
        let (f, h) = (emb.face_of_arc(a), emb.face_of_arc(arcs.inverse(a)));
        if f == h {
            return Err(Error::NonSimpleDual(format!(
                "edge {idx} has face {f} on both sides"
            )));
        }
        if !seen.insert((f.min(h), f.max(h))) {
            return Err(Error::NonSimpleDual(format!(
                "faces {f} and {h} share more than one edge"
            )));
        }
        edges.push((f, h));
    }
    Graph::from_edges(emb.face_count(), &edges)
}

/// For a face of the torus embedding, the grid vertex c with
/// boundary {c, c+e₁, c+e₂, c+e₁+e₂}.
pub fn torus_face_corner(spec: TorusSpec, face: &Face) -> Option<Vertex> {
    let set: BTreeSet<_> = face.vertices().iter().copied().collect();
    set.iter().copied().find(|&c| {
        let right = spec.step(c, 0);
        let up = spec.step(c, 2);
        set.len() == 4
            && set.contains(&right)
            && set.contains(&up)
            && set.contains(&spec.step(right, 2))
    })
}
