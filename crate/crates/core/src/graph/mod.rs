//! Multigraphs with stable edge identities.
//!
//! Vertices and edges are addressed by small integer newtypes. Every edge
//! record carries a copy count, so a doubled edge is one record with
//! `copies == 2`; genuinely parallel edges are distinct records.

mod connectivity;
mod cuts;
mod halftri;
pub mod text;
mod transform;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combo::Rational;
use crate::error::{Error, Result};

pub use connectivity::{bridges, is_connected, is_two_edge_connected, is_three_edge_connected};
pub use cuts::{cut_feasibility, find_cuts, CutKind, CutReport};
pub use halftri::{validate_half_triangle, HalfTriangleStructure, OnePath};
pub use transform::{contract_shore, reduce_edge, suppress_vertex, Provenance, ReductionContext};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One edge record. Endpoints are stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRec {
    pub u: VertexId,
    pub v: VertexId,
    pub copies: u32,
}

impl EdgeRec {
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, EdgeRec>,
    incidence: BTreeMap<VertexId, BTreeSet<EdgeId>>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices `0..n` with the given `(u, v)` edges numbered in order.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = MultiGraph::new();
        for v in 0..n {
            g.add_vertex(VertexId(v));
        }
        for (i, &(u, v)) in edges.iter().enumerate() {
            g.add_edge(EdgeId(i as u32), VertexId(u), VertexId(v), 1)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
        self.incidence.entry(v).or_default();
    }

    pub fn add_edge(&mut self, id: EdgeId, a: VertexId, b: VertexId, copies: u32) -> Result<()> {
        if a == b {
            return Err(Error::Precondition(format!("self-loop at {a} for {id}")));
        }
        if copies == 0 {
            return Err(Error::Precondition(format!("{id} has zero copies")));
        }
        if self.edges.contains_key(&id) {
            return Err(Error::Precondition(format!("duplicate edge id {id}")));
        }
        for w in [a, b] {
            if !self.vertices.contains(&w) {
                return Err(Error::UnknownVertex(w));
            }
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges.insert(id, EdgeRec { u, v, copies });
        self.incidence.get_mut(&u).unwrap().insert(id);
        self.incidence.get_mut(&v).unwrap().insert(id);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<EdgeRec> {
        let rec = self.edges.remove(&id).ok_or(Error::UnknownEdge(id))?;
        self.incidence.get_mut(&rec.u).unwrap().remove(&id);
        self.incidence.get_mut(&rec.v).unwrap().remove(&id);
        Ok(rec)
    }

    /// Removes a vertex together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Vec<EdgeId>> {
        let inc = self.incidence.remove(&v).ok_or(Error::UnknownVertex(v))?;
        self.vertices.remove(&v);
        for &e in &inc {
            let rec = self.edges.remove(&e).unwrap();
            let w = rec.other(v);
            self.incidence.get_mut(&w).unwrap().remove(&e);
        }
        Ok(inc.into_iter().collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, &EdgeRec)> + '_ {
        self.edges.iter().map(|(&id, rec)| (id, rec))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edge(&self, id: EdgeId) -> Result<&EdgeRec> {
        self.edges.get(&id).ok_or(Error::UnknownEdge(id))
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.edges.contains_key(&id)
    }

    /// Incident edge ids of `v`, ascending.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.incidence.get(&v).into_iter().flatten().copied()
    }

    /// Degree counting copies.
    pub fn degree(&self, v: VertexId) -> u32 {
        self.incident(v).map(|e| self.edges[&e].copies).sum()
    }

    /// Neighbours of `v` in incident-edge order (with repetition for parallel records).
    pub fn neighbours(&self, v: VertexId) -> Vec<VertexId> {
        self.incident(v).map(|e| self.edges[&e].other(v)).collect()
    }

    /// Records joining `a` and `b`.
    pub fn edges_between(&self, a: VertexId, b: VertexId) -> Vec<EdgeId> {
        self.incident(a)
            .filter(|e| self.edges[e].other(a) == b)
            .collect()
    }

    pub fn next_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().next_back().map_or(0, |e| e.0 + 1))
    }

    pub fn next_vertex_id(&self) -> VertexId {
        VertexId(self.vertices.iter().next_back().map_or(0, |v| v.0 + 1))
    }

    pub fn is_cubic(&self) -> bool {
        self.vertices.iter().all(|&v| self.degree(v) == 3)
    }

    /// No two records share endpoints and every record has one copy.
    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .values()
            .all(|r| r.copies == 1 && seen.insert((r.u, r.v)))
    }

    /// Subgraph induced by `keep`, with edge ids preserved.
    pub fn induced(&self, keep: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = MultiGraph::new();
        for &v in keep {
            g.add_vertex(v);
        }
        for (&id, r) in &self.edges {
            if keep.contains(&r.u) && keep.contains(&r.v) {
                g.add_edge(id, r.u, r.v, r.copies).unwrap();
            }
        }
        g
    }

    /// Spanning multi-subgraph with the copy counts of `sub`; edges absent
    /// from `sub` are dropped.
    pub fn spanning(&self, sub: &crate::combo::Subgraph) -> Result<MultiGraph> {
        let mut g = MultiGraph::new();
        for &v in &self.vertices {
            g.add_vertex(v);
        }
        for (e, c) in sub.iter() {
            let r = self.edge(e)?;
            g.add_edge(e, r.u, r.v, c)?;
        }
        Ok(g)
    }

    /// Graph with every copy count reset to one.
    pub fn support(&self) -> MultiGraph {
        let mut g = self.clone();
        for r in g.edges.values_mut() {
            r.copies = 1;
        }
        g
    }
}

/// An LP point: a value in `(0, 1]` on every edge of its support graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalSolution {
    pub graph: MultiGraph,
    pub value: BTreeMap<EdgeId, Rational>,
}

impl FractionalSolution {
    pub fn new(graph: MultiGraph, value: BTreeMap<EdgeId, Rational>) -> Result<Self> {
        use num_traits::{One, Zero};
        for (id, rec) in graph.edges() {
            let x = value.get(&id).ok_or(Error::UnknownEdge(id))?;
            if x <= &Rational::zero() || x > &Rational::one() {
                return Err(Error::Precondition(format!("value {x} on {id} outside (0, 1]")));
            }
            if rec.copies != 1 {
                return Err(Error::Precondition(format!("{id} has {} copies", rec.copies)));
            }
        }
        if value.len() != graph.edge_count() {
            let stray = value.keys().find(|e| !graph.has_edge(**e)).unwrap();
            return Err(Error::UnknownEdge(*stray));
        }
        Ok(FractionalSolution { graph, value })
    }

    pub fn value(&self, e: EdgeId) -> &Rational {
        &self.value[&e]
    }

    pub fn is_half_integer(&self) -> bool {
        let half = crate::combo::ratio(1, 2);
        self.value
            .values()
            .all(|x| *x == half || *x == Rational::from_integer(1.into()))
    }

    /// Sum of values at `v`.
    pub fn vertex_sum(&self, v: VertexId) -> Rational {
        self.graph
            .incident(v)
            .map(|e| self.value[&e].clone())
            .sum()
    }

    pub fn is_degree_tight(&self) -> bool {
        let two = Rational::from_integer(2.into());
        self.graph.vertices().all(|v| self.vertex_sum(v) == two)
    }

    /// `c . x` for a cost map covering every edge.
    pub fn cost(&self, c: &BTreeMap<EdgeId, Rational>) -> Result<Rational> {
        self.value
            .iter()
            .map(|(e, x)| c.get(e).map(|ce| ce * x).ok_or(Error::UnknownEdge(*e)))
            .sum()
    }
}
