use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeId, FractionalSolution, MultiGraph, VertexId};
use crate::combo::{ratio, Rational};
use crate::error::{Error, HalfTriangleClause, Result};

/// A maximal path of value-1 edges between two triangle vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePath {
    /// End vertices, lower id first; `edges` run from `ends.0` to `ends.1`.
    pub ends: (VertexId, VertexId),
    pub edges: Vec<EdgeId>,
    /// The single edge standing for this path in the simple form.
    pub simple_edge: EdgeId,
}

/// Recognized structure of a half-triangle solution.
#[derive(Clone, Debug)]
pub struct HalfTriangleStructure {
    pub solution: FractionalSolution,
    /// Vertex-disjoint triangles of half-edges, each sorted, ordered by least vertex.
    pub triangles: Vec<[VertexId; 3]>,
    pub one_paths: Vec<OnePath>,
    /// Cubic graph with vertex `i` standing for `triangles[i]`; its edges are
    /// the simple-form 1-edges.
    pub shrunken: MultiGraph,
    /// Every 1-path replaced by one 1-edge. Half-edges and length-1 paths
    /// keep their ids; longer paths get fresh ids.
    pub simple: FractionalSolution,
    pub triangle_of: BTreeMap<VertexId, usize>,
}

fn fail<T>(clause: HalfTriangleClause, details: String) -> Result<T> {
    Err(Error::NotHalfTriangle { clause, details })
}

pub fn validate_half_triangle(x: &FractionalSolution) -> Result<HalfTriangleStructure> {
    let g = &x.graph;
    let half = ratio(1, 2);
    let one = ratio(1, 1);
    if let Some((e, val)) = x.value.iter().find(|(_, v)| **v != half && **v != one) {
        return fail(
            HalfTriangleClause::NotHalfInteger,
            format!("{e} has value {val}"),
        );
    }
    let two = ratio(2, 1);
    for v in g.vertices() {
        let s = x.vertex_sum(v);
        if s != two {
            return fail(
                HalfTriangleClause::NotDegreeTight,
                format!("{v} has value sum {s}"),
            );
        }
    }

    let is_half = |e: EdgeId| x.value[&e] == half;
    let half_at = |v: VertexId| -> Vec<EdgeId> { g.incident(v).filter(|&e| is_half(e)).collect() };

    // half-edges must form vertex-disjoint triangles
    let mut triangles: Vec<[VertexId; 3]> = Vec::new();
    let mut triangle_of: BTreeMap<VertexId, usize> = BTreeMap::new();
    for v in g.vertices() {
        let hv = half_at(v);
        if hv.is_empty() || triangle_of.contains_key(&v) {
            continue;
        }
        if hv.len() != 2 {
            return fail(
                HalfTriangleClause::HalfEdgesNotTriangles,
                format!("{v} meets {} half-edges", hv.len()),
            );
        }
        let a = g.edge(hv[0])?.other(v);
        let b = g.edge(hv[1])?.other(v);
        let closes = a != b && {
            let ha = half_at(a);
            let hb = half_at(b);
            ha.len() == 2
                && hb.len() == 2
                && ha.iter().any(|e| hb.contains(e) && g.edge(*e).unwrap().touches(b))
        };
        if !closes {
            return fail(
                HalfTriangleClause::HalfEdgesNotTriangles,
                format!("half-edges at {v} do not close a triangle"),
            );
        }
        let mut t = [v, a, b];
        t.sort();
        let idx = triangles.len();
        for w in t {
            triangle_of.insert(w, idx);
        }
        triangles.push(t);
    }
    if triangles.is_empty() {
        return fail(HalfTriangleClause::PathStructure, "no half-triangles".into());
    }

    // walk 1-paths out of every triangle vertex
    let one_at = |v: VertexId| -> Vec<EdgeId> { g.incident(v).filter(|&e| !is_half(e)).collect() };
    let mut visited_edges: BTreeSet<EdgeId> = BTreeSet::new();
    let mut visited_inner: BTreeSet<VertexId> = BTreeSet::new();
    let mut raw_paths: Vec<((VertexId, VertexId), Vec<EdgeId>)> = Vec::new();
    for (&start, _) in &triangle_of {
        let first = one_at(start);
        if first.len() != 1 {
            return fail(
                HalfTriangleClause::PathStructure,
                format!("triangle vertex {start} meets {} 1-edges", first.len()),
            );
        }
        if visited_edges.contains(&first[0]) {
            continue;
        }
        let mut path = vec![first[0]];
        visited_edges.insert(first[0]);
        let mut at = g.edge(first[0])?.other(start);
        while !triangle_of.contains_key(&at) {
            visited_inner.insert(at);
            let next: Vec<EdgeId> = one_at(at)
                .into_iter()
                .filter(|e| !visited_edges.contains(e))
                .collect();
            if next.len() != 1 {
                return fail(
                    HalfTriangleClause::PathStructure,
                    format!("1-path through {at} does not continue"),
                );
            }
            visited_edges.insert(next[0]);
            path.push(next[0]);
            at = g.edge(next[0])?.other(at);
        }
        if triangle_of[&at] == triangle_of[&start] {
            return fail(
                HalfTriangleClause::PathStructure,
                format!("1-path from {start} returns to its own triangle"),
            );
        }
        raw_paths.push(((start, at), path));
    }
    if let Some(v) = g
        .vertices()
        .find(|v| !triangle_of.contains_key(v) && !visited_inner.contains(v))
    {
        return fail(
            HalfTriangleClause::PathStructure,
            format!("{v} lies on a 1-cycle away from every triangle"),
        );
    }
    raw_paths.sort();

    // simple form and shrunken graph
    let mut simple_graph = MultiGraph::new();
    for &v in triangle_of.keys() {
        simple_graph.add_vertex(v);
    }
    let mut simple_value: BTreeMap<EdgeId, Rational> = BTreeMap::new();
    for (e, r) in g.edges() {
        if is_half(e) {
            simple_graph.add_edge(e, r.u, r.v, 1)?;
            simple_value.insert(e, half.clone());
        }
    }
    let mut shrunken = MultiGraph::new();
    for i in 0..triangles.len() {
        shrunken.add_vertex(VertexId(i as u32));
    }
    let mut fresh = g.next_edge_id();
    let mut one_paths = Vec::with_capacity(raw_paths.len());
    for (ends, edges) in raw_paths {
        let simple_edge = if edges.len() == 1 {
            edges[0]
        } else {
            let id = fresh;
            fresh = EdgeId(fresh.0 + 1);
            id
        };
        simple_graph.add_edge(simple_edge, ends.0, ends.1, 1)?;
        simple_value.insert(simple_edge, one.clone());
        shrunken.add_edge(
            simple_edge,
            VertexId(triangle_of[&ends.0] as u32),
            VertexId(triangle_of[&ends.1] as u32),
            1,
        )?;
        one_paths.push(OnePath {
            ends,
            edges,
            simple_edge,
        });
    }
    debug_assert!(shrunken.is_cubic());
    let simple = FractionalSolution::new(simple_graph, simple_value)?;
    Ok(HalfTriangleStructure {
        solution: x.clone(),
        triangles,
        one_paths,
        shrunken,
        simple,
        triangle_of,
    })
}

impl HalfTriangleStructure {
    /// All 1-paths have length one.
    pub fn is_simple(&self) -> bool {
        self.one_paths.iter().all(|p| p.edges.len() == 1)
    }

    pub fn is_half_edge(&self, e: EdgeId) -> bool {
        self.simple.value.get(&e) == Some(&ratio(1, 2))
    }

    /// Simple-form 1-edge ids, ascending.
    pub fn one_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.one_paths.iter().map(|p| p.simple_edge).collect();
        out.sort();
        out
    }

    pub fn path_of(&self, simple_edge: EdgeId) -> Option<&OnePath> {
        self.one_paths.iter().find(|p| p.simple_edge == simple_edge)
    }

    /// The simple 1-edge whose path contains the original edge `e`.
    pub fn simple_edge_containing(&self, e: EdgeId) -> Option<EdgeId> {
        self.one_paths
            .iter()
            .find(|p| p.edges.contains(&e))
            .map(|p| p.simple_edge)
    }

    /// The simple-form 1-edge at triangle vertex `v`.
    pub fn one_edge_at(&self, v: VertexId) -> EdgeId {
        self.simple
            .graph
            .incident(v)
            .find(|e| !self.is_half_edge(*e))
            .expect("triangle vertex has a 1-edge")
    }

    /// Half-edge joining two vertices of one triangle.
    pub fn half_edge_between(&self, a: VertexId, b: VertexId) -> EdgeId {
        self.simple
            .graph
            .edges_between(a, b)
            .into_iter()
            .find(|e| self.is_half_edge(*e))
            .expect("triangle vertices are joined by a half-edge")
    }
}
