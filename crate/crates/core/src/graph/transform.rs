use std::collections::{BTreeMap, BTreeSet};

use super::{is_connected, is_three_edge_connected, CutKind, EdgeId, MultiGraph, VertexId};
use crate::error::{Error, Result};
use crate::Limits;

/// Edge-id bookkeeping for a structural transform.
///
/// `kept` ids appear unchanged in the result, `removed` ids vanish, and each
/// `created` id replaces the listed old ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub kept: BTreeSet<EdgeId>,
    pub removed: BTreeSet<EdgeId>,
    pub created: BTreeMap<EdgeId, Vec<EdgeId>>,
}

impl Provenance {
    /// Ids of the graph before the transform.
    pub fn original_ids(&self) -> BTreeSet<EdgeId> {
        self.kept.union(&self.removed).copied().collect()
    }

    /// Ids of the graph after the transform.
    pub fn result_ids(&self) -> BTreeSet<EdgeId> {
        self.kept
            .iter()
            .copied()
            .chain(self.created.keys().copied())
            .collect()
    }
}

/// What an edge reduction removed and created. Endpoint `u` is the lower id
/// of the reduced edge; `a < b` are its other neighbours and `c < d` those
/// of `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionContext {
    pub u: VertexId,
    pub v: VertexId,
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
    pub uv: EdgeId,
    pub au: EdgeId,
    pub bu: EdgeId,
    pub vc: EdgeId,
    pub vd: EdgeId,
    pub ab: EdgeId,
    pub cd: EdgeId,
    pub provenance: Provenance,
}

/// Deletes both ends of `uv` and joins their remaining neighbours in pairs.
pub fn reduce_edge(
    g: &MultiGraph,
    uv: EdgeId,
    limits: &Limits,
) -> Result<(MultiGraph, ReductionContext)> {
    if g.vertex_count() <= 4 {
        return Err(Error::Precondition(format!(
            "edge reduction needs more than 4 vertices, got {}",
            g.vertex_count()
        )));
    }
    if !g.is_cubic() || !g.is_simple() || !is_three_edge_connected(g) {
        return Err(Error::Precondition(
            "edge reduction needs a simple cubic 3-edge-connected graph".into(),
        ));
    }
    if !super::find_cuts(g, CutKind::ProperThreeEdge, limits)?.is_empty() {
        return Err(Error::Precondition("graph has a proper 3-edge cut".into()));
    }
    let rec = *g.edge(uv)?;
    let (u, v) = (rec.u, rec.v);
    let others = |w: VertexId| -> Vec<(VertexId, EdgeId)> {
        let mut out: Vec<_> = g
            .incident(w)
            .filter(|&e| e != uv)
            .map(|e| (g.edge(e).unwrap().other(w), e))
            .collect();
        out.sort();
        out
    };
    let (nu, nv) = (others(u), others(v));
    let (a, au) = nu[0];
    let (b, bu) = nu[1];
    let (c, vc) = nv[0];
    let (d, vd) = nv[1];
    let distinct: BTreeSet<_> = [a, b, c, d].into_iter().collect();
    if distinct.len() != 4 {
        return Err(Error::Precondition(format!(
            "neighbours of {uv} are not all distinct"
        )));
    }
    let mut h = g.clone();
    h.remove_vertex(u)?;
    h.remove_vertex(v)?;
    let ab = g.next_edge_id();
    let cd = EdgeId(ab.0 + 1);
    h.add_edge(ab, a, b, 1)?;
    h.add_edge(cd, c, d, 1)?;

    if !h.is_cubic() || !h.is_simple() || !is_three_edge_connected(&h) {
        return Err(Error::Structure(format!(
            "reducing {uv} did not give a simple cubic 3-edge-connected graph"
        )));
    }
    let removed: BTreeSet<EdgeId> = [uv, au, bu, vc, vd].into_iter().collect();
    let provenance = Provenance {
        kept: g.edge_ids().filter(|e| !removed.contains(e)).collect(),
        removed,
        created: [(ab, vec![au, bu]), (cd, vec![vc, vd])].into_iter().collect(),
    };
    Ok((
        h,
        ReductionContext {
            u,
            v,
            a,
            b,
            c,
            d,
            uv,
            au,
            bu,
            vc,
            vd,
            ab,
            cd,
            provenance,
        },
    ))
}

/// Replaces `shore` by a single fresh vertex. Cut edges keep their ids and
/// now end at the new vertex; edges inside the shore are dropped.
pub fn contract_shore(
    g: &MultiGraph,
    shore: &BTreeSet<VertexId>,
) -> Result<(MultiGraph, VertexId, Provenance)> {
    if shore.is_empty() || shore.len() >= g.vertex_count() {
        return Err(Error::Precondition("shore must be a nonempty proper subset".into()));
    }
    if let Some(&w) = shore.iter().find(|w| !g.has_vertex(**w)) {
        return Err(Error::UnknownVertex(w));
    }
    let rest: BTreeSet<VertexId> = g.vertices().filter(|v| !shore.contains(v)).collect();
    if !is_connected(&g.induced(shore)) || !is_connected(&g.induced(&rest)) {
        return Err(Error::Precondition(
            "shore and complement must both induce connected subgraphs".into(),
        ));
    }
    let crossing: Vec<EdgeId> = g
        .edges()
        .filter(|(_, r)| shore.contains(&r.u) != shore.contains(&r.v))
        .map(|(e, _)| e)
        .collect();
    let cut_size: u32 = crossing.iter().map(|e| g.edge(*e).unwrap().copies).sum();
    if !(2..=3).contains(&cut_size) {
        return Err(Error::Precondition(format!(
            "contraction expects a 2- or 3-edge cut, found {cut_size} edges"
        )));
    }
    let pseudo = g.next_vertex_id();
    let mut h = g.induced(&rest);
    h.add_vertex(pseudo);
    for &e in &crossing {
        let r = g.edge(e)?;
        let outside = if shore.contains(&r.u) { r.v } else { r.u };
        h.add_edge(e, outside, pseudo, r.copies)?;
    }
    let removed: BTreeSet<EdgeId> = g
        .edges()
        .filter(|(_, r)| shore.contains(&r.u) && shore.contains(&r.v))
        .map(|(e, _)| e)
        .collect();
    let provenance = Provenance {
        kept: g.edge_ids().filter(|e| !removed.contains(e)).collect(),
        removed,
        created: BTreeMap::new(),
    };
    debug_assert_eq!(h.degree(pseudo), cut_size);
    Ok((h, pseudo, provenance))
}

/// Removes a degree-2 vertex and joins its two neighbours by a fresh edge.
pub fn suppress_vertex(g: &MultiGraph, w: VertexId) -> Result<(MultiGraph, EdgeId, Provenance)> {
    let inc: Vec<EdgeId> = g.incident(w).collect();
    if inc.len() != 2 || g.degree(w) != 2 {
        return Err(Error::Precondition(format!("{w} does not have degree 2")));
    }
    let x = g.edge(inc[0])?.other(w);
    let y = g.edge(inc[1])?.other(w);
    if x == y {
        return Err(Error::Precondition(format!(
            "suppressing {w} would create a self-loop"
        )));
    }
    let fresh = g.next_edge_id();
    let mut h = g.clone();
    h.remove_vertex(w)?;
    h.add_edge(fresh, x, y, 1)?;
    let removed: BTreeSet<EdgeId> = inc.iter().copied().collect();
    let provenance = Provenance {
        kept: g.edge_ids().filter(|e| !removed.contains(e)).collect(),
        removed,
        created: [(fresh, inc)].into_iter().collect(),
    };
    Ok((h, fresh, provenance))
}
