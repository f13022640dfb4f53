//! Independent certificate checker.
//!
//! The verifier recomputes the target from the universe values and the
//! target kind, and checks every term from first principles. Below
//! [`BRUTE_FORCE_EDGES`] edge records, 2-edge-connectivity is decided by
//! deleting each single-copy edge in turn and searching the rest; larger
//! terms use the bridge search from `graph`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use num_traits::{One, Zero};

use crate::certificate::{sha256_hex, Certificate, TargetKind};
use crate::combo::{ratio, Rational, Subgraph, Term};
use crate::error::{Error, Result};
use crate::graph::{is_two_edge_connected, EdgeId, FractionalSolution, MultiGraph, VertexId};

pub const BRUTE_FORCE_EDGES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Clause {
    MultiplierSum,
    MultiplierPositive,
    UnknownEdge,
    Spanning,
    TwoEdgeConnectivity,
    Occurrence,
    CopyBound,
    Target,
    InstanceHash,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::MultiplierSum => "multiplier-sum",
            Clause::MultiplierPositive => "multiplier-positive",
            Clause::UnknownEdge => "unknown-edge",
            Clause::Spanning => "spanning",
            Clause::TwoEdgeConnectivity => "2-edge-connectivity",
            Clause::Occurrence => "occurrence",
            Clause::CopyBound => "copy-bound",
            Clause::Target => "target",
            Clause::InstanceHash => "instance-hash",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    /// `None` for global clauses.
    pub term: Option<usize>,
    pub clause: Clause,
    pub details: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Some(i) => write!(f, "term {i}: {}: {}", self.clause, self.details),
            None => write!(f, "global: {}: {}", self.clause, self.details),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    pub failures: Vec<Failure>,
}

impl Verdict {
    pub fn has(&self, clause: Clause) -> bool {
        self.failures.iter().any(|f| f.clause == clause)
    }
}

/// Edge classes of the universe as the verifier sees them.
struct Universe {
    x: FractionalSolution,
    half: BTreeSet<EdgeId>,
}

fn derived_target(u: &Universe, kind: TargetKind, p: Option<EdgeId>) -> BTreeMap<EdgeId, Rational> {
    u.x.value
        .iter()
        .map(|(&e, v)| {
            let t = match kind {
                TargetKind::P => ratio(4, 5),
                TargetKind::SixFifth => v * ratio(6, 5),
                TargetKind::Q if u.half.contains(&e) => ratio(3, 5),
                TargetKind::Q if Some(e) == p => ratio(4, 5),
                TargetKind::Q => ratio(6, 5),
            };
            (e, t)
        })
        .collect()
}

fn copies_allowed(u: &Universe, kind: TargetKind, p: Option<EdgeId>, e: EdgeId, k: u32) -> bool {
    match kind {
        TargetKind::P => k <= 1,
        _ if u.half.contains(&e) || (kind == TargetKind::Q && Some(e) == p) => k <= 1,
        _ => (1..=2).contains(&k),
    }
}

/// Breadth-first reachability over the term's edges, skipping one record.
fn reaches_all(g: &MultiGraph, edges: &[(EdgeId, VertexId, VertexId)], skip: Option<usize>) -> bool {
    let Some(start) = g.vertices().next() else {
        return true;
    };
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (i, &(_, a, b)) in edges.iter().enumerate() {
        if Some(i) != skip {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
    }
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == g.vertex_count()
}

fn check_term(g: &MultiGraph, i: usize, sub: &Subgraph, failures: &mut Vec<Failure>) {
    let mut edges = Vec::new();
    let mut touched = BTreeSet::new();
    for (e, k) in sub.iter() {
        let Ok(r) = g.edge(e) else {
            failures.push(Failure {
                term: Some(i),
                clause: Clause::UnknownEdge,
                details: format!("{e} is not in the universe"),
            });
            return;
        };
        touched.insert(r.u);
        touched.insert(r.v);
        edges.push((e, r.u, r.v, k));
    }
    if g.vertex_count() > 1 {
        if let Some(v) = g.vertices().find(|v| !touched.contains(v)) {
            failures.push(Failure {
                term: Some(i),
                clause: Clause::Spanning,
                details: format!("{v} is not covered"),
            });
            return;
        }
    }
    let simple_edges: Vec<(EdgeId, VertexId, VertexId)> = edges.iter().map(|&(e, a, b, _)| (e, a, b)).collect();
    if !reaches_all(g, &simple_edges, None) {
        failures.push(Failure {
            term: Some(i),
            clause: Clause::TwoEdgeConnectivity,
            details: "term is disconnected".into(),
        });
        return;
    }
    if edges.len() < BRUTE_FORCE_EDGES {
        for (j, &(e, _, _, k)) in edges.iter().enumerate() {
            if k == 1 && !reaches_all(g, &simple_edges, Some(j)) {
                failures.push(Failure {
                    term: Some(i),
                    clause: Clause::TwoEdgeConnectivity,
                    details: format!("{e} is a bridge"),
                });
                return;
            }
        }
    } else {
        let h = g.spanning(sub).expect("edges checked above");
        if !is_two_edge_connected(&h) {
            failures.push(Failure {
                term: Some(i),
                clause: Clause::TwoEdgeConnectivity,
                details: "term has a bridge".into(),
            });
        }
    }
}

/// Checks a parsed certificate. Parse-level problems are errors; everything
/// else is reported in the verdict.
pub fn verify(cert: &Certificate) -> Result<Verdict> {
    let x = cert.universe_solution()?;
    let stored_target = cert.target_map()?;
    let terms: Vec<Term> = cert.parsed_terms()?;
    let half: BTreeSet<EdgeId> = x
        .value
        .iter()
        .filter(|(_, v)| **v == ratio(1, 2))
        .map(|(e, _)| *e)
        .collect();
    let u = Universe { x, half };
    let g = &u.x.graph;
    let p = cert.p_edge.map(EdgeId);
    if cert.target_kind == TargetKind::Q {
        match p {
            None => return Err(Error::Malformed("Q certificate without p_edge".into())),
            Some(e) if !g.has_edge(e) || u.half.contains(&e) => {
                return Err(Error::Malformed(format!("p_edge {e} is not a 1-edge")))
            }
            _ => {}
        }
    }
    let mut failures = Vec::new();
    let global = |clause, details: String| Failure {
        term: None,
        clause,
        details,
    };

    if sha256_hex(cert.universe.as_bytes()) != cert.instance_hash {
        failures.push(global(Clause::InstanceHash, "hash does not match the universe".into()));
    }
    let target = derived_target(&u, cert.target_kind, p);
    if stored_target != target {
        failures.push(global(
            Clause::Target,
            format!("stored target differs from the {} target of the universe", cert.target_kind),
        ));
    }

    let mut sum = Rational::zero();
    for (i, t) in terms.iter().enumerate() {
        if t.multiplier <= Rational::zero() {
            failures.push(Failure {
                term: Some(i),
                clause: Clause::MultiplierPositive,
                details: format!("multiplier {}", t.multiplier),
            });
        }
        sum += &t.multiplier;
    }
    if sum != Rational::one() {
        failures.push(global(Clause::MultiplierSum, format!("multipliers sum to {sum}")));
    }

    for (i, t) in terms.iter().enumerate() {
        check_term(g, i, &t.subgraph, &mut failures);
        for (e, k) in t.subgraph.iter() {
            if g.has_edge(e) && !copies_allowed(&u, cert.target_kind, p, e, k) {
                failures.push(Failure {
                    term: Some(i),
                    clause: Clause::CopyBound,
                    details: format!("{e} has {k} copies"),
                });
            }
        }
        // zero copies of a 1-edge are a copy-bound violation too
        if cert.target_kind != TargetKind::P {
            for e in g.edge_ids() {
                if t.subgraph.copies(e) == 0 && !copies_allowed(&u, cert.target_kind, p, e, 0) {
                    failures.push(Failure {
                        term: Some(i),
                        clause: Clause::CopyBound,
                        details: format!("{e} is omitted"),
                    });
                }
            }
        }
    }

    let mut occ: BTreeMap<EdgeId, Rational> = g.edge_ids().map(|e| (e, Rational::zero())).collect();
    for t in &terms {
        for (e, k) in t.subgraph.iter() {
            if let Some(o) = occ.get_mut(&e) {
                *o += &t.multiplier * Rational::from_integer(k.into());
            }
        }
    }
    for (e, want) in &target {
        let got = &occ[e];
        if got != want {
            failures.push(global(Clause::Occurrence, format!("{e} occurs {got}, target {want}")));
        }
    }

    Ok(Verdict {
        accepted: failures.is_empty(),
        failures,
    })
}

/// Parses and checks certificate text.
pub fn verify_text(text: &str) -> Result<Verdict> {
    verify(&Certificate::from_json(text)?)
}

/// Whether the cheapest term costs at most `6/5 c·x`, with the index of the
/// cheapest term. The certificate must be of kind `sixfifth`.
pub fn verify_cost_bound(cert: &Certificate, c: &BTreeMap<EdgeId, Rational>) -> Result<(bool, usize)> {
    if cert.target_kind != TargetKind::SixFifth {
        return Err(Error::Precondition("cost bound needs a sixfifth certificate".into()));
    }
    let x = cert.universe_solution()?;
    for e in x.graph.edge_ids() {
        let ce = c.get(&e).ok_or(Error::UnknownEdge(e))?;
        if ce < &Rational::zero() {
            return Err(Error::NegativeCost {
                edge: e,
                cost: ce.to_string(),
            });
        }
    }
    let terms = cert.parsed_terms()?;
    let (best, cost) = terms
        .iter()
        .enumerate()
        .map(|(i, t)| (i, t.subgraph.cost(c)))
        .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
        .ok_or_else(|| Error::Malformed("certificate has no terms".into()))?;
    let bound = x.cost(c)? * ratio(6, 5);
    Ok((cost <= bound, best))
}
