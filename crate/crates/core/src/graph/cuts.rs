use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::connectivity::Compact;
use super::{EdgeId, FractionalSolution, MultiGraph, VertexId};
use crate::combo::Rational;
use crate::error::{Error, Result};
use crate::Limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CutKind {
    Bridge,
    TwoEdge,
    ProperThreeEdge,
}

impl CutKind {
    fn size(self) -> usize {
        match self {
            CutKind::Bridge => 1,
            CutKind::TwoEdge => 2,
            CutKind::ProperThreeEdge => 3,
        }
    }
}

/// A minimal edge cut: removing `edges` leaves exactly the two shores, and
/// every cut edge runs between them. `shores.0` holds the least vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutReport {
    pub kind: CutKind,
    pub edges: Vec<EdgeId>,
    pub shores: (BTreeSet<VertexId>, BTreeSet<VertexId>),
}

impl CutReport {
    /// The shore containing `v`.
    pub fn shore_of(&self, v: VertexId) -> &BTreeSet<VertexId> {
        if self.shores.0.contains(&v) {
            &self.shores.0
        } else {
            &self.shores.1
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Every cut of the requested kind, sorted by edge-id tuple.
///
/// Cuts are counted in unit edges, so the graph must have single-copy
/// records. Proper 3-edge cuts additionally require a simple graph.
pub fn find_cuts(g: &MultiGraph, kind: CutKind, limits: &Limits) -> Result<Vec<CutReport>> {
    if !super::is_connected(g) {
        return Err(Error::Precondition("cut enumeration needs a connected graph".into()));
    }
    if g.edges().any(|(_, r)| r.copies != 1) {
        return Err(Error::Precondition("cut enumeration needs single-copy records".into()));
    }
    if kind == CutKind::ProperThreeEdge && !g.is_simple() {
        return Err(Error::Precondition("proper 3-edge cuts need a simple graph".into()));
    }
    let c = Compact::new(g);
    let m = c.ids.len();
    let k = kind.size();
    let work = binomial(m, k);
    if work > limits.cut_enumeration {
        return Err(Error::SizeCap {
            what: "cut enumeration subsets",
            limit: limits.cut_enumeration,
            actual: work,
        });
    }
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    if m < k {
        return Ok(out);
    }
    loop {
        if let Some(report) = cut_for(&c, &pick, kind) {
            out.push(report);
        }
        // next k-combination in lexicographic order
        let mut i = k;
        while i > 0 && pick[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pick[i - 1] += 1;
        for j in i..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    Ok(out)
}

fn cut_for(c: &Compact, pick: &[usize], kind: CutKind) -> Option<CutReport> {
    let (count, label) = c.components(pick);
    if count != 2 {
        return None;
    }
    if pick.iter().any(|&i| {
        let (a, b) = c.ends[i];
        label[a] == label[b]
    }) {
        return None;
    }
    let side = |l: usize| -> BTreeSet<VertexId> {
        (0..c.n).filter(|&v| label[v] == l).map(|v| c.verts[v]).collect()
    };
    let shores = (side(0), side(1));
    if kind == CutKind::ProperThreeEdge && (shores.0.len() < 2 || shores.1.len() < 2) {
        return None;
    }
    Some(CutReport {
        kind,
        edges: pick.iter().map(|&i| c.ids[i]).collect(),
        shores,
    })
}

/// Whether every proper vertex subset has value-weighted cut at least 2.
pub fn cut_feasibility(x: &FractionalSolution, limits: &Limits) -> Result<bool> {
    let g = &x.graph;
    let n = g.vertex_count();
    if n > limits.feasibility_max_vertices {
        return Err(Error::SizeCap {
            what: "vertices for cut feasibility",
            limit: limits.feasibility_max_vertices,
            actual: n,
        });
    }
    if n <= 1 {
        return Ok(true);
    }
    let c = Compact::new(g);
    // scale to integers over a common denominator
    let denom = x
        .value
        .values()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let weights: Option<Vec<u64>> = c
        .ids
        .iter()
        .map(|e| (x.value(*e).numer() * (&denom / x.value(*e).denom())).to_u64())
        .collect();
    let need = Rational::from_integer(BigInt::from(2));
    let total_subsets = 1u64 << (n - 1);
    match (weights, (&denom * 2u32).to_u64()) {
        (Some(w), Some(two)) => {
            for mask in 1..total_subsets {
                // vertex n-1 always on the far side
                let mut cut = 0u64;
                for (i, &(a, b)) in c.ends.iter().enumerate() {
                    if (mask >> a & 1) != (mask >> b & 1) {
                        cut += w[i];
                    }
                }
                if cut < two {
                    return Ok(false);
                }
            }
        }
        _ => {
            for mask in 1..total_subsets {
                let mut cut = Rational::from_integer(BigInt::from(0));
                for (i, &(a, b)) in c.ends.iter().enumerate() {
                    if (mask >> a & 1) != (mask >> b & 1) {
                        cut += x.value(c.ids[i]);
                    }
                }
                if cut < need {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
