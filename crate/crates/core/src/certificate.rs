//! JSON certificates.
//!
//! A certificate carries the universe in the graph text format, the target
//! vector, the terms and a run manifest. All numbers are exact rational
//! literals. Field order is fixed, so equal inputs serialize to equal bytes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combo::{parse_rational, ConvexCombination, Rational, Subgraph, Term};
use crate::error::{Error, Result};
use crate::graph::text::{parse_graph, write_graph};
use crate::graph::{EdgeId, FractionalSolution};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TargetKind {
    /// Every edge at `4/5`, simple terms.
    P,
    /// Half-edges `3/5`, `p` at `4/5`, other 1-edges `6/5`.
    Q,
    /// `6/5` times the universe values.
    #[serde(rename = "sixfifth")]
    SixFifth,
}

impl fmt::Display for TargetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TargetKind::P => "P",
            TargetKind::Q => "Q",
            TargetKind::SixFifth => "sixfifth",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertTerm {
    pub multiplier: String,
    /// `[edge id, copies]` pairs, ascending by id.
    pub edges: Vec<(u32, u32)>,
}

/// Provenance of a run. Wall-clock timing is reported on stderr instead, so
/// that certificates stay byte-identical across runs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub input_hashes: BTreeMap<String, String>,
    pub caps: BTreeMap<String, usize>,
    pub seed: Option<u64>,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: u32,
    pub target_kind: TargetKind,
    /// Hex SHA-256 of `universe`.
    pub instance_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_edge: Option<u32>,
    /// Universe graph with its values, in the graph text format.
    pub universe: String,
    /// `[edge id, value]` pairs, ascending by id.
    pub target: Vec<(u32, String)>,
    pub terms: Vec<CertTerm>,
    pub trace: Vec<String>,
    pub manifest: RunManifest,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Certificate {
    /// Packages `c`, whose universe must be the graph of `solution`.
    pub fn new(
        kind: TargetKind,
        solution: &FractionalSolution,
        p: Option<EdgeId>,
        c: &ConvexCombination,
        trace: Vec<String>,
        manifest: RunManifest,
    ) -> Result<Self> {
        if solution.graph != c.universe {
            return Err(Error::Precondition(
                "certificate universe differs from the combination's".into(),
            ));
        }
        let universe = write_graph(solution)?;
        Ok(Certificate {
            version: FORMAT_VERSION,
            target_kind: kind,
            instance_hash: sha256_hex(universe.as_bytes()),
            p_edge: p.map(|e| e.0),
            universe,
            target: c.target.iter().map(|(e, v)| (e.0, v.to_string())).collect(),
            terms: c
                .terms
                .iter()
                .map(|t| CertTerm {
                    multiplier: t.multiplier.to_string(),
                    edges: t.subgraph.iter().map(|(e, k)| (e.0, k)).collect(),
                })
                .collect(),
            trace,
            manifest,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn universe_solution(&self) -> Result<FractionalSolution> {
        parse_graph(&self.universe).map_err(|e| Error::Malformed(format!("universe: {e}")))
    }

    pub fn target_map(&self) -> Result<BTreeMap<EdgeId, Rational>> {
        let mut out = BTreeMap::new();
        for (e, v) in &self.target {
            let v = parse_rational(v).map_err(Error::Malformed)?;
            if out.insert(EdgeId(*e), v).is_some() {
                return Err(Error::Malformed(format!("target lists e{e} twice")));
            }
        }
        Ok(out)
    }

    /// Terms as `(multiplier, subgraph)`, without any validation beyond
    /// parsing and duplicate edges.
    pub fn parsed_terms(&self) -> Result<Vec<Term>> {
        self.terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let m = parse_rational(&t.multiplier)
                    .map_err(|m| Error::Malformed(format!("term {i}: {m}")))?;
                let mut sub = Subgraph::new();
                for &(e, k) in &t.edges {
                    if sub.copies(EdgeId(e)) != 0 {
                        return Err(Error::Malformed(format!("term {i} lists e{e} twice")));
                    }
                    sub.set(EdgeId(e), k);
                }
                Ok(Term::new(m, sub))
            })
            .collect()
    }

    pub fn to_combination(&self) -> Result<ConvexCombination> {
        let x = self.universe_solution()?;
        Ok(ConvexCombination::new(x.graph, self.target_map()?, self.parsed_terms()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubic::decompose_cubic;
    use crate::instances::named_cubic;
    use crate::Limits;

    #[test]
    fn json_round_trip() {
        let g = named_cubic("K4").unwrap();
        let c = decompose_cubic(&g, &Limits::default()).unwrap();
        let x = FractionalSolution::new(g.clone(), g.edge_ids().map(|e| (e, crate::combo::ratio(1, 1))).collect())
            .unwrap();
        let cert = Certificate::new(TargetKind::P, &x, None, &c, vec!["base K4".into()], RunManifest::default()).unwrap();
        let text = cert.to_json();
        assert!(text.contains("\"target_kind\": \"P\""));
        assert!(!text.contains("p_edge"));
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_combination().unwrap(), c);
        assert_eq!(back.instance_hash, sha256_hex(back.universe.as_bytes()));
        assert!(matches!(
            Certificate::from_json(&text[..text.len() / 2]),
            Err(Error::Malformed(_))
        ));
    }
}
