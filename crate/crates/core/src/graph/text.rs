//! Plain-text graph and cost formats.
//!
//! Graph files start with a line `n m` followed by `m` lines `u v value`.
//! Vertices are `0..n`; the edge on the `i`-th edge line gets id `i`. Values
//! are rational literals such as `1` or `1/2`. A `#` starts a comment.
//!
//! Cost files hold lines `u v cost`, one per vertex pair.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{EdgeId, FractionalSolution, MultiGraph, VertexId};
use crate::combo::{parse_rational, Rational};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap().trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn parse_graph(text: &str) -> Result<FractionalSolution> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "empty graph file"))?;
    let mut toks = header.split_whitespace();
    let n: u32 = field(hline, toks.next(), "vertex count")?;
    let m: usize = field(hline, toks.next(), "edge count")?;
    if toks.next().is_some() {
        return Err(parse_err(hline, "header must be `n m`"));
    }
    let mut g = MultiGraph::new();
    for v in 0..n {
        g.add_vertex(VertexId(v));
    }
    let mut value = BTreeMap::new();
    let mut last = hline;
    for i in 0..m {
        let (ln, body) = lines
            .next()
            .ok_or_else(|| parse_err(last, format!("expected {m} edge lines, found {i}")))?;
        last = ln;
        let mut toks = body.split_whitespace();
        let u: u32 = field(ln, toks.next(), "endpoint")?;
        let v: u32 = field(ln, toks.next(), "endpoint")?;
        let val_tok = toks.next().ok_or_else(|| parse_err(ln, "missing value"))?;
        let x = parse_rational(val_tok).map_err(|m| parse_err(ln, m))?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "edge line must be `u v value`"));
        }
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("endpoint out of range 0..{n}")));
        }
        let id = EdgeId(i as u32);
        g.add_edge(id, VertexId(u), VertexId(v), 1)
            .map_err(|e| parse_err(ln, e.to_string()))?;
        value.insert(id, x);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content after edge lines"));
    }
    FractionalSolution::new(g, value).map_err(|e| parse_err(hline, e.to_string()))
}

/// Writes `x` in the graph format. Vertices must be `0..n` and edge ids `0..m`.
pub fn write_graph(x: &FractionalSolution) -> Result<String> {
    let g = &x.graph;
    let n = g.vertex_count();
    if g.vertices().enumerate().any(|(i, v)| v.0 as usize != i) {
        return Err(Error::Precondition("vertices must be numbered 0..n".into()));
    }
    if g.edge_ids().enumerate().any(|(i, e)| e.0 as usize != i) {
        return Err(Error::Precondition("edge ids must be numbered 0..m".into()));
    }
    let mut out = String::new();
    writeln!(out, "{} {}", n, g.edge_count()).unwrap();
    for (id, r) in g.edges() {
        writeln!(out, "{} {} {}", r.u.0, r.v.0, x.value(id)).unwrap();
    }
    Ok(out)
}

/// Graph-format text for a plain graph, with value `1` on every edge.
pub fn write_plain_graph(g: &MultiGraph) -> Result<String> {
    let one = Rational::from_integer(1.into());
    let x = FractionalSolution::new(g.support(), g.edge_ids().map(|e| (e, one.clone())).collect())?;
    write_graph(&x)
}

/// Reads a cost file against `g`. A line applies to every record between its
/// two endpoints. Edges without a line are an error unless `missing_zero`.
pub fn parse_costs(
    text: &str,
    g: &MultiGraph,
    missing_zero: bool,
) -> Result<BTreeMap<EdgeId, Rational>> {
    let mut out: BTreeMap<EdgeId, Rational> = BTreeMap::new();
    let mut seen_pairs = std::collections::BTreeSet::new();
    for (ln, body) in content_lines(text) {
        let mut toks = body.split_whitespace();
        let u: u32 = field(ln, toks.next(), "endpoint")?;
        let v: u32 = field(ln, toks.next(), "endpoint")?;
        let tok = toks.next().ok_or_else(|| parse_err(ln, "missing cost"))?;
        let c = parse_rational(tok).map_err(|m| parse_err(ln, m))?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "cost line must be `u v cost`"));
        }
        if c < Rational::from_integer(0.into()) {
            return Err(parse_err(ln, format!("negative cost {c}")));
        }
        let key = (u.min(v), u.max(v));
        if !seen_pairs.insert(key) {
            return Err(parse_err(ln, format!("duplicate cost for {u} {v}")));
        }
        let ids = g.edges_between(VertexId(u), VertexId(v));
        if ids.is_empty() {
            return Err(parse_err(ln, format!("no edge between {u} and {v}")));
        }
        for e in ids {
            out.insert(e, c.clone());
        }
    }
    for e in g.edge_ids() {
        if !out.contains_key(&e) {
            if missing_zero {
                out.insert(e, Rational::from_integer(0.into()));
            } else {
                let r = g.edge(e)?;
                return Err(parse_err(0, format!("no cost for edge {} {}", r.u.0, r.v.0)));
            }
        }
    }
    Ok(out)
}

/// Cost-format text for `c`, one line per vertex pair.
pub fn write_costs(g: &MultiGraph, c: &BTreeMap<EdgeId, Rational>) -> Result<String> {
    let mut pairs: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    for (e, r) in g.edges() {
        let ce = c.get(&e).ok_or(Error::UnknownEdge(e))?;
        if let Some(prev) = pairs.insert((r.u.0, r.v.0), ce.clone()) {
            if &prev != ce {
                return Err(Error::Precondition(format!(
                    "parallel edges {} {} carry different costs",
                    r.u.0, r.v.0
                )));
            }
        }
    }
    let mut out = String::new();
    for ((u, v), ce) in pairs {
        writeln!(out, "{u} {v} {ce}").unwrap();
    }
    Ok(out)
}
