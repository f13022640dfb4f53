//! Test graphs and half-triangle solutions.
//!
//! The chained-gadget family is a structural analogue (a triangle-expanded
//! Möbius ladder); it does not reproduce any published cost family.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combo::{ratio, Rational};
use crate::error::{Error, Result};
use crate::graph::{is_three_edge_connected, EdgeId, FractionalSolution, MultiGraph, VertexId};

pub const NAMED_CUBIC: [&str; 5] = ["K4", "K3_3", "prism", "cube", "Petersen"];

const MAX_GADGETS: usize = 64;
const MAX_RANDOM_VERTICES: usize = 64;

/// One of the named simple cubic 3-edge-connected graphs.
pub fn named_cubic(name: &str) -> Result<MultiGraph> {
    let edges: Vec<(u32, u32)> = match name {
        "K4" => vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
        "K3_3" => (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect(),
        "prism" => vec![
            (0, 1),
            (0, 2),
            (1, 2),
            (3, 4),
            (3, 5),
            (4, 5),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
        "cube" => (0..8u32)
            .flat_map(|i| (0..3).map(move |b| (i, i ^ (1 << b))))
            .filter(|(i, j)| i < j)
            .collect(),
        "Petersen" => (0..5u32)
            .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)])
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect(),
        _ => return Err(Error::UnknownInstance(name.to_string())),
    };
    let n = edges.iter().map(|&(a, b)| a.max(b)).max().unwrap() + 1;
    MultiGraph::from_edges(n, &edges)
}

/// Named cubic graphs plus `theta`, the two-vertex graph with three parallel
/// edges whose expansion is the two-triangle graph.
pub fn base_graph(name: &str) -> Result<MultiGraph> {
    if name == "theta" {
        return MultiGraph::from_edges(2, &[(0, 1), (0, 1), (0, 1)]);
    }
    named_cubic(name)
}

/// A triangle expansion with the maps back to the cubic graph it came from.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub solution: FractionalSolution,
    /// Cubic vertex to its triangle.
    pub triangle: BTreeMap<VertexId, [VertexId; 3]>,
    /// Cubic edge to its 1-path, in order from the lower endpoint.
    pub path: BTreeMap<EdgeId, Vec<EdgeId>>,
}

/// Replaces every vertex of a loopless cubic graph by a triangle of
/// half-edges and every edge by a 1-path of the given length (default 1).
///
/// The `i`-th vertex (in id order) becomes `3i, 3i+1, 3i+2`, and its `k`-th
/// incident edge (by id) leaves from `3i+k`. Half-edges get ids first, then
/// path edges in edge order; interior path vertices are numbered from `3n`.
pub fn triangle_expansion(g: &MultiGraph, lengths: &BTreeMap<EdgeId, usize>) -> Result<Expansion> {
    if !g.is_cubic() || g.edges().any(|(_, r)| r.copies != 1) {
        return Err(Error::Precondition(
            "triangle expansion needs a cubic graph with single-copy edges".into(),
        ));
    }
    if let Some(e) = lengths.keys().find(|e| !g.has_edge(**e)) {
        return Err(Error::UnknownEdge(*e));
    }
    if let Some((e, _)) = lengths.iter().find(|(_, l)| **l == 0) {
        return Err(Error::Precondition(format!("path length for {e} must be positive")));
    }
    let index: BTreeMap<VertexId, u32> = g.vertices().zip(0..).collect();
    let n = index.len() as u32;
    let slot = |v: VertexId, e: EdgeId| -> VertexId {
        let k = g.incident(v).position(|f| f == e).unwrap() as u32;
        VertexId(3 * index[&v] + k)
    };

    let mut h = MultiGraph::new();
    let mut value = BTreeMap::new();
    let mut triangle = BTreeMap::new();
    let mut next_edge = 0u32;
    let mut add = |h: &mut MultiGraph, a: u32, b: u32, val: Rational| -> Result<EdgeId> {
        let id = EdgeId(next_edge);
        next_edge += 1;
        h.add_vertex(VertexId(a));
        h.add_vertex(VertexId(b));
        h.add_edge(id, VertexId(a), VertexId(b), 1)?;
        value.insert(id, val);
        Ok(id)
    };
    for (&v, &i) in &index {
        let t = [3 * i, 3 * i + 1, 3 * i + 2];
        add(&mut h, t[0], t[1], ratio(1, 2))?;
        add(&mut h, t[0], t[2], ratio(1, 2))?;
        add(&mut h, t[1], t[2], ratio(1, 2))?;
        triangle.insert(v, t.map(VertexId));
    }
    let mut next_vertex = 3 * n;
    let mut path = BTreeMap::new();
    for (e, r) in g.edges() {
        let len = lengths.get(&e).copied().unwrap_or(1);
        let mut at = slot(r.u, e).0;
        let end = slot(r.v, e).0;
        let mut ids = Vec::with_capacity(len);
        for step in 0..len {
            let to = if step + 1 == len {
                end
            } else {
                next_vertex += 1;
                next_vertex - 1
            };
            ids.push(add(&mut h, at, to, ratio(1, 1))?);
            at = to;
        }
        path.insert(e, ids);
    }
    Ok(Expansion {
        solution: FractionalSolution::new(h, value)?,
        triangle,
        path,
    })
}

/// Two triangles joined by three 1-paths of the given lengths.
pub fn prism_solution(lengths: &[usize]) -> Result<FractionalSolution> {
    if lengths.len() != 3 {
        return Err(Error::Precondition(format!(
            "two-triangle graph needs 3 path lengths, got {}",
            lengths.len()
        )));
    }
    let theta = base_graph("theta")?;
    let map = lengths
        .iter()
        .enumerate()
        .map(|(i, &l)| (EdgeId(i as u32), l))
        .collect();
    Ok(triangle_expansion(&theta, &map)?.solution)
}

/// Möbius ladder on `n` vertices: an `n`-cycle plus rungs `i, i + n/2`.
pub fn mobius_ladder(n: usize) -> Result<MultiGraph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Precondition(format!(
            "Möbius ladder needs an even vertex count ≥ 4, got {n}"
        )));
    }
    let n = n as u32;
    let mut edges: Vec<(u32, u32)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n / 2).map(|i| (i, i + n / 2)));
    let edges: Vec<_> = edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
    MultiGraph::from_edges(n, &edges)
}

/// Triangle expansion of the Möbius ladder on `2k + 2` vertices with every
/// rung stretched to a 1-path of length 2.
pub fn chained_gadgets(k: usize) -> Result<FractionalSolution> {
    if k == 0 {
        return Err(Error::Precondition("gadget count must be positive".into()));
    }
    if k > MAX_GADGETS {
        return Err(Error::SizeCap {
            what: "gadget count",
            limit: MAX_GADGETS,
            actual: k,
        });
    }
    let n = 2 * k + 2;
    let g = mobius_ladder(n)?;
    let half = (n / 2) as u32;
    let lengths = g
        .edges()
        .filter(|(_, r)| r.v.0 - r.u.0 == half)
        .map(|(e, _)| (e, 2))
        .collect();
    Ok(triangle_expansion(&g, &lengths)?.solution)
}

/// Random simple cubic 3-edge-connected graph on `n` vertices, grown from
/// `K4` by edge insertions: subdivide two distinct edges and join the two
/// new vertices.
pub fn random_cubic(seed: u64, n: usize) -> Result<MultiGraph> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::Precondition(format!(
            "random cubic graph needs an even vertex count ≥ 4, got {n}"
        )));
    }
    if n > MAX_RANDOM_VERTICES {
        return Err(Error::SizeCap {
            what: "random cubic vertices",
            limit: MAX_RANDOM_VERTICES,
            actual: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = named_cubic("K4")?;
    while g.vertex_count() < n {
        let ids: Vec<EdgeId> = g.edge_ids().collect();
        let i = rng.gen_range(0..ids.len());
        let mut j = rng.gen_range(0..ids.len() - 1);
        if j >= i {
            j += 1;
        }
        let mut h = g.clone();
        let x = h.next_vertex_id();
        let y = VertexId(x.0 + 1);
        h.add_vertex(x);
        h.add_vertex(y);
        for (e, w) in [(ids[i], x), (ids[j], y)] {
            let r = h.remove_edge(e)?;
            let fresh = h.next_edge_id();
            h.add_edge(fresh, r.u, w, 1)?;
            h.add_edge(EdgeId(fresh.0 + 1), w, r.v, 1)?;
        }
        let fresh = h.next_edge_id();
        h.add_edge(fresh, x, y, 1)?;
        if h.is_simple() && h.is_cubic() && is_three_edge_connected(&h) {
            g = h;
        }
    }
    renumber(&g)
}

/// Same graph with vertices `0..n` and edge ids `0..m`, edges sorted by ends.
pub fn renumber(g: &MultiGraph) -> Result<MultiGraph> {
    let index: BTreeMap<VertexId, u32> = g.vertices().zip(0..).collect();
    let mut edges: Vec<(u32, u32)> = g
        .edges()
        .flat_map(|(_, r)| std::iter::repeat((index[&r.u], index[&r.v])).take(r.copies as usize))
        .collect();
    edges.sort();
    MultiGraph::from_edges(index.len() as u32, &edges)
}

/// Triangle expansion of [`random_cubic`] with path lengths drawn from
/// `1..=max_len` by the same seeded generator.
pub fn random_ht(seed: u64, n: usize, max_len: usize) -> Result<FractionalSolution> {
    if max_len == 0 {
        return Err(Error::Precondition("max path length must be positive".into()));
    }
    let g = random_cubic(seed, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let lengths = g.edge_ids().map(|e| (e, rng.gen_range(1..=max_len))).collect();
    Ok(triangle_expansion(&g, &lengths)?.solution)
}

/// Joins two cubic graphs through a 2-edge cut: delete `e_a = xy` from `a`
/// and `e_b = zw` from `b`, then add `xz` and `yw`. Vertices of `b` are
/// shifted past those of `a`.
pub fn two_cut_join(a: &MultiGraph, e_a: EdgeId, b: &MultiGraph, e_b: EdgeId) -> Result<MultiGraph> {
    let a = renumber(a)?;
    let b = renumber(b)?;
    let ra = *a.edge(e_a)?;
    let rb = *b.edge(e_b)?;
    let shift = a.vertex_count() as u32;
    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (e, r) in a.edges() {
        if e != e_a {
            edges.push((r.u.0, r.v.0));
        }
    }
    for (e, r) in b.edges() {
        if e != e_b {
            edges.push((r.u.0 + shift, r.v.0 + shift));
        }
    }
    edges.push((ra.u.0, rb.u.0 + shift));
    edges.push((ra.v.0, rb.v.0 + shift));
    MultiGraph::from_edges(shift + b.vertex_count() as u32, &edges)
}

/// Generator parameters, read from `key = value` lines or CLI flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceSpec {
    NamedCubic { name: String },
    /// Path lengths apply to base edges in id order; missing entries are 1.
    TriangleExpansion { base: String, lengths: Vec<usize> },
    ChainedGadgets { k: usize },
    RandomHt { seed: u64, n: usize, max_len: usize },
}

/// Output of a generator run.
#[derive(Clone, Debug)]
pub enum Generated {
    Graph(MultiGraph),
    Solution(FractionalSolution),
}

impl Generated {
    /// Graph-format text. Plain graphs get value `1` on every edge.
    pub fn to_text(&self) -> Result<String> {
        match self {
            Generated::Graph(g) => crate::graph::text::write_plain_graph(g),
            Generated::Solution(x) => crate::graph::text::write_graph(x),
        }
    }
}

impl InstanceSpec {
    pub fn generate(&self) -> Result<Generated> {
        Ok(match self {
            InstanceSpec::NamedCubic { name } => Generated::Graph(named_cubic(name)?),
            InstanceSpec::TriangleExpansion { base, lengths } => {
                let g = base_graph(base)?;
                if lengths.len() > g.edge_count() {
                    return Err(Error::Precondition(format!(
                        "{} path lengths for {} edges",
                        lengths.len(),
                        g.edge_count()
                    )));
                }
                let map = g.edge_ids().zip(lengths.iter().copied()).collect();
                Generated::Solution(triangle_expansion(&g, &map)?.solution)
            }
            InstanceSpec::ChainedGadgets { k } => Generated::Solution(chained_gadgets(*k)?),
            InstanceSpec::RandomHt { seed, n, max_len } => {
                Generated::Solution(random_ht(*seed, *n, *max_len)?)
            }
        })
    }
}

fn config_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses `key = value` lines. `kind` is one of `named-cubic`,
/// `triangle-expansion`, `chained-gadgets`, `random-ht`.
pub fn parse_spec(text: &str) -> Result<InstanceSpec> {
    let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap().trim();
        if body.is_empty() {
            continue;
        }
        let (k, v) = body
            .split_once('=')
            .ok_or_else(|| config_err(i + 1, "expected `key = value`"))?;
        if kv.insert(k.trim().to_string(), (i + 1, v.trim().to_string())).is_some() {
            return Err(config_err(i + 1, format!("duplicate key `{}`", k.trim())));
        }
    }
    let get = |key: &str| -> Result<&(usize, String)> {
        kv.get(key)
            .ok_or_else(|| config_err(0, format!("missing key `{key}`")))
    };
    fn num<T: std::str::FromStr>(entry: &(usize, String), key: &str) -> Result<T> {
        entry
            .1
            .parse()
            .map_err(|_| config_err(entry.0, format!("bad value for `{key}`: {}", entry.1)))
    }
    let (_, kind) = get("kind")?;
    let allowed: &[&str] = match kind.as_str() {
        "named-cubic" => &["kind", "name"],
        "triangle-expansion" => &["kind", "base", "lengths"],
        "chained-gadgets" => &["kind", "k"],
        "random-ht" => &["kind", "seed", "n", "max_len"],
        other => return Err(Error::UnknownInstance(other.to_string())),
    };
    if let Some((k, (ln, _))) = kv.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
        return Err(config_err(*ln, format!("unexpected key `{k}` for kind {kind}")));
    }
    Ok(match kind.as_str() {
        "named-cubic" => InstanceSpec::NamedCubic {
            name: get("name")?.1.clone(),
        },
        "triangle-expansion" => {
            let lengths = match kv.get("lengths") {
                None => Vec::new(),
                Some(entry) => parse_lengths(&entry.1).map_err(|m| config_err(entry.0, m))?,
            };
            InstanceSpec::TriangleExpansion {
                base: get("base")?.1.clone(),
                lengths,
            }
        }
        "chained-gadgets" => InstanceSpec::ChainedGadgets {
            k: num(get("k")?, "k")?,
        },
        _ => InstanceSpec::RandomHt {
            seed: num(get("seed")?, "seed")?,
            n: num(get("n")?, "n")?,
            max_len: num(get("max_len")?, "max_len")?,
        },
    })
}

/// Comma-separated positive integers.
pub fn parse_lengths(s: &str) -> std::result::Result<Vec<usize>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("bad path length `{}`", t.trim())),
            Ok(l) => Ok(l),
        })
        .collect()
}
