use std::collections::BTreeMap;

use super::{EdgeId, MultiGraph, VertexId};

/// Index-based view used by the hot loops (cut enumeration, bridge search).
pub(crate) struct Compact {
    pub n: usize,
    pub ids: Vec<EdgeId>,
    pub ends: Vec<(usize, usize)>,
    pub copies: Vec<u32>,
    pub verts: Vec<VertexId>,
}

impl Compact {
    pub fn new(g: &MultiGraph) -> Self {
        let verts: Vec<VertexId> = g.vertices().collect();
        let index: BTreeMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut ids = Vec::with_capacity(g.edge_count());
        let mut ends = Vec::with_capacity(g.edge_count());
        let mut copies = Vec::with_capacity(g.edge_count());
        for (id, r) in g.edges() {
            ids.push(id);
            ends.push((index[&r.u], index[&r.v]));
            copies.push(r.copies);
        }
        Compact {
            n: verts.len(),
            ids,
            ends,
            copies,
            verts,
        }
    }

    /// Component label per vertex with the masked edges removed.
    pub fn components(&self, skip: &[usize]) -> (usize, Vec<usize>) {
        let mut dsu = Dsu::new(self.n);
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            if !skip.contains(&i) {
                dsu.union(a, b);
            }
        }
        let mut label = vec![usize::MAX; self.n];
        let mut count = 0;
        let mut out = vec![0; self.n];
        for v in 0..self.n {
            let r = dsu.find(v);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[v] = label[r];
        }
        (count, out)
    }

    pub fn connected_without(&self, skip: &[usize]) -> bool {
        self.n <= 1 || self.components(skip).0 == 1
    }

    /// Edge indices whose removal (all copies) disconnects their component.
    /// Lowlink search keyed on edge index, so parallel records are handled.
    pub fn bridge_indices(&self) -> Vec<usize> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n];
        for (i, &(a, b)) in self.ends.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        let mut order = vec![usize::MAX; self.n];
        let mut low = vec![0usize; self.n];
        let mut out = Vec::new();
        let mut clock = 0;
        for root in 0..self.n {
            if order[root] != usize::MAX {
                continue;
            }
            // (vertex, edge used to enter, next adjacency slot)
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            order[root] = clock;
            low[root] = clock;
            clock += 1;
            while let Some(top) = stack.len().checked_sub(1) {
                let (v, via, slot) = stack[top];
                if slot < adj[v].len() {
                    stack[top].2 += 1;
                    let (w, e) = adj[v][slot];
                    if e == via {
                        continue;
                    }
                    if order[w] == usize::MAX {
                        order[w] = clock;
                        low[w] = clock;
                        clock += 1;
                        stack.push((w, e, 0));
                    } else {
                        low[v] = low[v].min(order[w]);
                    }
                } else {
                    stack.pop();
                    if let Some(&(parent, _, _)) = stack.last() {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > order[parent] {
                            out.push(via);
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

pub fn is_connected(g: &MultiGraph) -> bool {
    Compact::new(g).connected_without(&[])
}

/// Single-copy records whose removal disconnects the graph.
pub fn bridges(g: &MultiGraph) -> Vec<EdgeId> {
    let c = Compact::new(g);
    c.bridge_indices()
        .into_iter()
        .filter(|&i| c.copies[i] == 1)
        .map(|i| c.ids[i])
        .collect()
}

/// Connected, spanning its vertex set, and bridgeless. Records with two or
/// more copies never count as bridges.
pub fn is_two_edge_connected(g: &MultiGraph) -> bool {
    if g.vertex_count() == 0 {
        return false;
    }
    let c = Compact::new(g);
    c.connected_without(&[])
        && c.bridge_indices().into_iter().all(|i| c.copies[i] >= 2)
}

/// Two-edge-connected with no 2-edge cut. Intended for graphs whose records
/// all have one copy.
pub fn is_three_edge_connected(g: &MultiGraph) -> bool {
    if !is_two_edge_connected(g) {
        return false;
    }
    // expand copies into unit edges and try every pair
    let c = Compact::new(g);
    let mut units = Compact {
        n: c.n,
        ids: Vec::new(),
        ends: Vec::new(),
        copies: Vec::new(),
        verts: c.verts.clone(),
    };
    for i in 0..c.ids.len() {
        for _ in 0..c.copies[i] {
            units.ids.push(c.ids[i]);
            units.ends.push(c.ends[i]);
            units.copies.push(1);
        }
    }
    let m = units.ids.len();
    (0..m).all(|i| (i + 1..m).all(|j| units.connected_without(&[i, j])))
}
