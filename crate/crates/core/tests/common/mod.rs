#![allow(dead_code)]

use std::collections::BTreeMap;

use twoec::graph::text::write_graph;
use twoec::graph::{EdgeId, FractionalSolution};
use twoec::instances::{chained_gadgets, named_cubic, prism_solution, random_ht, triangle_expansion};

pub const NAMED: [&str; 5] = ["K4", "K3_3", "cube", "prism", "Petersen"];

/// Triangle expansion of a named cubic graph, path lengths cycling through
/// `lengths` in edge order.
pub fn expansion(name: &str, lengths: &[usize]) -> FractionalSolution {
    let g = named_cubic(name).unwrap();
    let map: BTreeMap<EdgeId, usize> = g
        .edge_ids()
        .enumerate()
        .map(|(i, e)| (e, lengths[i % lengths.len()]))
        .collect();
    triangle_expansion(&g, &map).unwrap().solution
}

/// Half-triangle instances with path lengths between 1 and 3.
pub fn mixed_instances() -> Vec<(String, FractionalSolution)> {
    let mut out = vec![
        ("prism-ht 1,2,3".to_string(), prism_solution(&[1, 2, 3]).unwrap()),
        ("prism-ht 3,1,1".to_string(), prism_solution(&[3, 1, 1]).unwrap()),
        ("prism-ht 2,2,1".to_string(), prism_solution(&[2, 2, 1]).unwrap()),
        ("K4 1,2,3".to_string(), expansion("K4", &[1, 2, 3])),
        ("K3_3 2,1,3".to_string(), expansion("K3_3", &[2, 1, 3])),
        ("prism 3,1".to_string(), expansion("prism", &[3, 1])),
        ("cube 1,3,2".to_string(), expansion("cube", &[1, 3, 2])),
        ("Petersen 1,2".to_string(), expansion("Petersen", &[1, 2])),
        ("gadgets 1".to_string(), chained_gadgets(1).unwrap()),
        ("gadgets 2".to_string(), chained_gadgets(2).unwrap()),
    ];
    for seed in 0..3 {
        out.push((format!("random seed {seed}"), random_ht(seed, 8, 3).unwrap()));
    }
    out
}

pub fn text(x: &FractionalSolution) -> String {
    write_graph(x).unwrap()
}
