//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twoec::certificate::{Certificate, RunManifest, TargetKind};
use twoec::cli::{decompose, Mode};
use twoec::combo::{ratio, Rational, Subgraph};
use twoec::cubic::per_edge_combinations;
use twoec::graph::text::write_plain_graph;
use twoec::graph::{validate_half_triangle, EdgeId, FractionalSolution, MultiGraph, VertexId};
use twoec::ht::{
    decompose_ht_traced, choose_p, discover_two_triangle_base, q_copies_ok, TWO_TRIANGLE_BASE,
};
use twoec::instances::{named_cubic, prism_solution};
use twoec::oracle::{enumerate_2ecss, find_convex_combination, opt_2ec, Feasibility};
use twoec::verifier::{verify, verify_cost_bound, verify_text, Clause};
use twoec::Limits;

use common::{expansion, mixed_instances, text, NAMED};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_twoec")
}

/// Connected and spanning, counting copies, by search.
fn connected_without(g: &MultiGraph, sub: &Subgraph, skip: Option<EdgeId>) -> bool {
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for (e, k) in sub.iter() {
        let k = if Some(e) == skip { k - 1 } else { k };
        if k == 0 {
            continue;
        }
        let r = g.edge(e).unwrap();
        adj.entry(r.u).or_default().push(r.v);
        adj.entry(r.v).or_default().push(r.u);
    }
    let mut seen = BTreeSet::from([verts[0]]);
    let mut queue = VecDeque::from([verts[0]]);
    while let Some(v) = queue.pop_front() {
        for &w in adj.get(&v).into_iter().flatten() {
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    seen.len() == verts.len()
}

/// Definition-level test: spanning connected, and still connected after
/// deleting any single copy.
fn is_2ecss(g: &MultiGraph, sub: &Subgraph) -> bool {
    connected_without(g, sub, None) && sub.edge_ids().all(|e| connected_without(g, sub, Some(e)))
}

fn unit(g: &MultiGraph) -> FractionalSolution {
    FractionalSolution::new(g.clone(), g.edge_ids().map(|e| (e, ratio(1, 1))).collect()).unwrap()
}

fn accepted(cert_text: &str) -> Result<Certificate, String> {
    let verdict = verify_text(cert_text).map_err(|e| e.to_string())?;
    if !verdict.accepted {
        let f: Vec<String> = verdict.failures.iter().map(|f| f.to_string()).collect();
        return Err(format!("verifier rejected: {}", f.join("; ")));
    }
    Ok(Certificate::from_json(cert_text).unwrap())
}

fn p_certificate(name: &str) -> Result<String, String> {
    let g = named_cubic(name).unwrap();
    decompose(Mode::P, &write_plain_graph(&g).unwrap(), None, &Limits::default(), None)
        .map_err(|e| format!("{name}: {e}"))
}

fn sixfifth_certificates() -> Result<Vec<(String, FractionalSolution, String)>, String> {
    mixed_instances()
        .into_iter()
        .map(|(name, x)| {
            let cert = decompose(Mode::SixFifth, &text(&x), None, &Limits::default(), None)
                .map_err(|e| format!("{name}: {e}"))?;
            Ok((name, x, cert))
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let mut times = Vec::new();
    for name in NAMED {
        let start = Instant::now();
        let cert = accepted(&p_certificate(name)?)?;
        let elapsed = start.elapsed();
        ensure(elapsed <= Duration::from_secs(60), || format!("{name} took {elapsed:?}"))?;
        let c = cert.to_combination().unwrap();
        for (e, occ) in c.occurrences() {
            ensure(occ == ratio(4, 5), || format!("{name}: {e} at {occ}"))?;
        }
        for (i, t) in c.terms.iter().enumerate() {
            ensure(t.subgraph.iter().all(|(_, k)| k == 1), || format!("{name}: term {i} not simple"))?;
            ensure(is_2ecss(&c.universe, &t.subgraph), || format!("{name}: term {i} not a 2ECSS"))?;
        }
        times.push(format!("{name} {} terms {:.2}s", c.terms.len(), elapsed.as_secs_f64()));
    }
    Ok(times.join(", "))
}

fn criterion_2() -> Outcome {
    let g = named_cubic("Petersen").unwrap();
    let parts = per_edge_combinations(&g, &Limits::default()).map_err(|e| e.to_string())?;
    let m = g.edge_count() as i64;
    ensure(parts.len() == 15, || format!("{} per-edge combinations", parts.len()))?;
    for r in &parts {
        let ctx = &r.context;
        let near: BTreeSet<EdgeId> = [ctx.au, ctx.bu, ctx.vc, ctx.vd].into();
        for e in g.edge_ids() {
            let want = if e == r.edge {
                ratio(2, 5)
            } else if near.contains(&e) {
                ratio(9, 10)
            } else {
                ratio(4, 5)
            };
            let got = r.combination.occurrence(e).unwrap();
            ensure(got == want, || format!("M_{}: {e} at {got}, expected {want}", r.edge))?;
        }
    }
    let avg = (ratio(2, 5) + ratio(9, 10) * ratio(4, 1) + ratio(4, 5) * ratio(m - 5, 1)) / ratio(m, 1);
    ensure(avg == ratio(4, 5), || format!("average is {avg}"))?;
    Ok(format!("{} reductions, average (2/5 + 4·9/10 + 4/5·{})/{m} = 4/5", parts.len(), m - 5))
}

fn check_q(name: &str, x: &FractionalSolution, p: Option<EdgeId>) -> Result<(), String> {
    let limits = Limits::default();
    let h = validate_half_triangle(x).map_err(|e| format!("{name}: {e}"))?;
    let p = match p {
        Some(p) => p,
        None => choose_p(&h, &limits).map_err(|e| format!("{name}: {e}"))?,
    };
    let start = Instant::now();
    let (c, trace) = decompose_ht_traced(&h, p, &limits).map_err(|e| format!("{name}: {e}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed <= Duration::from_secs(120), || format!("{name} took {elapsed:?}"))?;
    for e in h.simple.graph.edge_ids() {
        let want = if h.is_half_edge(e) {
            ratio(3, 5)
        } else if e == p {
            ratio(4, 5)
        } else {
            ratio(6, 5)
        };
        let got = c.occurrence(e).unwrap();
        ensure(got == want, || format!("{name} p={p}: {e} at {got}"))?;
    }
    ensure(c.terms.iter().all(|t| q_copies_ok(&h, p, &t.subgraph)), || {
        format!("{name}: copy bound")
    })?;
    let cert = Certificate::new(TargetKind::Q, x, Some(p), &c, trace, RunManifest::default())
        .map_err(|e| e.to_string())?;
    let v = verify(&cert).map_err(|e| e.to_string())?;
    ensure(v.accepted, || format!("{name}: verifier rejected {:?}", v.failures))
}

fn criterion_3() -> Outcome {
    let base = prism_solution(&[1, 1, 1]).unwrap();
    let h = validate_half_triangle(&base).unwrap();
    for p in h.one_edges() {
        check_q("two-triangle", &base, Some(p))?;
    }
    for name in NAMED {
        check_q(name, &expansion(name, &[1]), None)?;
    }
    let found = discover_two_triangle_base(&Limits::default()).map_err(|e| e.to_string())?;
    let frozen: Vec<(Rational, [u8; 9])> = TWO_TRIANGLE_BASE
        .iter()
        .map(|(m, row)| (twoec::combo::parse_rational(m).unwrap(), *row))
        .collect();
    ensure(found == frozen, || "two-triangle base differs from the oracle".into())?;
    Ok(format!("two-triangle on 3 choices of p, 5 expansions, base of {} terms", frozen.len()))
}

fn criterion_4() -> Outcome {
    let certs = sixfifth_certificates()?;
    ensure(certs.len() >= 10, || "fewer than 10 instances".into())?;
    let dir = tempfile::tempdir().unwrap();
    for (name, x, cert_text) in &certs {
        let c = accepted(cert_text)?.to_combination().unwrap();
        for (e, v) in &x.value {
            let got = c.occurrence(*e).unwrap();
            ensure(got == v * ratio(6, 5), || format!("{name}: {e} at {got}"))?;
        }
        let path = dir.path().join("cert.json");
        std::fs::write(&path, cert_text).unwrap();
        let status = Command::new(bin()).arg("verify").arg(&path).output().unwrap().status;
        ensure(status.code() == Some(0), || format!("{name}: verify exited {status}"))?;
    }
    let lengths: BTreeSet<usize> = certs
        .iter()
        .flat_map(|(_, x, _)| validate_half_triangle(x).unwrap().one_paths)
        .map(|p| p.edges.len())
        .collect();
    ensure(lengths == BTreeSet::from([1, 2, 3]), || format!("path lengths {lengths:?}"))?;
    Ok(format!("{} instances, path lengths {lengths:?}", certs.len()))
}

fn random_costs(g: &MultiGraph, rng: &mut ChaCha8Rng) -> BTreeMap<EdgeId, Rational> {
    g.edge_ids()
        .map(|e| {
            let n: i64 = rng.gen_range(0..=30);
            let d: i64 = rng.gen_range(1..=7);
            (e, Rational::new(BigInt::from(n), BigInt::from(d)))
        })
        .collect()
}

fn criterion_5() -> Outcome {
    let certs = sixfifth_certificates()?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut opt_checks = 0;
    for (name, x, cert_text) in &certs {
        let cert = Certificate::from_json(cert_text).unwrap();
        let c = cert.to_combination().unwrap();
        let small = x.graph.edge_count() <= 16;
        for round in 0..100 {
            let costs = random_costs(&x.graph, &mut rng);
            let bound = x.cost(&costs).unwrap() * ratio(6, 5);
            let best = c.terms.iter().map(|t| t.subgraph.cost(&costs)).min().unwrap();
            ensure(best <= bound, || format!("{name} round {round}: {best} > {bound}"))?;
            let (ok, _) = verify_cost_bound(&cert, &costs).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{name} round {round}: verifier cost bound"))?;
            if small {
                let (opt, _) = opt_2ec(&x.graph, &costs, &Limits::default()).map_err(|e| e.to_string())?;
                ensure(opt <= bound, || format!("{name} round {round}: OPT {opt} > {bound}"))?;
                opt_checks += 1;
            }
        }
    }
    ensure(opt_checks > 0, || "no instance small enough for OPT".into())?;
    Ok(format!("{} instances × 100 cost vectors, {opt_checks} OPT comparisons", certs.len()))
}

fn brute_pool(g: &MultiGraph, max_copies: u32) -> BTreeSet<Vec<(EdgeId, u32)>> {
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    let base = max_copies as usize + 1;
    let total = base.pow(ids.len() as u32);
    let mut out = BTreeSet::new();
    for mut code in 0..total {
        let mut sub = Subgraph::new();
        for &e in &ids {
            sub.set(e, (code % base) as u32);
            code /= base;
        }
        if is_2ecss(g, &sub) {
            out.insert(sub.iter().collect());
        }
    }
    out
}

fn criterion_6() -> Outcome {
    let limits = Limits::default();
    let six_cycle = MultiGraph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
    let graphs: Vec<(&str, MultiGraph)> = vec![
        ("K4", named_cubic("K4").unwrap()),
        ("K3_3", named_cubic("K3_3").unwrap()),
        ("prism", named_cubic("prism").unwrap()),
        ("C6", six_cycle),
        ("prism-ht", prism_solution(&[1, 1, 1]).unwrap().graph),
        ("prism-ht 1,2,1", prism_solution(&[1, 2, 1]).unwrap().graph),
        ("prism-ht 2,2,2", prism_solution(&[2, 2, 2]).unwrap().graph),
    ];
    for (name, g) in &graphs {
        ensure(g.edge_count() <= 12, || format!("{name} too large"))?;
        for k in [1, 2] {
            let pool: BTreeSet<Vec<(EdgeId, u32)>> = enumerate_2ecss(g, k, &limits)
                .map_err(|e| e.to_string())?
                .iter()
                .map(|s| s.iter().collect())
                .collect();
            ensure(pool == brute_pool(g, k), || format!("{name} with {k} copies: pools differ"))?;
        }
    }
    let mut members = 0;
    for (name, x, cert_text) in sixfifth_certificates()? {
        if x.graph.edge_count() > limits.oracle_max_edges {
            continue;
        }
        let pool: BTreeSet<Subgraph> = enumerate_2ecss(&x.graph, 2, &limits)
            .map_err(|e| e.to_string())?
            .into_iter()
            .collect();
        for t in Certificate::from_json(&cert_text).unwrap().parsed_terms().unwrap() {
            ensure(pool.contains(&t.subgraph), || format!("{name}: term outside the pool"))?;
            members += 1;
        }
    }
    ensure(members > 0, || "no certificate within the oracle cap".into())?;
    let k4 = named_cubic("K4").unwrap();
    let pool = enumerate_2ecss(&k4, 1, &limits).unwrap();
    let target = k4.edge_ids().map(|e| (e, ratio(4, 5))).collect();
    let Feasibility::Feasible(c) = find_convex_combination(&k4, &pool, &target, &limits).unwrap() else {
        return Err("K4 at 4/5 reported infeasible".into());
    };
    let cert = Certificate::new(TargetKind::P, &unit(&k4), None, &c, vec![], RunManifest::default()).unwrap();
    let v = verify(&cert).unwrap();
    ensure(v.accepted, || format!("simplex combination rejected: {:?}", v.failures))?;
    Ok(format!("{} graphs match the filter, {members} certificate terms in pools", graphs.len()))
}

#[derive(Clone, Copy, Debug)]
enum Mutation {
    MultiplierSum,
    Bridge,
    CopyBound,
    Occurrence,
}

impl Mutation {
    fn clause(self) -> Clause {
        match self {
            Mutation::MultiplierSum => Clause::MultiplierSum,
            Mutation::Bridge => Clause::TwoEdgeConnectivity,
            Mutation::CopyBound => Clause::CopyBound,
            Mutation::Occurrence => Clause::Occurrence,
        }
    }

    fn apply(self, cert: &mut Certificate, rng: &mut ChaCha8Rng) {
        let n = cert.terms.len();
        let i = rng.gen_range(0..n);
        let m = |cert: &Certificate, i: usize| twoec::combo::parse_rational(&cert.terms[i].multiplier).unwrap();
        match self {
            Mutation::MultiplierSum => {
                let k: i64 = rng.gen_range(2..10);
                cert.terms[i].multiplier = (m(cert, i) * ratio(k + 1, k)).to_string();
            }
            Mutation::Bridge => {
                let g = cert.universe_solution().unwrap().graph;
                let verts: Vec<VertexId> = g.vertices().collect();
                let v = verts[rng.gen_range(0..verts.len())];
                let at_v: BTreeSet<u32> = g.incident(v).map(|e| e.0).collect();
                let edges = &mut cert.terms[i].edges;
                let keep = edges.iter().map(|&(e, _)| e).find(|e| at_v.contains(e)).unwrap();
                edges.retain(|&(e, _)| e == keep || !at_v.contains(&e));
                for (e, k) in edges.iter_mut() {
                    if *e == keep {
                        *k = 1;
                    }
                }
            }
            Mutation::CopyBound => {
                let edges = &mut cert.terms[i].edges;
                let j = rng.gen_range(0..edges.len());
                edges[j].1 = 3;
            }
            Mutation::Occurrence => {
                let j = (i + 1 + rng.gen_range(0..n - 1)) % n;
                let delta = m(cert, i).min(m(cert, j)) / ratio(2, 1);
                cert.terms[i].multiplier = (m(cert, i) - &delta).to_string();
                cert.terms[j].multiplier = (m(cert, j) + &delta).to_string();
            }
        }
    }
}

fn criterion_7() -> Outcome {
    let mut bases: Vec<Certificate> = ["K4", "K3_3", "prism"]
        .iter()
        .map(|n| Certificate::from_json(&p_certificate(n).unwrap()).unwrap())
        .collect();
    for (_, _, t) in sixfifth_certificates()? {
        bases.push(Certificate::from_json(&t).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut summary = Vec::new();
    for kind in [Mutation::MultiplierSum, Mutation::Bridge, Mutation::CopyBound, Mutation::Occurrence] {
        let mut rejected = 0;
        for round in 0..25 {
            let mut cert = bases[round % bases.len()].clone();
            kind.apply(&mut cert, &mut rng);
            let v = verify(&cert).map_err(|e| e.to_string())?;
            if !v.accepted && v.has(kind.clause()) {
                rejected += 1;
            }
        }
        ensure(rejected == 25, || format!("{kind:?}: {rejected}/25 rejected"))?;
        summary.push(format!("{kind:?} 25/25"));
    }
    Ok(summary.join(", "))
}

/// Writes every certificate of the suite into `dir` through the binary.
fn write_suite(dir: &Path) -> Result<Vec<String>, String> {
    let inputs = dir.join("inputs");
    std::fs::create_dir_all(&inputs).unwrap();
    let mut jobs: Vec<(String, &str, String)> = NAMED
        .iter()
        .map(|n| (format!("P-{n}"), "P", write_plain_graph(&named_cubic(n).unwrap()).unwrap()))
        .collect();
    for n in NAMED {
        jobs.push((format!("Q-{n}"), "Q", text(&expansion(n, &[1]))));
    }
    for (i, (_, x)) in mixed_instances().into_iter().enumerate() {
        jobs.push((format!("sixfifth-{i}"), "sixfifth", text(&x)));
    }
    let mut names = Vec::new();
    for (name, mode, input) in jobs {
        let input_path = inputs.join(format!("{name}.txt"));
        std::fs::write(&input_path, input).unwrap();
        let out = dir.join(format!("{name}.json"));
        let o = Command::new(bin())
            .args(["decompose", "--mode", mode])
            .arg(&input_path)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        ensure(o.status.success(), || {
            format!("{name}: {}", String::from_utf8_lossy(&o.stderr))
        })?;
        names.push(format!("{name}.json"));
    }
    Ok(names)
}

fn criterion_8() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let names = write_suite(a.path())?;
    write_suite(b.path())?;
    for name in &names {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        ensure(x == y, || format!("{name} differs between runs"))?;
    }
    Ok(format!("{} certificate files byte-identical", names.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("cubic certificates at 4/5", criterion_1),
        ("per-edge identities on Petersen", criterion_2),
        ("Q decompositions and frozen base", criterion_3),
        ("6/5 x end to end", criterion_4),
        ("cost bound", criterion_5),
        ("oracle cross-checks", criterion_6),
        ("mutation rejection", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {title} ({detail}) [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
