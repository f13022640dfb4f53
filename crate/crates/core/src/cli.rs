//! Command-line front end.
//!
//! Exit codes: 0 success, 1 rejected, 2 parse error or malformed input,
//! 3 structural precondition, 4 size cap.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use crate::certificate::{sha256_hex, Certificate, RunManifest, TargetKind};
use crate::combo::{parse_rational, ratio, Rational};
use crate::cubic::decompose_cubic;
use crate::error::Error;
use crate::graph::text::{parse_costs, parse_graph};
use crate::graph::{EdgeId, FractionalSolution};
use crate::instances::{parse_lengths, parse_spec, InstanceSpec};
use crate::oracle::{enumerate_2ecss, find_convex_combination, opt_2ec, ratio_experiment, Feasibility};
use crate::verifier::verify_text;
use crate::Limits;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_SIZE_CAP: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "twoec", version, about = "Exact 2-edge-connected convex-combination certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    #[value(name = "P")]
    P,
    #[value(name = "Q")]
    Q,
    #[value(name = "sixfifth")]
    SixFifth,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build and self-verify a certificate for a graph file.
    Decompose {
        #[arg(long, value_enum)]
        mode: Mode,
        input: PathBuf,
        /// Designated 1-edge (any edge of its 1-path) for Q and sixfifth.
        #[arg(long)]
        p_edge: Option<u32>,
        /// Largest cubic graph handed to the cubic decomposer.
        #[arg(long)]
        size_cap: Option<usize>,
        /// Recorded in the manifest; the construction is deterministic.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Check a certificate file.
    Verify { certificate: PathBuf },
    /// Brute-force oracle runs.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Write a generated instance in the graph format.
    Generate {
        /// `key = value` spec file; overrides the flags below.
        #[arg(long)]
        config: Option<PathBuf>,
        /// named-cubic, triangle-expansion, chained-gadgets or random-ht.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        base: Option<String>,
        /// Comma-separated path lengths.
        #[arg(long)]
        lengths: Option<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCommand {
    /// Exact minimum-cost 2-edge-connected spanning multi-subgraph.
    Opt {
        graph: PathBuf,
        costs: PathBuf,
        #[arg(long)]
        missing_zero: bool,
        #[arg(long)]
        size_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// `OPT` against `c·x` for a fractional solution.
    Ratio {
        graph: PathBuf,
        costs: PathBuf,
        #[arg(long)]
        missing_zero: bool,
        #[arg(long)]
        size_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Is the uniform vector `target` a convex combination of the pool?
    Feas {
        graph: PathBuf,
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 2)]
        max_copies: u32,
        #[arg(long)]
        size_cap: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Malformed(_) | Error::Io(_) => EXIT_MALFORMED,
        Error::SizeCap { .. } => EXIT_SIZE_CAP,
        Error::Precondition(_)
        | Error::Structure(_)
        | Error::NotHalfTriangle { .. }
        | Error::UnknownEdge(_)
        | Error::UnknownVertex(_)
        | Error::NoValidP
        | Error::NoAdmissibleCut(_)
        | Error::NegativeCost { .. }
        | Error::UnknownInstance(_) => EXIT_PRECONDITION,
        Error::WeightSum(_)
        | Error::DeficitNotCoverable { .. }
        | Error::PatternMassMismatch(_)
        | Error::InternalInvariant(_) => EXIT_REJECTED,
    }
}

fn read(path: &Path) -> Result<String, Error> {
    Ok(std::fs::read_to_string(path)?)
}

/// Writes `text` to `out` through a temporary file in the same directory,
/// or to stdout.
pub fn write_output(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| Error::Io(e.error))?;
            Ok(())
        }
    }
}

fn caps(limits: &Limits) -> BTreeMap<String, usize> {
    [
        ("cubic_max_vertices", limits.cubic_max_vertices),
        ("cut_enumeration", limits.cut_enumeration),
        ("feasibility_max_vertices", limits.feasibility_max_vertices),
        ("oracle_max_edges", limits.oracle_max_edges),
        ("pool_max", limits.pool_max),
        ("simplex_max_columns", limits.simplex_max_columns),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect()
}

fn unit_solution(x: &FractionalSolution) -> Result<FractionalSolution, Error> {
    FractionalSolution::new(
        x.graph.clone(),
        x.graph.edge_ids().map(|e| (e, ratio(1, 1))).collect(),
    )
}

/// Builds the certificate text for `decompose`.
pub fn decompose(
    mode: Mode,
    input_text: &str,
    p_edge: Option<u32>,
    limits: &Limits,
    seed: Option<u64>,
) -> Result<String, Error> {
    let x = parse_graph(input_text)?;
    let mut command = format!("decompose --mode {}", match mode {
        Mode::P => "P",
        Mode::Q => "Q",
        Mode::SixFifth => "sixfifth",
    });
    if let Some(p) = p_edge {
        write!(command, " --p-edge {p}").unwrap();
    }
    let manifest = RunManifest {
        command,
        input_hashes: [("input".to_string(), sha256_hex(input_text.as_bytes()))]
            .into_iter()
            .collect(),
        caps: caps(limits),
        seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    let cert = match mode {
        Mode::P => {
            if p_edge.is_some() {
                return Err(Error::Precondition("--p-edge applies to Q and sixfifth only".into()));
            }
            let c = decompose_cubic(&x.graph, limits)?;
            let trace = vec![format!(
                "cubic {} vertices, {} terms",
                x.graph.vertex_count(),
                c.terms.len()
            )];
            Certificate::new(TargetKind::P, &unit_solution(&x)?, None, &c, trace, manifest)?
        }
        Mode::Q => {
            let h = crate::graph::validate_half_triangle(&x)?;
            crate::ht::require_simple(&h)?;
            let p = match p_edge {
                Some(e) => crate::ht::resolve_p(&h, EdgeId(e))?,
                None => crate::ht::choose_p(&h, limits)?,
            };
            let (c, trace) = crate::ht::decompose_ht_traced(&h, p, limits)?;
            Certificate::new(TargetKind::Q, &x, Some(p), &c, trace, manifest)?
        }
        Mode::SixFifth => {
            let run = crate::ht::decompose_sixfifth(&x, p_edge.map(EdgeId), limits)?;
            let p_first = run.structure.path_of(run.p).map(|path| path.edges[0]);
            Certificate::new(TargetKind::SixFifth, &x, p_first, &run.sixfifth, run.trace, manifest)?
        }
    };
    let text = cert.to_json();
    let verdict = verify_text(&text)?;
    if !verdict.accepted {
        let lines: Vec<String> = verdict.failures.iter().map(|f| f.to_string()).collect();
        return Err(Error::InternalInvariant(format!(
            "self-verification failed: {}",
            lines.join("; ")
        )));
    }
    Ok(text)
}

fn report(lines: &[(&str, String)]) -> String {
    lines.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

fn oracle_limits(size_cap: Option<usize>) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = size_cap {
        limits.oracle_max_edges = cap;
    }
    limits
}

fn subgraph_text(s: &crate::combo::Subgraph) -> String {
    s.iter().map(|(e, k)| format!("{}:{k}", e.0)).collect::<Vec<_>>().join(" ")
}

fn run_oracle(cmd: OracleCommand) -> Result<(String, Option<PathBuf>), Error> {
    match cmd {
        OracleCommand::Opt {
            graph,
            costs,
            missing_zero,
            size_cap,
            out,
        } => {
            let limits = oracle_limits(size_cap);
            let x = parse_graph(&read(&graph)?)?;
            let c = parse_costs(&read(&costs)?, &x.graph, missing_zero)?;
            let (opt, witness) = opt_2ec(&x.graph, &c, &limits)?;
            Ok((report(&[("opt", opt.to_string()), ("witness", subgraph_text(&witness))]), out))
        }
        OracleCommand::Ratio {
            graph,
            costs,
            missing_zero,
            size_cap,
            out,
        } => {
            let limits = oracle_limits(size_cap);
            let x = parse_graph(&read(&graph)?)?;
            let c = parse_costs(&read(&costs)?, &x.graph, missing_zero)?;
            let r = ratio_experiment(&x, &c, &limits)?;
            let text = report(&[
                ("cx", r.cx.to_string()),
                ("opt", r.opt.to_string()),
                ("ratio", r.ratio.map_or("undefined".to_string(), |q| q.to_string())),
                ("certified", r.certified.to_string()),
                ("scope", "support graph only, no metric completion".to_string()),
            ]);
            Ok((text, out))
        }
        OracleCommand::Feas {
            graph,
            target,
            max_copies,
            size_cap,
            out,
        } => {
            let limits = oracle_limits(size_cap);
            let x = parse_graph(&read(&graph)?)?;
            let t: Rational = parse_rational(&target).map_err(|m| Error::Parse { line: 0, message: m })?;
            let pool = enumerate_2ecss(&x.graph, max_copies, &limits)?;
            let target_map = x.graph.edge_ids().map(|e| (e, t.clone())).collect();
            let mut lines = vec![("pool", pool.len().to_string())];
            match find_convex_combination(&x.graph, &pool, &target_map, &limits)? {
                Feasibility::Feasible(c) => {
                    lines.push(("result", "feasible".to_string()));
                    lines.push(("terms", c.terms.len().to_string()));
                    for t in &c.terms {
                        lines.push(("term", format!("{} {}", t.multiplier, subgraph_text(&t.subgraph))));
                    }
                }
                Feasibility::Infeasible { farkas } => {
                    lines.push(("result", "infeasible".to_string()));
                    let y: Vec<String> = farkas.iter().map(|v| v.to_string()).collect();
                    lines.push(("farkas", y.join(" ")));
                }
            }
            Ok((report(&lines), out))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn generate_spec(
    config: Option<PathBuf>,
    kind: Option<String>,
    name: Option<String>,
    base: Option<String>,
    lengths: Option<String>,
    k: Option<usize>,
    seed: Option<u64>,
    n: Option<usize>,
    max_len: Option<usize>,
) -> Result<InstanceSpec, Error> {
    if let Some(path) = config {
        return parse_spec(&read(&path)?);
    }
    let missing = |flag: &str| Error::Precondition(format!("generate needs --{flag}"));
    let kind = kind.ok_or_else(|| missing("kind or --config"))?;
    Ok(match kind.as_str() {
        "named-cubic" => InstanceSpec::NamedCubic {
            name: name.ok_or_else(|| missing("name"))?,
        },
        "triangle-expansion" => InstanceSpec::TriangleExpansion {
            base: base.ok_or_else(|| missing("base"))?,
            lengths: parse_lengths(lengths.as_deref().unwrap_or(""))
                .map_err(|m| Error::Parse { line: 0, message: m })?,
        },
        "chained-gadgets" => InstanceSpec::ChainedGadgets {
            k: k.ok_or_else(|| missing("k"))?,
        },
        "random-ht" => InstanceSpec::RandomHt {
            seed: seed.ok_or_else(|| missing("seed"))?,
            n: n.ok_or_else(|| missing("n"))?,
            max_len: max_len.ok_or_else(|| missing("max-len"))?,
        },
        other => return Err(Error::UnknownInstance(other.to_string())),
    })
}

/// Runs one command and returns its exit code. Reports go to stdout or
/// `--out`, diagnostics to stderr.
pub fn run(cli: Cli) -> i32 {
    let started = Instant::now();
    let result: Result<i32, Error> = (|| match cli.command {
        Command::Decompose {
            mode,
            input,
            p_edge,
            size_cap,
            seed,
            out,
            format: Format::Text,
        } => {
            let mut limits = Limits::default();
            if let Some(cap) = size_cap {
                limits.cubic_max_vertices = cap;
            }
            let text = decompose(mode, &read(&input)?, p_edge, &limits, seed)?;
            write_output(out.as_deref(), &text)?;
            eprintln!("elapsed_ms = {}", started.elapsed().as_millis());
            Ok(EXIT_OK)
        }
        Command::Verify { certificate } => {
            let verdict = verify_text(&read(&certificate)?)?;
            if verdict.accepted {
                println!("accepted");
                Ok(EXIT_OK)
            } else {
                println!("rejected");
                for f in &verdict.failures {
                    println!("{f}");
                }
                Ok(EXIT_REJECTED)
            }
        }
        Command::Oracle { command } => {
            let (text, out) = run_oracle(command)?;
            write_output(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
        Command::Generate {
            config,
            kind,
            name,
            base,
            lengths,
            k,
            seed,
            n,
            max_len,
            out,
        } => {
            let spec = generate_spec(config, kind, name, base, lengths, k, seed, n, max_len)?;
            let text = spec.generate()?.to_text()?;
            write_output(out.as_deref(), &text)?;
            Ok(EXIT_OK)
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `args` (including the program name) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Malformed("x".into())), EXIT_MALFORMED);
        assert_eq!(
            exit_code(&Error::SizeCap {
                what: "x",
                limit: 1,
                actual: 2
            }),
            EXIT_SIZE_CAP
        );
        assert_eq!(exit_code(&Error::NoValidP), EXIT_PRECONDITION);
    }

    #[test]
    fn decompose_k4_text() {
        let g = crate::instances::named_cubic("K4").unwrap();
        let input = crate::graph::text::write_plain_graph(&g).unwrap();
        let a = decompose(Mode::P, &input, None, &Limits::default(), None).unwrap();
        let b = decompose(Mode::P, &input, None, &Limits::default(), None).unwrap();
        assert_eq!(a, b);
        let cert = Certificate::from_json(&a).unwrap();
        assert_eq!(cert.terms.len(), 4);
    }

    #[test]
    fn non_cubic_p_input_is_a_precondition_error() {
        let input = "4 4\n0 1 1\n1 2 1\n2 3 1\n0 3 1\n";
        let e = decompose(Mode::P, input, None, &Limits::default(), None).unwrap_err();
        assert_eq!(exit_code(&e), EXIT_PRECONDITION);
    }
}
