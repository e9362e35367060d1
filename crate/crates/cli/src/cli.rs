use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vminor_core::harness::{self, DEFAULT_N_MAX, FOLIAGE_SAMPLES_PER_SIZE};
use vminor_core::session::SessionStore;
use vminor_core::{
    can_extract_bell_pairs, is_vertex_minor, parse_graph_auto, to_dot, to_edgelist, BellPairTarget, Graph,
    GraphDocument, GraphKind, LcOrbit, PauliBasis, SearchConfig, Vertex, VertexMinorReport, DEFAULT_BUDGET,
    DEFAULT_ORBIT_CAP,
};

use crate::service;

/// Largest n_max accepted without --long.
const QUICK_N_MAX: usize = 8;

#[derive(Debug, Parser)]
#[command(name = "vminor", version, about = "Local complementation, Pauli measurements and vertex-minor search on graph states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Emit JSON
    #[arg(long, conflicts_with = "dot")]
    pub json: bool,
    /// Emit Graphviz DOT
    #[arg(long)]
    pub dot: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Work budget per query (search nodes plus orbit members)
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Maximum LC orbit size
    #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
    pub orbit_cap: usize,
    /// Disable leaf/axil reductions and component pruning
    #[arg(long)]
    pub no_prune: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig { budget: self.budget, orbit_cap: self.orbit_cap, pruning: !self.no_prune, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VerifyTarget {
    Ring,
    Line,
    Foliage,
    Controls,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DemoName {
    Butterfly,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named graph on labels 1..=n
    Make {
        kind: GraphKind,
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply local complementations in order
    Lc {
        /// Graph: ring:N, line:N, complete:N, @file, edge list or JSON
        #[arg(short, long)]
        graph: String,
        #[arg(required = true)]
        vertices: Vec<Vertex>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Apply a Pauli measurement graph action
    Measure {
        #[arg(short, long)]
        graph: String,
        vertex: Vertex,
        basis: PauliBasis,
        /// Special neighbour for an X measurement
        #[arg(short, long)]
        w: Option<Vertex>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Toggle the edge between two vertices (CZ gate)
    Cz {
        #[arg(short, long)]
        graph: String,
        u: Vertex,
        v: Vertex,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Leaves, axils, twins and connected components
    Foliage {
        #[arg(short, long)]
        graph: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Enumerate the LC orbit
    Orbit {
        #[arg(short, long)]
        graph: String,
        #[arg(long, default_value_t = DEFAULT_ORBIT_CAP)]
        cap: usize,
        /// Print only the orbit size
        #[arg(long)]
        count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether TARGET is a vertex-minor of GRAPH
    Vminor {
        #[arg(short, long)]
        graph: String,
        #[arg(short, long)]
        target: String,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether Bell pairs (a1,a2) and (b1,b2) can be extracted
    Bell {
        #[arg(short, long)]
        graph: String,
        a1: Vertex,
        a2: Vertex,
        b1: Vertex,
        b2: Vertex,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive checks: no crossing on rings/lines, foliage invariance, non-crossing controls
    Verify {
        what: VerifyTarget,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        /// Allow n_max above 8 (long running)
        #[arg(long)]
        long: bool,
        /// Random graphs per size beyond the exhaustive foliage range
        #[arg(long, default_value_t = FOLIAGE_SAMPLES_PER_SIZE)]
        samples: usize,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        json: bool,
    },
    /// Reproduce a worked example
    Demo {
        name: DemoName,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP session service
    Serve {
        /// Listen address (default from VMINOR_LISTEN, else 127.0.0.1:8080)
        #[arg(long)]
        listen: Option<String>,
        #[arg(long, default_value_t = vminor_core::session::DEFAULT_SESSION_CAPACITY)]
        max_sessions: usize,
        #[arg(long, default_value_t = vminor_core::session::DEFAULT_CHECK_BUDGET)]
        check_budget: u64,
    },
}

/// Resolve a graph argument: `ring:N`, `line:N`, `complete:N`, `@path`, or literal text.
pub fn load_graph(spec: &str) -> anyhow::Result<Graph> {
    if let Some((kind, n)) = spec.split_once(':') {
        if let Ok(kind) = kind.parse::<GraphKind>() {
            let n: usize = n.trim().parse().with_context(|| format!("bad size in `{spec}`"))?;
            return Ok(Graph::named(kind, n)?);
        }
    }
    let text = match spec.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?,
        None => spec.to_string(),
    };
    Ok(parse_graph_auto(&text)?)
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn emit_graph(g: &Graph, out: &OutputArgs) -> anyhow::Result<()> {
    if out.json {
        println!("{}", serde_json::to_string(&GraphDocument::from_graph(g))?);
    } else if out.dot {
        print!("{}", to_dot(g, None));
    } else {
        println!("{}", to_edgelist(g));
    }
    Ok(())
}

fn emit_report(report: &VertexMinorReport, json: bool) -> anyhow::Result<()> {
    if json {
        return print_json(report);
    }
    println!("decision: {}", report.decision);
    if let Some(w) = &report.witness {
        println!("measurements: {}", w.measurements);
        let lc: Vec<String> = w.lc_path.iter().map(|v| v.to_string()).collect();
        println!("lc path: {}", if lc.is_empty() { "(none)".to_string() } else { lc.join(" ") });
    }
    let s = &report.stats;
    println!(
        "nodes: {}  sequences: {}  orbit: {}  reductions: {} isolated, {} leaf, {} axil  component prunes: {}",
        s.nodes_visited,
        s.sequences_tried,
        s.orbit_size,
        s.isolated_reductions,
        s.leaf_reductions,
        s.axil_reductions,
        s.component_prunes
    );
    Ok(())
}

fn status(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Make { kind, n, out } => emit_graph(&Graph::named(kind, n)?, &out)?,
        Command::Lc { graph, vertices, out } => {
            emit_graph(&load_graph(&graph)?.local_complement_seq(&vertices)?, &out)?
        }
        Command::Measure { graph, vertex, basis, w, out } => {
            let basis = match (basis, w) {
                (PauliBasis::X { .. }, w) => PauliBasis::X { special: w },
                (b, None) => b,
                (_, Some(_)) => bail!("--w only applies to X measurements"),
            };
            emit_graph(&load_graph(&graph)?.measure(vertex, basis)?, &out)?
        }
        Command::Cz { graph, u, v, out } => emit_graph(&load_graph(&graph)?.toggle_cz(u, v)?, &out)?,
        Command::Foliage { graph, out } => {
            let g = load_graph(&graph)?;
            let f = g.foliage();
            if out.json {
                print_json(&serde_json::json!({
                    "foliage": f,
                    "members": f.members(),
                    "components": g.connected_components(),
                }))?;
            } else if out.dot {
                print!("{}", to_dot(&g, Some(&f)));
            } else {
                let list = |s: &mut dyn Iterator<Item = String>| s.collect::<Vec<_>>().join(" ");
                println!("leaves:     {}", list(&mut f.leaves.iter().map(|v| v.to_string())));
                println!("axils:      {}", list(&mut f.axils.iter().map(|v| v.to_string())));
                println!("twins:      {}", list(&mut f.twins.iter().map(|(a, b)| format!("{a}~{b}"))));
                println!("foliage:    {}", list(&mut f.members().iter().map(|v| v.to_string())));
                let comps = g.connected_components();
                println!(
                    "components: {}",
                    list(&mut comps.iter().map(|c| format!("{{{}}}", list(&mut c.iter().map(|v| v.to_string())))))
                );
            }
        }
        Command::Orbit { graph, cap, count, json } => {
            let orbit = LcOrbit::build(&load_graph(&graph)?, cap)?;
            if json {
                let docs: Vec<GraphDocument> = orbit.graphs().iter().map(GraphDocument::from_graph).collect();
                print_json(&serde_json::json!({ "size": orbit.len(), "graphs": if count { vec![] } else { docs } }))?;
            } else {
                println!("orbit size: {}", orbit.len());
                if !count {
                    for g in orbit.graphs() {
                        println!("{}", to_edgelist(g));
                    }
                }
            }
        }
        Command::Vminor { graph, target, search, json } => {
            let report = is_vertex_minor(&load_graph(&graph)?, &load_graph(&target)?, &search.config())?;
            emit_report(&report, json)?;
        }
        Command::Bell { graph, a1, a2, b1, b2, search, json } => {
            let target = BellPairTarget::new((a1, a2), (b1, b2))?;
            let report = can_extract_bell_pairs(&load_graph(&graph)?, &target, &search.config())?;
            if !json {
                println!("target: {target}{}", if target.is_crossing() { " (crossing)" } else { "" });
            }
            emit_report(&report, json)?;
        }
        Command::Verify { what, n_max, long, samples, search, json } => {
            if n_max > QUICK_N_MAX && !long && !matches!(what, VerifyTarget::Foliage) {
                bail!("n_max above {QUICK_N_MAX} is long running; pass --long to allow it");
            }
            let config = search.config();
            let ok = match what {
                VerifyTarget::Ring | VerifyTarget::Line => {
                    let report = match what {
                        VerifyTarget::Ring => harness::verify_ring_no_crossing(n_max, &config)?,
                        _ => harness::verify_line_no_crossing(n_max, &config)?,
                    };
                    if json { print_json(&report)? } else { println!("{report}") }
                    report.confirmed()
                }
                VerifyTarget::Foliage => {
                    let report = harness::verify_foliage_invariance(n_max, samples)?;
                    if json { print_json(&report)? } else { println!("{report}") }
                    report.confirmed()
                }
                VerifyTarget::Controls => {
                    let report = harness::verify_noncrossing_controls(n_max, &config)?;
                    if json { print_json(&report)? } else { println!("{report}") }
                    report.confirmed()
                }
            };
            return Ok(status(ok));
        }
        Command::Demo { name: DemoName::Butterfly, json } => {
            let demo = harness::demo_ring_butterfly(&SearchConfig::default())?;
            if json { print_json(&demo)? } else { println!("{demo}") }
            return Ok(status(demo.replays() && !demo.direct_crossing_feasible));
        }
        Command::Serve { listen, max_sessions, check_budget } => {
            let addr = listen
                .or_else(|| std::env::var(service::LISTEN_ENV).ok())
                .unwrap_or_else(|| service::DEFAULT_LISTEN.to_string());
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(service::serve(&addr, SessionStore::new(max_sessions, check_budget)))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}
