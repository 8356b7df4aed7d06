//! Command-line front end. Exit codes: 0 success or confirmed, 1 negative
//! verdict, 2 inconclusive, 3 usage or input errors.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::counterexamples::{self, BipartiteOutcome, ConstructionSpec, LcConclusion, SearchConfig};
use crate::error::{Error, Result};
use crate::export;
use crate::graph::SimpleGraph;
use crate::hypergraph::WeightedHypergraph;
use crate::lc::{self, BipartiteSplit, LcVerdict, SolverConfig};
use crate::oracle;
use crate::par::{self, Exec};
use crate::transforms::{self, GateSequence, XRuleMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "lulc", version, about = "Graph and hypergraph state rewriting, LC equivalence and LU/LC counterexamples")]
pub struct Cli {
    /// Worker threads for parallel sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Seed for every randomized choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a graph or hypergraph fixture.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output JSON file (stdout when omitted).
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        /// Also write Graphviz DOT here.
        #[arg(long, global = true)]
        dot: Option<PathBuf>,
        /// Also write the adjacency text format here (graphs only).
        #[arg(long, global = true)]
        adj: Option<PathBuf>,
        /// Write the gate sequence belonging to the fixture here, if any.
        #[arg(long, global = true)]
        witness: Option<PathBuf>,
    },
    /// Apply a gate sequence to a state.
    Transform {
        state: PathBuf,
        sequence: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print per-step edge weight changes to stderr.
        #[arg(long)]
        ledger: bool,
        /// Allow X on qubits with fractional incident edges.
        #[arg(long)]
        extended: bool,
    },
    /// Build a construction and verify it is LU but not LC equivalent to its
    /// partner.
    Verify {
        /// bipartite:N:R, twentyseven or g2h7
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = SolverConfig::default().node_budget)]
        budget: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decide LC equivalence of two labeled graphs.
    CheckLc {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long, default_value_t = SolverConfig::default().node_budget)]
        budget: u64,
    },
    /// Enumerate the local-complementation orbit of a graph.
    Orbit {
        graph: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// Print only the orbit size.
        #[arg(long)]
        count: bool,
    },
    /// Compare the rewrite rules with a dense state-vector simulation.
    OracleCheck {
        state: PathBuf,
        sequence: PathBuf,
        #[arg(long)]
        extended: bool,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Convert a state or graph file.
    Export {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search right-side subsets whose complementation pattern reaches a
    /// target degree distribution.
    Search {
        graph: PathBuf,
        /// Graph whose degree multiset is the target.
        #[arg(long, conflicts_with = "degrees")]
        target: Option<PathBuf>,
        /// Comma-separated target degrees.
        #[arg(long)]
        degrees: Option<String>,
        /// Comma-separated central vertices (default: smaller colour class).
        #[arg(long)]
        left: Option<String>,
        #[arg(long, default_value_t = 4)]
        max_size: usize,
        #[arg(long, default_value_t = 1 << 20)]
        budget: usize,
        /// Draw random subsets (seeded by --seed) instead of enumerating.
        #[arg(long)]
        sample: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenKind {
    /// Bipartite graph: n left vertices, one right vertex per r-subset of them
    Bipartite {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// The 27-vertex bipartite graph
    Twentyseven,
    /// 7-qubit graph whose local gate sequence yields a proper hypergraph state
    G2h7,
    /// Star graph on n vertices centred at 0
    Star {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Dot,
    Json,
    Adj,
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => export::write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
        .collect()
}

fn split_for(g: &SimpleGraph, left: Option<&str>) -> Result<BipartiteSplit> {
    let split = match left {
        Some(list) => {
            let left = parse_list(list)?;
            let right = (0..g.n()).filter(|v| !left.contains(v)).collect();
            BipartiteSplit::new(left, right)
        }
        None => {
            let colors = g
                .two_coloring()
                .map_err(|(u, v)| Error::InvalidSplit(format!("graph is not bipartite, odd cycle through ({u}, {v})")))?;
            let (mut a, mut b): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&v| !colors[v]);
            if b.len() < a.len() {
                std::mem::swap(&mut a, &mut b);
            }
            BipartiteSplit::new(a, b)
        }
    };
    split.validate(g)?;
    Ok(split)
}

#[derive(Serialize)]
struct CheckLcOutput<'a> {
    #[serde(flatten)]
    verdict: &'a LcVerdict,
    solver: lc::SolverStats,
    witness_verified: Option<bool>,
}

#[derive(Serialize)]
struct OrbitOutput {
    size: usize,
    complete: bool,
    graphs: Vec<String>,
}

fn run_command(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Gen { kind, output, dot, adj, witness } => {
            let (state, graph, seq): (WeightedHypergraph, Option<SimpleGraph>, Option<GateSequence>) = match kind {
                GenKind::Bipartite { n, r } => {
                    let (g, _) = counterexamples::build(&ConstructionSpec::BipartiteSubsets { n: *n, r: *r })?;
                    (WeightedHypergraph::from_graph(&g), Some(g), None)
                }
                GenKind::Twentyseven => {
                    let (g, _) = counterexamples::build(&ConstructionSpec::TwentySeven)?;
                    (WeightedHypergraph::from_graph(&g), Some(g), None)
                }
                GenKind::G2h7 => {
                    let (g, w, _) = counterexamples::build_graph_to_hypergraph7()?;
                    (WeightedHypergraph::from_graph(&g), Some(g), Some(w))
                }
                GenKind::Star { n } => {
                    if *n == 0 {
                        return Err(Error::Parse("a star needs at least one vertex".into()));
                    }
                    let edges: Vec<(usize, usize)> = (1..*n).map(|v| (0, v)).collect();
                    let g = SimpleGraph::from_edges(*n, &edges)?;
                    (WeightedHypergraph::from_graph(&g), Some(g), None)
                }
            };
            emit(output, &export::to_json(&state))?;
            if let Some(p) = dot {
                export::write_text(p, &export::to_dot(&state))?;
            }
            if let (Some(p), Some(g)) = (adj, &graph) {
                export::write_text(p, &g.to_adjacency_text())?;
            }
            if let Some(p) = witness {
                let seq = seq.ok_or_else(|| Error::Parse("this fixture has no gate sequence".into()))?;
                export::write_json(p, &seq)?;
            }
            Ok(EXIT_OK)
        }
        Command::Transform { state, sequence, output, ledger, extended } => {
            let h = export::read_state(state)?;
            let seq: GateSequence = export::read_json(sequence)?;
            let mode = if *extended { XRuleMode::Extended } else { XRuleMode::Standard };
            let (out, trace) = transforms::apply_sequence_traced(&h, &seq, mode)?;
            if *ledger {
                for step in &trace {
                    let terms: Vec<String> = step.terms.iter().map(|(e, w)| format!("{e}:{w}")).collect();
                    eprintln!("step {} {}: {}", step.step, step.gate, terms.join(" "));
                }
            }
            emit(output, &export::to_json(&out))?;
            Ok(EXIT_OK)
        }
        Command::Verify { spec, budget, output } => {
            let spec: ConstructionSpec = spec.parse()?;
            let report = counterexamples::verify_construction_with(&spec, &SolverConfig { node_budget: *budget })?;
            emit(output, &export::to_json(&report))?;
            let status = if report.confirmed {
                "counterexample confirmed"
            } else if report.lu_equivalent && report.lc_inconclusive() {
                "inconclusive"
            } else {
                "not a counterexample"
            };
            eprintln!("{spec}: {status}");
            if let Some(note) = &report.lc.solver_note {
                eprintln!("solver: {note}");
            }
            Ok(if report.confirmed {
                EXIT_OK
            } else if report.lu_equivalent && report.lc.verdict == LcConclusion::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::CheckLc { g1, g2, budget } => {
            let (g1, g2) = (export::read_graph(g1)?, export::read_graph(g2)?);
            let (verdict, solver) = lc::lc_equivalent_with(&g1, &g2, &SolverConfig { node_budget: *budget })?;
            let witness_verified = verdict.witness().map(|w| lc::verify_witness(&g1, &g2, w)).transpose()?;
            print!("{}", export::to_json(&CheckLcOutput { verdict: &verdict, solver, witness_verified }));
            Ok(match verdict {
                LcVerdict::Equivalent { .. } => {
                    eprintln!("LC-equivalent");
                    EXIT_OK
                }
                LcVerdict::NotEquivalent => {
                    eprintln!("not LC-equivalent");
                    EXIT_NEGATIVE
                }
                LcVerdict::Inconclusive { reason } => {
                    eprintln!("inconclusive: {reason}");
                    EXIT_INCONCLUSIVE
                }
            })
        }
        Command::Orbit { graph, cap, count } => {
            let g = export::read_graph(graph)?;
            let orbit = lc::lc_orbit(&g, *cap);
            if *count {
                println!("{}", orbit.len());
            } else {
                let graphs = orbit.graphs.iter().map(SimpleGraph::to_adjacency_text).collect();
                print!("{}", export::to_json(&OrbitOutput { size: orbit.len(), complete: orbit.complete, graphs }));
            }
            Ok(if orbit.complete { EXIT_OK } else { EXIT_INCONCLUSIVE })
        }
        Command::OracleCheck { state, sequence, extended, tolerance } => {
            let h = export::read_state(state)?;
            let seq: GateSequence = export::read_json(sequence)?;
            let mode = if *extended { XRuleMode::Extended } else { XRuleMode::Standard };
            let report = oracle::check_sequence(&h, &seq, mode, *tolerance)?;
            print!("{}", export::to_json(&report));
            Ok(if report.passed { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Export { input, format, output } => {
            let h = export::read_state(input)?;
            let text = match format {
                Format::Dot => export::to_dot(&h),
                Format::Json => export::to_json(&h),
                Format::Adj => h.to_graph().ok_or(Error::NotAGraphState)?.to_adjacency_text(),
            };
            emit(output, &text)?;
            Ok(EXIT_OK)
        }
        Command::Search { graph, target, degrees, left, max_size, budget, sample } => {
            let g = export::read_graph(graph)?;
            let split = split_for(&g, left.as_deref())?;
            let target = match (target, degrees) {
                (Some(p), _) => export::read_graph(p)?.degree_sequence(),
                (None, Some(d)) => parse_list(d)?,
                (None, None) => return Err(Error::Parse("give --target or --degrees".into())),
            };
            let cfg = SearchConfig {
                max_subset_size: *max_size,
                budget: *budget,
                sample_seed: sample.then_some(cli.seed),
            };
            let result = counterexamples::degree_distribution_search(&g, &split, &target, &cfg, Exec::default())?;
            print!("{}", export::to_json(&result));
            if let Some(first) = result.candidates.first() {
                if let BipartiteOutcome::Bipartite { split, .. } =
                    counterexamples::bipartite_preserving_sequence(&g, &split, first)?
                {
                    eprintln!("first candidate {first:?} gives a {}-vs-{} split", split.k1(), split.k2());
                }
            }
            Ok(if !result.candidates.is_empty() {
                EXIT_OK
            } else if result.budget_exhausted {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_NEGATIVE
            })
        }
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    if cli.threads > 0 {
        if let Err(e) = par::set_threads(cli.threads) {
            eprintln!("warning: {e}");
        }
    }
    match run_command(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(s) = source {
                eprintln!("  caused by: {s}");
                source = s.source();
            }
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_commands() {
        let cli = Cli::try_parse_from(["lulc", "--seed", "5", "verify", "--spec", "twentyseven"]).unwrap();
        assert_eq!(cli.seed, 5);
        assert!(matches!(cli.command, Command::Verify { .. }));
        let cli = Cli::try_parse_from(["lulc", "gen", "bipartite", "--n", "7", "--r", "5", "-o", "x.json"]).unwrap();
        assert!(matches!(cli.command, Command::Gen { kind: GenKind::Bipartite { n: 7, r: 5 }, .. }));
        assert!(Cli::try_parse_from(["lulc", "frobnicate"]).is_err());
    }

    #[test]
    fn usage_errors_exit_three() {
        assert_eq!(run(["lulc", "verify"]), EXIT_ERROR);
        assert_eq!(run(["lulc", "verify", "--spec", "nonsense"]), EXIT_ERROR);
        assert_eq!(run(["lulc", "--help"]), EXIT_OK);
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("1, 2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_list("1,x").is_err());
        let g = SimpleGraph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(split_for(&g, None).unwrap().left, vec![0]);
        assert!(split_for(&g, Some("1")).is_err());
    }
}
