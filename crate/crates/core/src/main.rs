use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use resmatch::e2sat::{gen_random, parse_e2sat, E2SatInstance};
use resmatch::matching::{enumerate_max_matchings, maximum_matching};
use resmatch::reduction::{dot_diagram, reduce, validate_reduction, Theorem};
use resmatch::residual::{special_case_residual, summarize, witness_ge, witness_le};
use resmatch::{Budget, Error, Graph, SpecialClass};

const EXIT_NO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_FAILURE: u8 = 3;

#[derive(Parser)]
#[command(
    name = "resmatch",
    version,
    about = "Residual matching numbers and the Max E2-SAT reductions"
)]
struct Cli {
    /// Node budget for exhaustive searches (overrides RESMATCH_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Max,
    Min,
    Ge,
    Le,
}

#[derive(Subcommand)]
enum Command {
    /// Residual optimum or decision over the maximum matchings of a graph.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(short = 'k', required_if_eq_any([("mode", "ge"), ("mode", "le")]))]
        k: Option<usize>,
    },
    /// A maximum matching, or all of them with --all.
    Matching {
        graph: PathBuf,
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10_000)]
        limit: usize,
    },
    /// Build the reduction graph for a strict instance.
    Reduce {
        cnf: PathBuf,
        #[arg(short = 'K')]
        big_k: usize,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write a Graphviz wiring diagram.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Validate the reduction for an instance, for K in a range (default 1..=m).
    Verify {
        cnf: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(long)]
        k_min: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Seed recorded in the report's reproducer.
        #[arg(long)]
        seed: Option<u64>,
        /// Delete the edge with this index before validating.
        #[arg(long, hide = true)]
        mutate_edge: Option<usize>,
    },
    /// Generate a seeded strict instance in DIMACS form.
    Gen {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Closed-form residual range for paths, cycles, Δ ≤ 2 and regular bipartite graphs.
    Special { graph: PathBuf },
    /// Vertex and edge counts, maximum degree, connectivity.
    Stats { graph: PathBuf },
}

enum Failure {
    Usage(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let budget = cli.budget.map_or_else(Budget::from_env, Budget::new);
    match run(cli.command, budget) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Compute(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

fn read_input(path: &Path) -> io::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path)
            .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))
    }
}

fn load_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(Graph::from_json(&read_input(path)?)?)
}

fn load_cnf(path: &Path) -> Result<E2SatInstance, Failure> {
    Ok(parse_e2sat(&read_input(path)?)?)
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json serializes")
    );
}

fn write_or_print(output: Option<&Path>, text: &str) -> io::Result<()> {
    match output {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn theorem(n: u8) -> Theorem {
    Theorem::from_number(n).expect("clap restricts the range")
}

fn run(command: Command, budget: Budget) -> Outcome {
    match command {
        Command::Solve { graph, mode, k } => {
            let g = load_graph(&graph)?;
            solve(&g, mode, k, budget)
        }
        Command::Matching { graph, all, limit } => {
            let g = load_graph(&graph)?;
            if all {
                let ms = enumerate_max_matchings(&g, limit, budget)?;
                let list: Vec<_> = ms.iter().map(|m| m.to_id_pairs(&g)).collect();
                eprintln!("{} maximum matchings of size {}", ms.len(), ms[0].len());
                print_json(&json!({ "size": ms[0].len(), "count": ms.len(), "matchings": list }));
            } else {
                let m = maximum_matching(&g, budget)?;
                eprintln!("matching number {}", m.len());
                print_json(&json!({ "size": m.len(), "edges": m.to_id_pairs(&g) }));
            }
            Ok(0)
        }
        Command::Reduce {
            cnf,
            big_k,
            theorem: th,
            output,
            dot,
        } => {
            let inst = load_cnf(&cnf)?;
            let art = reduce(&inst, big_k, theorem(th))?;
            let g = art.graph();
            eprintln!(
                "theorem {th}: k={} |V|={} |E|={} m={} n={}",
                art.k,
                g.vertex_count(),
                g.edge_count(),
                art.m(),
                art.n()
            );
            if let Some(p) = &dot {
                fs::write(p, dot_diagram(&art))?;
            }
            match &output {
                Some(p) => {
                    fs::write(p, art.to_json())?;
                    print_json(&json!({
                        "theorem": th,
                        "k": art.k,
                        "K": big_k,
                        "vertices": g.vertex_count(),
                        "edges": g.edge_count(),
                        "output": p.display().to_string(),
                    }));
                }
                None => print!("{}", art.to_json()),
            }
            Ok(0)
        }
        Command::Verify {
            cnf,
            theorem: th,
            k_min,
            k_max,
            output,
            seed,
            mutate_edge,
        } => {
            let inst = load_cnf(&cnf)?;
            let m = inst.num_clauses();
            let lo = k_min.unwrap_or(1);
            let hi = k_max.unwrap_or(m);
            if lo < 1 || hi > m || lo > hi {
                return Err(Failure::Usage(format!(
                    "K range {lo}..={hi} not inside 1..={m}"
                )));
            }
            let mut art = reduce(&inst, lo, theorem(th))?;
            if let Some(idx) = mutate_edge {
                let e = *art
                    .graph()
                    .edges()
                    .get(idx)
                    .ok_or_else(|| Failure::Usage(format!("no edge with index {idx}")))?;
                art = art.with_edge_removed(e);
            }
            let ks: Vec<usize> = (lo..=hi).collect();
            let mut report = validate_reduction(&art, &ks, budget);
            if let Some(s) = seed {
                report = report.with_seed(s);
            }
            let text = report.to_json();
            if let Some(p) = &output {
                fs::write(p, &text)?;
            }
            print!("{text}");
            for c in &report.checks {
                eprintln!("{:<18} {:?}: {}", c.name, c.status, c.detail);
            }
            Ok(if report.passed { 0 } else { EXIT_FAILURE })
        }
        Command::Gen {
            vars,
            clauses,
            seed,
            output,
        } => {
            let inst = gen_random(vars, clauses, seed)?;
            write_or_print(output.as_deref(), &inst.to_dimacs())?;
            eprintln!("generated {inst}");
            Ok(0)
        }
        Command::Special { graph } => {
            let g = load_graph(&graph)?;
            let class = resmatch::graph::classify_special(&g);
            let s = special_case_residual(&g)
                .ok_or_else(|| Failure::Compute("graph is not in a closed-form class".into()))?;
            eprintln!(
                "{}: residual range ({}, {})",
                class_name(&class),
                s.min_residual,
                s.max_residual
            );
            let mut v = s.to_json(&g);
            v["class"] = json!(class_name(&class));
            print_json(&v);
            Ok(0)
        }
        Command::Stats { graph } => {
            let g = load_graph(&graph)?;
            let s = g.stats();
            eprintln!(
                "{} vertices, {} edges, max degree {}, {}",
                s.vertices,
                s.edges,
                s.max_degree,
                if s.connected {
                    "connected"
                } else {
                    "disconnected"
                }
            );
            let mut v = serde_json::to_value(s).expect("stats serialize");
            v["bipartite"] = json!(g.two_coloring().is_some());
            print_json(&v);
            Ok(0)
        }
    }
}

fn solve(g: &Graph, mode: Mode, k: Option<usize>, budget: Budget) -> Outcome {
    match mode {
        Mode::Max | Mode::Min => {
            let s = summarize(g, budget)?;
            eprintln!(
                "beta = {}, residual range ({}, {})",
                s.beta, s.min_residual, s.max_residual
            );
            print_json(&s.to_json(g));
            Ok(0)
        }
        Mode::Ge | Mode::Le => {
            let k = k.ok_or_else(|| Failure::Usage("-k is required for ge/le".into()))?;
            let (name, witness) = match mode {
                Mode::Ge => ("ge", witness_ge(g, k, budget)?),
                _ => ("le", witness_le(g, k, budget)?),
            };
            let yes = witness.is_some() || (name == "ge" && k == 0);
            eprintln!("{name} {k}: {}", if yes { "yes" } else { "no" });
            print_json(&json!({
                "mode": name,
                "k": k,
                "answer": yes,
                "witness": witness.map(|w| w.to_id_pairs(g)),
            }));
            Ok(if yes { 0 } else { EXIT_NO })
        }
    }
}

fn class_name(c: &SpecialClass) -> String {
    match c {
        SpecialClass::Path(k) => format!("path P_{k}"),
        SpecialClass::Cycle(n) => format!("cycle C_{n}"),
        SpecialClass::DegreeAtMostTwo(parts) => format!("{} paths and cycles", parts.len()),
        SpecialClass::RegularBipartite(r) => format!("{r}-regular bipartite"),
        SpecialClass::General => "general".into(),
    }
}
