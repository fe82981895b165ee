// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Command-line front end: color, verify, generate, benchmark, oracle.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use edgecolor::bench::{bench_sweep, format_summary, summarize, write_csv, SweepConfig};
use edgecolor::engine::{run_full, RunConfig};
use edgecolor::generate::{generate, GenSpec, Model};
use edgecolor::io::{load_coloring, read_edge_list, write_coloring, write_edge_list, LabeledGraph};
use edgecolor::oracle::brute_chromatic_index;
use edgecolor::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "edgecolor",
    version,
    about = "Randomized (1+eps)Delta edge coloring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Color the edges of a graph given as an edge list.
    Color(ColorArgs),
    /// Check a coloring file against a graph.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        coloring: PathBuf,
    },
    /// Generate a random or structured graph.
    Gen(GenArgs),
    /// Time the algorithm over random regular graphs and write a CSV.
    Bench(BenchArgs),
    /// Compute the exact chromatic index of a small graph.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(clap::Args)]
struct ColorArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, env = "EDGECOLOR_SEED", default_value_t = 0)]
    seed: u64,
    /// Coloring output; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 4.0)]
    kappa_const: f64,
    #[arg(long, default_value_t = 2.0)]
    ell_const: f64,
    #[arg(long, default_value_t = 100.0)]
    t_const: f64,
    #[arg(long, default_value_t = 3)]
    max_restarts: u32,
    /// Report FAIL instead of falling back to greedy 2*Delta-1 coloring.
    #[arg(long)]
    no_fallback: bool,
    /// Write run statistics as key=value lines.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Include wall-clock timings in the statistics.
    #[arg(long)]
    timings: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Gnp,
    Regular,
    Complete,
    Bipartite,
    Hypercube,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long, env = "EDGECOLOR_SEED", default_value_t = 0)]
    seed: u64,
    /// Edge list output; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', default_value = "400,800,1600,3200")]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 100)]
    degree: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    epsilons: Vec<f64>,
    #[arg(long, default_value_t = 5)]
    trials: usize,
    #[arg(long, env = "EDGECOLOR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure modes of a subcommand, mapped to exit codes.
enum Outcome {
    Fail(String),
    Usage(String),
}

impl From<Error> for Outcome {
    fn from(err: Error) -> Self {
        match err {
            Error::Exhausted { .. } | Error::FlaggedDegreeExceeded { .. } => {
                Outcome::Fail(err.to_string())
            }
            other => Outcome::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Outcome {
    fn from(err: std::io::Error) -> Self {
        Outcome::Usage(err.to_string())
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Outcome> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn color(args: ColorArgs) -> Result<(), Outcome> {
    let graph = read_edge_list(&args.input)?;
    let cfg = RunConfig {
        epsilon: args.epsilon,
        kappa_const: args.kappa_const,
        ell_const: args.ell_const,
        t_const: args.t_const,
        seed: args.seed,
        max_restarts: args.max_restarts,
        small_delta_fallback: !args.no_fallback,
    };
    let coloring = run_full(&graph.graph, &cfg)?;
    let report = coloring.state.validate_proper();
    if !report.is_complete() {
        return Err(Outcome::Fail(format!(
            "internal error: produced coloring is not proper and complete: {report:?}"
        )));
    }
    let mut out = output(args.output.as_deref())?;
    write_coloring(&mut out, &graph, &coloring.state)?;
    out.flush()?;
    if let Some(path) = args.stats {
        std::fs::write(path, coloring.stats.to_kv(args.timings))?;
    }
    if coloring.stats.fallback_used {
        eprintln!(
            "warning: fell back to greedy coloring after {} attempts",
            coloring.stats.restarts + 1
        );
    }
    Ok(())
}

fn verify(input: &Path, coloring: &Path) -> Result<(), Outcome> {
    let graph = read_edge_list(input)?;
    let text = std::fs::read_to_string(coloring)?;
    let state = load_coloring(&graph, &text)?;
    let report = state.validate_proper();
    let label = |v: usize| graph.labels[v].as_str();
    let mut ok = true;
    for c in &report.conflicts {
        let (e1, e2) = c.edges;
        let (a, b) = graph.graph.endpoints(e1);
        let (x, y) = graph.graph.endpoints(e2);
        eprintln!(
            "conflict: edges {} {} and {} {} share color {} at vertex {}",
            label(a),
            label(b),
            label(x),
            label(y),
            c.color,
            label(c.vertex)
        );
        ok = false;
    }
    let uncolored = report.blank + report.flagged;
    if uncolored > 0 {
        eprintln!("{uncolored} edge(s) uncolored");
        ok = false;
    }
    if !ok {
        return Err(Outcome::Fail("coloring rejected".into()));
    }
    println!(
        "ok: {} edges, {} colors, max degree {}",
        graph.graph.edge_count(),
        report.max_color,
        graph.graph.max_degree()
    );
    Ok(())
}

fn model_of(args: &GenArgs) -> Result<Model, Outcome> {
    fn need<T>(v: Option<T>, name: &str) -> Result<T, Outcome> {
        v.ok_or_else(|| Outcome::Usage(format!("--{name} is required for this model")))
    }
    Ok(match args.model {
        ModelKind::Gnp => Model::Gnp {
            n: need(args.n, "n")?,
            p: need(args.p, "p")?,
        },
        ModelKind::Regular => Model::RandomRegular {
            n: need(args.n, "n")?,
            d: need(args.d, "d")?,
        },
        ModelKind::Complete => Model::Complete {
            n: need(args.n, "n")?,
        },
        ModelKind::Bipartite => Model::CompleteBipartite {
            a: need(args.a, "a")?,
            b: need(args.b, "b")?,
        },
        ModelKind::Hypercube => Model::Hypercube {
            dim: need(args.dim, "dim")?,
        },
    })
}

fn gen(args: GenArgs) -> Result<(), Outcome> {
    let spec = GenSpec::new(model_of(&args)?, args.seed);
    let graph = LabeledGraph::from_graph(generate(&spec)?);
    let mut out = output(args.out.as_deref())?;
    write_edge_list(&mut out, &graph)?;
    out.flush()?;
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Outcome> {
    let workers = args.workers.unwrap_or_else(|| {
        std::thread::available_parallelism()
            .map(usize::from)
            .unwrap_or(1)
    });
    let sweep = SweepConfig {
        sizes: args.sizes,
        degree: args.degree,
        epsilons: args.epsilons,
        trials: args.trials,
        run: RunConfig {
            seed: args.seed,
            ..RunConfig::default()
        },
        workers,
    };
    let records = bench_sweep(&sweep);
    let mut out = output(args.out.as_deref())?;
    write_csv(&mut out, &records)?;
    out.flush()?;
    eprint!("{}", format_summary(&summarize(&records)));
    Ok(())
}

fn oracle(input: &Path) -> Result<(), Outcome> {
    let graph = read_edge_list(input)?;
    let result = brute_chromatic_index(&graph.graph)?;
    println!(
        "chromatic_index={} max_degree={}",
        result.chromatic_index,
        graph.graph.max_degree()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Color(args) => color(args),
        Command::Verify { input, coloring } => verify(&input, &coloring),
        Command::Gen(args) => gen(args),
        Command::Bench(args) => bench(args),
        Command::Oracle { input } => oracle(&input),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Outcome::Fail(msg)) => {
            eprintln!("FAIL: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
        Err(Outcome::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
