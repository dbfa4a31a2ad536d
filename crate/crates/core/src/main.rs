use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sparse_sdp::bench::{self, BandedMode};
use sparse_sdp::error::Error;
use sparse_sdp::maxcut::{maxcut_sdp, random_graph, solve_maxcut, Graph};
use sparse_sdp::sdpa::{parse_sdpa, SdpaData};
use sparse_sdp::solver::{feasible_start, solve, DirectionMode, SolveStatus, SolverConfig, SolverSummary};

#[derive(Parser)]
#[command(name = "sparse-sdp", version, about = "Sparse semidefinite programming by potential reduction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an SDP read from an SDPA sparse file (single block).
    Solve {
        input: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Prefix for `<prefix>.iterations.csv` and `<prefix>.summary.json`; defaults to the
        /// input path without its extension.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the MAX-CUT relaxation of an edge-list graph and round it.
    Maxcut {
        graph: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output prefix, as for `solve`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a random simple graph.
    GenGraph {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphFormat::Edges)]
        format: GraphFormat,
        /// Destination file; stdout if omitted.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Per-size averages over random MAX-CUT instances.
    BenchTable1 {
        #[arg(long, default_value = "5:7,10:16,20:40")]
        sizes: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Four against two search directions on identical instances.
    BenchDirections {
        #[arg(long, default_value = "5:7,10:16,20:40")]
        sizes: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Timings of the banded log-det routine.
    BenchBanded {
        #[arg(long, value_enum, default_value_t = BandedArg::FixBandwidth)]
        mode: BandedArg,
        /// Inclusive range of `n` (fix-bandwidth) or `p` (fix-diff), as `lo..hi`.
        #[arg(long, default_value = "6..40")]
        range: String,
        /// The bandwidth (fix-bandwidth, default 3) or `n − p` (fix-diff, default 10).
        #[arg(long)]
        fixed: Option<usize>,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Number of search directions, 4 or 2.
    #[arg(long, default_value_t = 4, value_parser = parse_directions)]
    directions: u8,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    gap_tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            gamma: self.gamma,
            gap_tol: self.gap_tol,
            max_main_iters: self.max_iters,
            direction_mode: if self.directions == 2 { DirectionMode::Two } else { DirectionMode::Four },
            ..SolverConfig::default()
        }
    }
}

fn parse_directions(s: &str) -> Result<u8, String> {
    match s {
        "4" => Ok(4),
        "2" => Ok(2),
        _ => Err("must be 4 or 2".into()),
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Edges,
    Sdpa,
}

#[derive(Clone, Copy, ValueEnum)]
enum BandedArg {
    FixBandwidth,
    FixDiff,
}

#[derive(Serialize)]
struct MaxCutSummary {
    solver: SolverSummary,
    sdp_bound: f64,
    cut_value: f64,
    sides: String,
    trials: usize,
    seed: u64,
}

enum Failure {
    Input(String),
    NotConverged(SolveStatus),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn sink(output: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match output {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn prefixed(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Failure> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn status_result(status: SolveStatus) -> Result<(), Failure> {
    match status {
        SolveStatus::Converged => Ok(()),
        s => Err(Failure::NotConverged(s)),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { input, solver, out } => {
            let data = parse_sdpa(&read(&input)?).map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
            let problem = data.into_problem()?;
            let (x0, y0) = feasible_start(&problem)?;
            let report = solve(&problem, x0, y0, &solver.config())?;
            let prefix = out.unwrap_or_else(|| input.with_extension(""));
            report.write_iterations_csv(create(&prefixed(&prefix, ".iterations.csv"))?)?;
            let summary = report.summary(problem.n(), problem.m());
            write_json(&prefixed(&prefix, ".summary.json"), &summary)?;
            println!("status: {:?}", report.status);
            println!("iterations: {}", report.main_iterations());
            println!("primal objective: {:.9}", report.primal_objective);
            println!("dual objective: {:.9}", report.dual_objective);
            println!("gap: {:.3e}", report.gap);
            status_result(report.status)
        }
        Command::Maxcut { graph, solver, trials, seed, out } => {
            let g = Graph::parse(&read(&graph)?).map_err(|e| Failure::Input(format!("{}: {e}", graph.display())))?;
            let outcome = solve_maxcut(&g, &solver.config(), trials, seed)?;
            let (report, cut) = (&outcome.report, &outcome.cut);
            let sides: String = cut.sides.iter().map(|&s| if s { '1' } else { '0' }).collect();
            let prefix = out.unwrap_or_else(|| graph.with_extension(""));
            report.write_iterations_csv(create(&prefixed(&prefix, ".iterations.csv"))?)?;
            let summary = MaxCutSummary {
                solver: report.summary(outcome.problem.n(), outcome.problem.m()),
                sdp_bound: cut.sdp_bound,
                cut_value: cut.cut_value,
                sides: sides.clone(),
                trials,
                seed,
            };
            write_json(&prefixed(&prefix, ".summary.json"), &summary)?;
            println!("status: {:?}", report.status);
            println!("iterations: {}", report.main_iterations());
            println!("sdp bound: {:.6}", cut.sdp_bound);
            println!("best cut: {}", cut.cut_value);
            println!("sides: {sides}");
            status_result(report.status)
        }
        Command::GenGraph { n, m, seed, format, output } => {
            let g = random_graph(n, m, seed)?;
            let text = match format {
                GraphFormat::Edges => g.to_text(),
                GraphFormat::Sdpa => {
                    let p = maxcut_sdp(&g)?;
                    SdpaData { n, c: p.c_original().clone(), a: p.a_original().to_vec(), b: p.b().to_vec() }.to_text()
                }
            };
            let mut w = sink(&output)?;
            w.write_all(text.as_bytes())?;
            w.flush()?;
            Ok(())
        }
        Command::BenchTable1 { sizes, trials, seed, solver, output } => {
            let rows = bench::table1(&bench::parse_sizes(&sizes)?, trials, seed, &solver.config())?;
            bench::write_csv(&rows, &bench::TABLE1_HEADER, sink(&output)?)?;
            Ok(())
        }
        Command::BenchDirections { sizes, trials, seed, output } => {
            let rows = bench::directions(&bench::parse_sizes(&sizes)?, trials, seed, &SolverConfig::default())?;
            bench::write_csv(&rows, &bench::DIRECTIONS_HEADER, sink(&output)?)?;
            Ok(())
        }
        Command::BenchBanded { mode, range, fixed, reps, seed, output } => {
            let (mode, fixed) = match mode {
                BandedArg::FixBandwidth => (BandedMode::FixBandwidth, fixed.unwrap_or(3)),
                BandedArg::FixDiff => (BandedMode::FixDiff, fixed.unwrap_or(10)),
            };
            let rows = bench::banded(mode, bench::parse_range(&range)?, fixed, reps, seed)?;
            bench::write_csv(&rows, &bench::BANDED_HEADER, sink(&output)?)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    // Usage errors are input errors; clap's own exit code 2 means non-convergence here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(k) = std::env::var("SPARSE_SDP_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::NotConverged(status)) => {
            eprintln!("solver did not converge: {status:?}");
            ExitCode::from(2)
        }
    }
}
