use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use simplicia::report::{motif_json, motif_section, InputInfo};
use simplicia::synth::{realizes, synthesize_with, SynthError, SynthesisOptions, SynthesisTarget};
use simplicia::{analyze, build_flag_complex, compute_p, count_all_ads, generate_er, parse_graph, serialize_graph};
use simplicia::{AnalyzeOptions, Backend, DirectedGraph, GraphError, GraphFormat, RngSeed};

#[derive(Parser)]
#[command(
    name = "simplicia",
    version,
    about = "Almost-simplex census and simplex closing statistics for directed graphs"
)]
struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count simplices and almost-simplices and report closing probabilities.
    Analyze(AnalyzeArgs),
    /// Write a uniform random digraph with a fixed edge count.
    GenEr(GenErArgs),
    /// Construct a graph realizing target completion probabilities.
    Synth(SynthArgs),
    /// Divergent, chain and convergent motif closing ratios.
    Motifs(MotifArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    input: PathBuf,
    /// Highest simplex dimension to build.
    #[arg(long)]
    max_dim: Option<usize>,
    /// Matched ER replicates to compare against.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    baseline: Option<u64>,
    /// Include the motif block.
    #[arg(long)]
    motifs: bool,
    /// Use strict instances as the primary motif ratio.
    #[arg(long, requires = "motifs")]
    strict: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit the per-dimension table as CSV instead of JSON.
    #[arg(long)]
    csv: bool,
    /// Record wall time in the report.
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct GenErArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Comma-separated rationals, e.g. "1/3,1/5".
    #[arg(long)]
    target: String,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest vertex count to try.
    #[arg(long, default_value_t = 100_000)]
    bound: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct MotifArgs {
    input: PathBuf,
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn io(message: String) -> Self {
        Failure { code: 1, message }
    }
    fn usage(message: String) -> Self {
        Failure { code: 2, message }
    }
}

fn read_graph(path: &Path) -> Result<DirectedGraph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    parse_graph(&text, GraphFormat::EdgeList).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let start = Instant::now();
    let opts = AnalyzeOptions {
        max_dim: a.max_dim,
        baseline: a.baseline.map(|r| r as usize),
        motifs: a.motifs,
        seed: a.seed,
        strict_motifs: a.strict,
    };
    let mut report =
        analyze(&g, Some(&a.input.display().to_string()), &opts).map_err(|e| Failure::io(e.to_string()))?;
    if a.timing {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    let text = if a.csv { report.to_csv() } else { report.to_json() };
    emit(a.out.as_deref(), &text)
}

fn cmd_gen_er(a: GenErArgs) -> Result<(), Failure> {
    let g = generate_er(a.n, a.m, RngSeed(a.seed)).map_err(|e| match e {
        GraphError::TooManyEdges { .. } => Failure::usage(e.to_string()),
        other => Failure::io(other.to_string()),
    })?;
    emit(a.out.as_deref(), &serialize_graph(&g))
}

fn cmd_synth(a: SynthArgs) -> Result<(), Failure> {
    let target: SynthesisTarget = a.target.parse().map_err(|e: SynthError| Failure::usage(e.to_string()))?;
    let opts = SynthesisOptions { max_vertices: a.bound, seed: RngSeed(a.seed), ..SynthesisOptions::default() };
    let out = synthesize_with(&target, &opts).map_err(|e| match e {
        SynthError::Infeasible { .. } => Failure { code: 3, message: e.to_string() },
        other => Failure::usage(other.to_string()),
    })?;
    let g = &out.graph;
    let counts = count_all_ads(g, &build_flag_complex(g, None));
    let measured: Vec<String> = compute_p(&counts)
        .iter()
        .take(target.dim())
        .map(|p| p.as_ref().map_or("undefined".into(), |r| r.to_string()))
        .collect();
    let verification = format!(
        "method: {}\nvertices: {}\nedges: {}\ntarget: {target}\nmeasured: {}\nexact: {}\n",
        out.method.name(),
        g.vertex_count(),
        g.edge_count(),
        measured.join(","),
        realizes(g, &target),
    );
    emit(a.out.as_deref(), &serialize_graph(g))?;
    if a.out.is_some() {
        print!("{verification}");
    } else {
        eprint!("{verification}");
    }
    Ok(())
}

fn cmd_motifs(a: MotifArgs) -> Result<(), Failure> {
    let g = read_graph(&a.input)?;
    let section = motif_section(&g, a.strict, Backend::default())
        .map_err(|e| Failure::io(format!("internal consistency: {e}")))?;
    let input = InputInfo {
        path: Some(a.input.display().to_string()),
        vertices: g.vertex_count() as u64,
        edges: g.edge_count() as u64,
    };
    emit(a.out.as_deref(), &motif_json(&input, &section))
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::GenEr(a) => cmd_gen_er(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Motifs(a) => cmd_motifs(a),
    }
}

#[cfg(feature = "parallel")]
fn run(cli: Cli) -> Result<(), Failure> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(Failure::usage("--threads must be at least 1".into()));
        }
        builder = builder.num_threads(t);
    }
    let pool = builder.build().map_err(|e| Failure::io(e.to_string()))?;
    pool.install(|| dispatch(cli.command))
}

#[cfg(not(feature = "parallel"))]
fn run(cli: Cli) -> Result<(), Failure> {
    dispatch(cli.command)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
