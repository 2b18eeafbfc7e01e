use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use arir::bench::{run_manifest, write_csv, BenchManifest};
use arir::framework::{self, RunConfig, Variant};
use arir::graph::io::{read_graph, read_solution, write_metis, write_solution, Format, IndexBase};
use arir::oracle::exact_mis;
use arir::reductions::{kernelize, RuleSet};
use arir::{Error, StaticGraph};

#[derive(Parser)]
#[command(name = "arir", version, about = "Maximum independent set local search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print run statistics as JSON.
    Solve(SolveArgs),
    /// Run a benchmark manifest and write the Max/Avg table as CSV.
    Bench(BenchArgs),
    /// Check that a solution file is an independent set of a graph.
    Verify(VerifyArgs),
    /// Reduce a graph and write the kernel, its log and the id map.
    Kernelize(KernelizeArgs),
    /// Compute α exactly (at most 64 vertices).
    Oracle(InputArgs),
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "auto")]
    format: Format,
    #[arg(long, default_value = "auto")]
    index_base: IndexBase,
}

impl InputArgs {
    fn load(&self) -> Result<StaticGraph, Error> {
        read_graph(&self.input, self.format, self.index_base)
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "arir2")]
    variant: Variant,
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    m: u64,
    #[arg(long, default_value_t = 100_000)]
    adapt_n: u64,
    /// Stop after this many local-search iterations (deterministic mode).
    #[arg(long)]
    max_iterations: Option<u64>,
    #[arg(long)]
    emit_solution: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Concurrent runs; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Output file; stdout if omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args)]
struct KernelizeArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "advanced")]
    ruleset: RuleSet,
    /// Output prefix: writes PREFIX.graph, PREFIX.log and PREFIX.map.
    #[arg(long)]
    output: PathBuf,
}

/// Failures mapped to process exit codes.
enum Failure {
    Usage(String),
    Input(Error),
    Rejected(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::EmptyGraph | Error::File { .. } | Error::Manifest(_) => {
                Failure::Input(e)
            }
            Error::Config(m) => Failure::Usage(m),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn init_logging() {
    let level = std::env::var("ARIR_LOG").unwrap_or_else(|_| "off".into());
    env_logger::Builder::new()
        .parse_filters(&level)
        .target(env_logger::Target::Stderr)
        .init();
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|source| {
        Failure::Input(Error::File {
            path: path.to_path_buf(),
            source,
        })
    })
}

fn solve(args: SolveArgs) -> Result<(), Failure> {
    let graph = Arc::new(args.input.load()?);
    let config = RunConfig {
        variant: args.variant,
        m: args.m,
        n: args.adapt_n,
        cutoff_seconds: args.time_limit,
        seed: args.seed,
        max_iterations: args.max_iterations,
        ..RunConfig::default()
    };
    let mut outcome = framework::run(&graph, &config)?;
    if !graph.is_independent(&outcome.solution) {
        return Err(Failure::Internal(
            "reported solution is not independent".into(),
        ));
    }
    outcome.stats.instance = args.input.input.display().to_string();
    if let Some(path) = &args.emit_solution {
        write_file(path, &write_solution(&outcome.solution))?;
    }
    let json =
        serde_json::to_string(&outcome.stats).map_err(|e| Failure::Internal(e.to_string()))?;
    println!("{json}");
    Ok(())
}

fn bench(args: BenchArgs) -> Result<(), Failure> {
    let manifest = BenchManifest::load(&args.manifest)?;
    let report = run_manifest(&manifest, args.jobs);
    match &args.csv {
        Some(path) => {
            let file = fs::File::create(path).map_err(|source| {
                Failure::Input(Error::File {
                    path: path.clone(),
                    source,
                })
            })?;
            write_csv(&report.rows, file)?;
        }
        None => write_csv(&report.rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<(), Failure> {
    let graph = args.input.load()?;
    let set = read_solution(&args.solution)?;
    if let Some(bad) = set.iter().find(|&v| v >= graph.vertex_count()) {
        return Err(Failure::Usage(format!(
            "vertex {bad} out of range (graph has {} vertices)",
            graph.vertex_count()
        )));
    }
    let independent = graph.is_independent(&set);
    let maximal = independent && graph.is_maximal(&set);
    println!(
        "{}",
        serde_json::json!({ "size": set.len(), "independent": independent, "maximal": maximal })
    );
    if independent {
        Ok(())
    } else {
        Err(Failure::Rejected("solution is not independent".into()))
    }
}

fn kernelize_cmd(args: KernelizeArgs) -> Result<(), Failure> {
    let graph = Arc::new(args.input.load()?);
    let k = kernelize(graph, args.ruleset);
    let with_ext = |ext: &str| {
        let mut name = args.output.clone().into_os_string();
        name.push(ext);
        PathBuf::from(name)
    };
    write_file(&with_ext(".graph"), &write_metis(&k.kernel))?;
    let log = format!(
        "# fixed={} folds={}\n{}",
        k.fixed_count,
        k.fold_count,
        k.log.to_text()
    );
    write_file(&with_ext(".log"), &log)?;
    let map: String = k
        .kernel_to_working
        .iter()
        .map(|v| format!("{v}\n"))
        .collect();
    write_file(&with_ext(".map"), &map)?;
    println!(
        "kernel {} {} {} {}",
        k.kernel.vertex_count(),
        k.kernel.edge_count(),
        k.fixed_count,
        k.fold_count
    );
    Ok(())
}

fn oracle(args: InputArgs) -> Result<(), Failure> {
    let graph = args.load()?;
    let result = exact_mis(&graph).map_err(|e| Failure::Usage(e.to_string()))?;
    println!(
        "{}",
        serde_json::json!({ "alpha": result.alpha, "witness": result.witness.to_vec() })
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_logging();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify(a),
        Command::Kernelize(a) => kernelize_cmd(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(3)
        }
    }
}
