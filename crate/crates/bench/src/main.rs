use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hidden_topk::{
    generate_powerlaw, generate_random, write_konect, BudgetMode, BudgetRule, DatasetFormat,
    DsoeConfig, SampleRule, Side,
};
use hidden_topk_bench::runner::{emit, read_record};
use hidden_topk_bench::{
    compare, load_dataset, load_manifest_file, run_experiment, sweep, Algorithm, BenchError,
    RunSpec, SweepSpec,
};
use log::info;

/// Top-k degree discovery experiments on hidden bipartite graphs.
#[derive(Parser, Debug)]
#[command(name = "hidden-topk", version)]
struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one algorithm once and record the result.
    Run(RunArgs),
    /// Run the cross product of k, worker and seed values.
    Sweep(SweepArgs),
    /// Compare two JSON records; exits 3 if the answers differ.
    Compare { a: PathBuf, b: PathBuf },
    /// Write a synthetic graph as a KONECT file.
    Generate(GenerateArgs),
}

#[derive(Args, Debug)]
struct DatasetArgs {
    /// Edge-list file (`.gz` accepted).
    #[arg(
        long,
        required_unless_present = "manifest",
        conflicts_with = "manifest"
    )]
    dataset: Option<PathBuf>,
    /// TOML dataset manifest with declared counts to validate against.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, default_value_t = DatasetFormat::KonectBipartite)]
    format: DatasetFormat,
    /// Side whose vertices are ranked; defaults to b, or the manifest's side.
    #[arg(long)]
    source_side: Option<Side>,
}

#[derive(Args, Debug)]
struct AlgoArgs {
    #[arg(long)]
    algorithm: Algorithm,
    /// Artificial latency added to every probe.
    #[arg(long, default_value_t = 0)]
    probe_delay_us: u64,
    #[arg(long, default_value_t = 2)]
    budget_initial: u64,
    #[arg(long, default_value_t = 2)]
    budget_growth: u64,
    /// per-round or cumulative.
    #[arg(long, default_value = "cumulative")]
    budget_mode: BudgetMode,
    /// `loglog` or a fixed sample count.
    #[arg(long, default_value_t = SampleRule::LogLog)]
    sample_rule: SampleRule,
    /// Negative budget from the prediction, e.g. `p+1` or `2p+1`.
    #[arg(long, default_value_t = BudgetRule::default())]
    budget_rule: BudgetRule,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory for the JSON record and `results.csv`.
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    dataset: DatasetArgs,
    #[command(flatten)]
    algo: AlgoArgs,
    /// Comma-separated k values.
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    workers: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    seed: Vec<u64>,
    #[arg(long, default_value = "results")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    /// uniform or powerlaw.
    #[arg(long, default_value = "powerlaw")]
    model: String,
    #[arg(long)]
    n_b: u32,
    #[arg(long)]
    n_w: u32,
    /// Edge probability (uniform).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Tail exponent (powerlaw).
    #[arg(long, default_value_t = 2.0)]
    exponent: f64,
    /// Target mean black degree (powerlaw).
    #[arg(long, default_value_t = 5.0)]
    mean: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

impl AlgoArgs {
    fn spec(&self, k: usize) -> RunSpec {
        RunSpec {
            probe_delay_us: self.probe_delay_us,
            dsoe: DsoeConfig {
                initial_budget: self.budget_initial,
                growth_factor: self.budget_growth,
                budget_mode: self.budget_mode,
                ..DsoeConfig::default()
            },
            sample_rule: self.sample_rule,
            budget_rule: self.budget_rule,
            ..RunSpec::new(self.algorithm, k)
        }
    }
}

fn load(args: &DatasetArgs) -> Result<(String, hidden_topk::BipartiteGraph, Side), BenchError> {
    match (&args.manifest, &args.dataset) {
        (Some(path), _) => {
            let mut manifest = load_manifest_file(path)?;
            if let Some(side) = args.source_side {
                manifest.source_side = side;
            }
            let (graph, _) = hidden_topk::load_manifest(&manifest)?;
            Ok((manifest.name, graph, manifest.source_side))
        }
        (None, Some(path)) => {
            let side = args.source_side.unwrap_or_default();
            let (manifest, graph) = load_dataset(path, args.format, side)?;
            Ok((manifest.name, graph, side))
        }
        (None, None) => Err(BenchError::Usage(
            "either --dataset or --manifest is required".into(),
        )),
    }
}

fn execute(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run(args) => {
            let (name, graph, side) = load(&args.dataset)?;
            let spec = RunSpec {
                workers: args.workers,
                seed: args.seed,
                ..args.algo.spec(args.k)
            };
            let record = run_experiment(&name, &graph, side, &spec)?;
            let path = emit(&record, &args.out)?;
            println!(
                "{} {} k={} workers={}: probes={} time_ms={:.3} result_size={} top_degree={}",
                record.dataset,
                record.algorithm,
                record.k,
                record.workers,
                record.probes,
                record.time_ms,
                record.result.len(),
                record.top_degree().map_or("-".into(), |d| d.to_string())
            );
            info!("wrote {}", path.display());
        }
        Command::Sweep(args) => {
            let (name, graph, side) = load(&args.dataset)?;
            let spec = SweepSpec {
                base: args.algo.spec(1),
                k_values: args.k,
                worker_values: args.workers,
                seeds: args.seed,
            };
            let outcome = sweep(&name, &graph, side, &spec, &args.out)?;
            for row in &outcome.summary {
                println!(
                    "{} k={} workers={}: mean probes {:.1}, mean time {:.3} ms over {} runs",
                    row.algorithm, row.k, row.workers, row.mean_probes, row.mean_time_ms, row.runs
                );
            }
            if let Some(worst) = outcome.failures.into_iter().max_by_key(|e| e.exit_code()) {
                return Err(worst);
            }
        }
        Command::Compare { a, b } => {
            let ra = read_record(&a)?;
            let rb = read_record(&b)?;
            let cmp = compare(&ra, &rb)?;
            println!("{cmp}");
            if !cmp.results_equal {
                return Err(BenchError::Invariant("result sets differ".into()));
            }
        }
        Command::Generate(args) => {
            let graph = match args.model.as_str() {
                "uniform" => generate_random(args.n_b, args.n_w, args.p, args.seed)?,
                "powerlaw" => {
                    generate_powerlaw(args.n_b, args.n_w, args.exponent, args.mean, args.seed)?
                }
                other => {
                    return Err(BenchError::Usage(format!(
                        "unknown model {other:?} (expected uniform or powerlaw)"
                    )))
                }
            };
            let file = std::fs::File::create(&args.out).map_err(|source| BenchError::Io {
                path: args.out.clone(),
                source,
            })?;
            let mut out = std::io::BufWriter::new(file);
            write_konect(&graph, &mut out)
                .and_then(|_| std::io::Write::flush(&mut out))
                .map_err(|source| BenchError::Io {
                    path: args.out.clone(),
                    source,
                })?;
            println!(
                "wrote {}: n_b={} n_w={} m={}",
                args.out.display(),
                graph.n_black(),
                graph.n_white(),
                graph.m()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
