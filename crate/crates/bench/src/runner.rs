use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use hidden_topk::{
    brute_force_topk, dsoe_star_topk, dsoe_topk, load_manifest, soe_topk, BipartiteGraph,
    BudgetRule, DatasetFormat, DatasetManifest, DsoeConfig, DsoeStarConfig, Executor, ProbeOracle,
    SampleRule, Side, SoeConfig,
};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::BenchError;
use crate::record::{CsvRow, ExperimentRecord, ResultEntry, SCHEMA_VERSION};

type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Soe,
    Dsoe,
    DsoeStar,
}

impl FromStr for Algorithm {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "soe" => Ok(Algorithm::Soe),
            "dsoe" => Ok(Algorithm::Dsoe),
            "dsoe-star" | "dsoe*" => Ok(Algorithm::DsoeStar),
            other => Err(BenchError::Usage(format!(
                "unknown algorithm {other:?} (expected soe, dsoe or dsoe-star)"
            ))),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Soe => "soe",
            Algorithm::Dsoe => "dsoe",
            Algorithm::DsoeStar => "dsoe-star",
        })
    }
}

/// One algorithm invocation.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub k: usize,
    pub workers: usize,
    /// Sampling seed; only DSOE* draws random numbers.
    pub seed: u64,
    pub probe_delay_us: u64,
    pub dsoe: DsoeConfig,
    pub sample_rule: SampleRule,
    pub budget_rule: BudgetRule,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, k: usize) -> Self {
        Self {
            algorithm,
            k,
            workers: 1,
            seed: 0,
            probe_delay_us: 0,
            dsoe: DsoeConfig::default(),
            sample_rule: SampleRule::default(),
            budget_rule: BudgetRule::default(),
        }
    }

    fn params(&self) -> String {
        let mode = match self.dsoe.budget_mode {
            hidden_topk::BudgetMode::PerRound => "per-round",
            hidden_topk::BudgetMode::Cumulative => "cumulative",
        };
        match self.algorithm {
            Algorithm::Soe => String::new(),
            Algorithm::Dsoe => format!(
                "budget={}x{} {mode}",
                self.dsoe.initial_budget, self.dsoe.growth_factor
            ),
            Algorithm::DsoeStar => {
                format!("sample={} budget={}", self.sample_rule, self.budget_rule)
            }
        }
    }
}

/// Loads a dataset given on the command line.
pub fn load_dataset(
    path: &Path,
    format: DatasetFormat,
    side: Side,
) -> Result<(DatasetManifest, BipartiteGraph)> {
    let manifest = DatasetManifest::new(path, format, side);
    let (graph, report) = load_manifest(&manifest)?;
    info!(
        "loaded {}: n_b={} n_w={} m={} ({} duplicates, {} self-loops dropped)",
        manifest.name,
        graph.n_black(),
        graph.n_white(),
        graph.m(),
        report.duplicates,
        report.self_loops
    );
    Ok((manifest, graph))
}

/// Reads a TOML manifest. A relative dataset path is taken relative to the
/// manifest file.
pub fn load_manifest_file(path: &Path) -> Result<DatasetManifest> {
    let text = fs::read_to_string(path).map_err(BenchError::io(path))?;
    let mut manifest: DatasetManifest =
        toml::from_str(&text).map_err(|e| BenchError::format(path)(e.to_string()))?;
    if manifest.path.is_relative() {
        if let Some(dir) = path.parent() {
            manifest.path = dir.join(&manifest.path);
        }
    }
    Ok(manifest)
}

/// Runs one algorithm and checks the answer before returning it. Only the
/// algorithm call is timed.
pub fn run_experiment(
    dataset: &str,
    graph: &BipartiteGraph,
    source_side: Side,
    spec: &RunSpec,
) -> Result<ExperimentRecord> {
    if spec.k == 0 {
        return Err(BenchError::Usage("k must be at least 1".into()));
    }
    if spec.k > graph.n_black() as usize {
        warn!(
            "k = {} exceeds n_b = {}; every vertex will be probed exhaustively",
            spec.k,
            graph.n_black()
        );
    }
    let exec = Executor::new(spec.workers)?;
    let mut oracle = ProbeOracle::new(graph);
    if spec.probe_delay_us > 0 {
        oracle = oracle.with_delay(Duration::from_micros(spec.probe_delay_us));
    }

    let start = Instant::now();
    let run = match spec.algorithm {
        Algorithm::Soe => soe_topk(&oracle, spec.k, &SoeConfig::default()),
        Algorithm::Dsoe => dsoe_topk(&oracle, spec.k, &spec.dsoe, &exec),
        Algorithm::DsoeStar => {
            let cfg = DsoeStarConfig {
                sample_rule: spec.sample_rule,
                budget_rule: spec.budget_rule,
                seed: spec.seed,
                ..DsoeStarConfig::default()
            };
            dsoe_star_topk(&oracle, spec.k, &cfg, &exec)
        }
    }?;
    let time_ms = start.elapsed().as_secs_f64() * 1e3;

    let record = ExperimentRecord {
        schema: SCHEMA_VERSION,
        dataset: dataset.to_owned(),
        algorithm: spec.algorithm,
        params: spec.params(),
        k: spec.k,
        workers: spec.workers,
        seed: spec.seed,
        source_side,
        n_b: graph.n_black(),
        n_w: graph.n_white(),
        probes: run.probes,
        time_ms,
        threshold: run.threshold,
        k_exceeds_vertices: run.result.k_exceeds_vertices,
        rounds: run.rounds,
        result: run
            .result
            .entries
            .iter()
            .map(|e| ResultEntry {
                vertex: u64::from(e.vertex) + 1,
                degree: e.degree,
            })
            .collect(),
    };
    record.validate().map_err(BenchError::Invariant)?;
    if run.probes != oracle.probes() {
        return Err(BenchError::Invariant(format!(
            "run reported {} probes but the oracle counted {}",
            run.probes,
            oracle.probes()
        )));
    }
    let expected = brute_force_topk(graph, spec.k)?;
    if record.result_set() != expected {
        return Err(BenchError::Invariant(format!(
            "{} answer differs from brute force (top {:?} vs {:?})",
            spec.algorithm,
            record.top_degree(),
            expected.top_degree()
        )));
    }
    Ok(record)
}

/// File name used for a record inside an output directory.
pub fn record_file_name(record: &ExperimentRecord) -> String {
    format!(
        "{}-{}-k{}-w{}-s{}.json",
        record.dataset, record.algorithm, record.k, record.workers, record.seed
    )
}

pub fn write_record(record: &ExperimentRecord, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(BenchError::io(path))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, record)
        .map_err(|e| BenchError::format(path)(e.to_string()))?;
    writeln!(out)
        .and_then(|_| out.flush())
        .map_err(BenchError::io(path))
}

pub fn read_record(path: &Path) -> Result<ExperimentRecord> {
    let file = File::open(path).map_err(BenchError::io(path))?;
    let record: ExperimentRecord = serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| BenchError::format(path)(e.to_string()))?;
    if record.schema != SCHEMA_VERSION {
        return Err(BenchError::format(path)(format!(
            "unsupported schema {}",
            record.schema
        )));
    }
    Ok(record)
}

/// Appends rows to a CSV file, writing the header only when the file is new
/// or empty.
pub fn append_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(BenchError::io(path))?;
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    for row in rows {
        wtr.serialize(row)
            .map_err(|e| BenchError::format(path)(e.to_string()))?;
    }
    wtr.flush().map_err(BenchError::io(path))
}

/// Writes the record JSON into `out_dir` and appends its row to
/// `out_dir/results.csv`. Returns the JSON path.
pub fn emit(record: &ExperimentRecord, out_dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(out_dir).map_err(BenchError::io(out_dir))?;
    let json = out_dir.join(record_file_name(record));
    write_record(record, &json)?;
    append_csv(&out_dir.join("results.csv"), &[record.csv_row()])?;
    Ok(json)
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub base: RunSpec,
    pub k_values: Vec<usize>,
    pub worker_values: Vec<usize>,
    pub seeds: Vec<u64>,
}

/// A sweep cell; measurement columns are empty when the cell failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub workers: usize,
    pub seed: u64,
    pub source_side: Side,
    pub probes: Option<u64>,
    pub time_ms: Option<f64>,
    pub result_size: Option<usize>,
    pub top_degree: Option<u32>,
    pub status: String,
}

impl SweepRow {
    fn ok(row: CsvRow) -> Self {
        Self {
            dataset: row.dataset,
            algorithm: row.algorithm,
            k: row.k,
            workers: row.workers,
            seed: row.seed,
            source_side: row.source_side,
            probes: Some(row.probes),
            time_ms: Some(row.time_ms),
            result_size: Some(row.result_size),
            top_degree: row.top_degree,
            status: "ok".into(),
        }
    }
}

/// Mean probes and time per (k, workers) cell over all seeds that succeeded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub algorithm: Algorithm,
    pub k: usize,
    pub workers: usize,
    pub runs: usize,
    pub mean_probes: f64,
    pub mean_time_ms: f64,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub summary: Vec<SummaryRow>,
    pub records: Vec<ExperimentRecord>,
    pub failures: Vec<BenchError>,
}

/// Runs the cross product sequentially. Failed cells are recorded and the
/// sweep continues. Writes `sweep.csv`, `summary.csv` and `records.jsonl`
/// into `out_dir`.
pub fn sweep(
    dataset: &str,
    graph: &BipartiteGraph,
    source_side: Side,
    spec: &SweepSpec,
    out_dir: &Path,
) -> Result<SweepOutcome> {
    if spec.k_values.is_empty() || spec.worker_values.is_empty() || spec.seeds.is_empty() {
        return Err(BenchError::Usage(
            "sweep needs at least one k, one worker count and one seed".into(),
        ));
    }
    fs::create_dir_all(out_dir).map_err(BenchError::io(out_dir))?;
    let mut outcome = SweepOutcome::default();
    for &k in &spec.k_values {
        for &workers in &spec.worker_values {
            for &seed in &spec.seeds {
                let cell = RunSpec {
                    k,
                    workers,
                    seed,
                    ..spec.base.clone()
                };
                match run_experiment(dataset, graph, source_side, &cell) {
                    Ok(record) => {
                        info!(
                            "k={k} workers={workers} seed={seed}: {} probes, {:.1} ms",
                            record.probes, record.time_ms
                        );
                        outcome.rows.push(SweepRow::ok(record.csv_row()));
                        outcome.records.push(record);
                    }
                    Err(e) => {
                        warn!("k={k} workers={workers} seed={seed} failed: {e}");
                        outcome.rows.push(SweepRow {
                            dataset: dataset.to_owned(),
                            algorithm: cell.algorithm,
                            k,
                            workers,
                            seed,
                            source_side,
                            probes: None,
                            time_ms: None,
                            result_size: None,
                            top_degree: None,
                            status: format!("error: {e}"),
                        });
                        outcome.failures.push(e);
                    }
                }
            }
        }
    }
    outcome.summary = summarize(&outcome.records);

    let csv_path = out_dir.join("sweep.csv");
    let _ = fs::remove_file(&csv_path);
    append_csv(&csv_path, &outcome.rows)?;
    let summary_path = out_dir.join("summary.csv");
    let _ = fs::remove_file(&summary_path);
    append_csv(&summary_path, &outcome.summary)?;

    let jsonl = out_dir.join("records.jsonl");
    let file = File::create(&jsonl).map_err(BenchError::io(&jsonl))?;
    let mut out = BufWriter::new(file);
    for record in &outcome.records {
        serde_json::to_writer(&mut out, record)
            .map_err(|e| BenchError::format(&jsonl)(e.to_string()))?;
        writeln!(out).map_err(BenchError::io(&jsonl))?;
    }
    out.flush().map_err(BenchError::io(&jsonl))?;
    Ok(outcome)
}

fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    let mut cells: BTreeMap<(Algorithm, usize, usize), (usize, f64, f64)> = BTreeMap::new();
    for r in records {
        let cell = cells.entry((r.algorithm, r.k, r.workers)).or_default();
        cell.0 += 1;
        cell.1 += r.probes as f64;
        cell.2 += r.time_ms;
    }
    cells
        .into_iter()
        .map(
            |((algorithm, k, workers), (runs, probes, time))| SummaryRow {
                algorithm,
                k,
                workers,
                runs,
                mean_probes: probes / runs as f64,
                mean_time_ms: time / runs as f64,
            },
        )
        .collect()
}

/// Difference between two records of the same dataset and k.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub results_equal: bool,
    /// `b - a`.
    pub probe_delta: i128,
    pub time_delta_ms: f64,
    /// First rank at which the answers differ.
    pub first_difference: Option<String>,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "results: {}",
            if self.results_equal {
                "equal"
            } else {
                "DIFFERENT"
            }
        )?;
        if let Some(d) = &self.first_difference {
            writeln!(f, "first difference: {d}")?;
        }
        writeln!(f, "probe delta (b - a): {:+}", self.probe_delta)?;
        write!(f, "time delta (b - a): {:+.3} ms", self.time_delta_ms)
    }
}

pub fn compare(a: &ExperimentRecord, b: &ExperimentRecord) -> Result<Comparison> {
    if a.dataset != b.dataset || a.source_side != b.source_side {
        return Err(BenchError::Incompatible(format!(
            "datasets differ ({} side {} vs {} side {})",
            a.dataset, a.source_side, b.dataset, b.source_side
        )));
    }
    if a.k != b.k {
        return Err(BenchError::Incompatible(format!(
            "k differs ({} vs {})",
            a.k, b.k
        )));
    }
    let first_difference = a
        .result
        .iter()
        .zip(&b.result)
        .position(|(x, y)| x != y)
        .or_else(|| (a.result.len() != b.result.len()).then(|| a.result.len().min(b.result.len())))
        .map(|i| {
            format!(
                "rank {}: {:?} vs {:?}",
                i + 1,
                a.result.get(i),
                b.result.get(i)
            )
        });
    Ok(Comparison {
        results_equal: first_difference.is_none(),
        probe_delta: i128::from(b.probes) - i128::from(a.probes),
        time_delta_ms: b.time_ms - a.time_ms,
        first_difference,
    })
}
