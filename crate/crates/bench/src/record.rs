use hidden_topk::{ResultSet, RoundStats, Side};
use serde::{Deserialize, Serialize};

use crate::runner::Algorithm;

pub const SCHEMA_VERSION: u32 = 1;

/// A result vertex as it appears in the dataset file (1-based label).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultEntry {
    pub vertex: u64,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub schema: u32,
    pub dataset: String,
    pub algorithm: Algorithm,
    /// Algorithm parameters in flag syntax, e.g. `budget=2x2 cumulative`.
    pub params: String,
    pub k: usize,
    pub workers: usize,
    pub seed: u64,
    pub source_side: Side,
    pub n_b: u32,
    pub n_w: u32,
    pub probes: u64,
    pub time_ms: f64,
    pub threshold: Option<u32>,
    pub k_exceeds_vertices: bool,
    pub rounds: Vec<RoundStats>,
    pub result: Vec<ResultEntry>,
}

impl ExperimentRecord {
    pub fn top_degree(&self) -> Option<u32> {
        self.result.first().map(|e| e.degree)
    }

    /// The answer as a [`ResultSet`] over 0-based ids.
    pub fn result_set(&self) -> ResultSet {
        ResultSet {
            k: self.k,
            entries: self
                .result
                .iter()
                .map(|e| hidden_topk::RankedVertex {
                    vertex: (e.vertex - 1) as u32,
                    degree: e.degree,
                })
                .collect(),
            k_exceeds_vertices: self.k_exceeds_vertices,
        }
    }

    /// Tie closure, ordering and the probe bound.
    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err(format!("unsupported schema {}", self.schema));
        }
        if self.result.iter().any(|e| e.vertex == 0) {
            return Err("vertex labels are 1-based".into());
        }
        self.result_set().check_shape()?;
        let bound = u64::from(self.n_b) * u64::from(self.n_w);
        if self.probes > bound {
            return Err(format!("{} probes exceed n_b * n_w = {bound}", self.probes));
        }
        if bound > 0 && self.k >= 1 && self.probes == 0 {
            return Err("non-empty graph answered without probing".into());
        }
        Ok(())
    }

    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            dataset: self.dataset.clone(),
            algorithm: self.algorithm,
            k: self.k,
            workers: self.workers,
            seed: self.seed,
            source_side: self.source_side,
            probes: self.probes,
            time_ms: self.time_ms,
            result_size: self.result.len(),
            top_degree: self.top_degree(),
        }
    }
}

/// One line of the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub dataset: String,
    pub algorithm: Algorithm,
    pub k: usize,
    pub workers: usize,
    pub seed: u64,
    pub source_side: Side,
    pub probes: u64,
    pub time_ms: f64,
    pub result_size: usize,
    pub top_degree: Option<u32>,
}
