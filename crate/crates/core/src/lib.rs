//! Top-k degree discovery in hidden bipartite graphs.
//!
//! The edges of a hidden graph can only be learned one edge-probing query at
//! a time through a [`ProbeOracle`]. The algorithms here find the black
//! vertices of highest degree while counting every probe they issue:
//!
//! * [`soe_topk`]: centralized Switch-On-Empty;
//! * [`dsoe_topk`]: distributed Switch-On-Empty with growing failure budgets;
//! * [`dsoe_star_topk`]: prediction-guided variant with a threshold-pruned
//!   exhaust phase.
//!
//! All three return the same tie-closed answer as [`brute_force_topk`]. The
//! distributed ones run their rounds as barrier-synchronized maps on an
//! [`Executor`].

pub mod dsoe;
pub mod dsoe_star;
mod error;
pub mod exec;
pub mod generate;
pub mod graph;
pub mod ingest;
pub mod oracle;
pub mod reference;
mod run;
pub mod soe;
pub mod state;

pub use dsoe::{dsoe_routine, dsoe_topk, BudgetMode, DsoeConfig};
pub use dsoe_star::{
    dsoe_star_topk, exhaust, predict, star_routine, BudgetRule, DsoeStarConfig, SampleRule,
};
pub use error::{Error, Result};
pub use exec::{Executor, Partitioner, Phase, RoundStats, Schedule};
pub use generate::{generate_powerlaw, generate_random};
pub use graph::BipartiteGraph;
pub use ingest::{
    load_konect, load_manifest, load_unipartite_as_bipartite, write_konect, DatasetFormat,
    DatasetManifest, LoadReport, Side,
};
pub use oracle::{AuditReport, ProbeEvent, ProbeOracle};
pub use reference::{brute_force_topk, kth_degree};
pub use run::TopKRun;
pub use soe::{soe_topk, SoeConfig, SoeRunState};
pub use state::{ProbeOrder, RankedVertex, ResultSet, VertexState};
