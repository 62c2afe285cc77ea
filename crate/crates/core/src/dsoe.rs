//! Distributed Switch-On-Empty.
//!
//! Rounds are parallel maps of [`dsoe_routine`] over all live vertices with
//! a failure budget that grows geometrically from round to round. Vertices
//! that finish probing join the completed set. Once at least `k` vertices
//! have completed, a final exhaust pass at threshold `T` (the k-th highest
//! completed degree) resolves every live vertex that could still reach `T`,
//! which makes the answer exact for any budget schedule.

use crate::dsoe_star::exhaust;
use crate::error::{Error, Result};
use crate::exec::{Executor, Phase};
use crate::oracle::ProbeOracle;
use crate::run::{Completed, TopKRun};
use crate::state::{ProbeOrder, VertexState};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BudgetMode {
    /// Each routine call may see up to `f` negatives before its `f + 1`-th
    /// ends the call.
    PerRound,
    /// The routine runs while the vertex's total negatives `e(u)` are at most
    /// `f`.
    #[default]
    Cumulative,
}

impl std::str::FromStr for BudgetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-round" => Ok(BudgetMode::PerRound),
            "cumulative" => Ok(BudgetMode::Cumulative),
            other => Err(Error::InvalidConfig(format!(
                "unknown budget mode {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DsoeConfig {
    /// Failure budget of the first round.
    pub initial_budget: u64,
    /// Budget multiplier between rounds.
    pub growth_factor: u64,
    pub budget_mode: BudgetMode,
    pub order: ProbeOrder,
}

impl Default for DsoeConfig {
    fn default() -> Self {
        Self {
            initial_budget: 2,
            growth_factor: 2,
            budget_mode: BudgetMode::Cumulative,
            order: ProbeOrder::Ascending,
        }
    }
}

impl DsoeConfig {
    /// Budget 0 with no growth: one negative per vertex per round, the same
    /// schedule as centralized SOE.
    pub fn one_failure_per_round() -> Self {
        Self {
            initial_budget: 0,
            growth_factor: 1,
            budget_mode: BudgetMode::PerRound,
            order: ProbeOrder::Ascending,
        }
    }

    /// A cumulative budget must strictly grow or rounds stop making
    /// progress. A per-round budget always makes progress, so a fixed
    /// schedule is allowed there.
    pub fn validate(&self) -> Result<()> {
        match self.budget_mode {
            BudgetMode::Cumulative if self.initial_budget < 1 || self.growth_factor < 2 => {
                Err(Error::InvalidConfig(format!(
                    "cumulative budgets need initial >= 1 and growth >= 2 (got {} and {})",
                    self.initial_budget, self.growth_factor
                )))
            }
            BudgetMode::PerRound if self.growth_factor < 1 => Err(Error::InvalidConfig(
                "growth factor must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Probes the vertex from its cursor until the failure budget `f` is
/// exceeded or every white vertex has been probed.
pub fn dsoe_routine(
    state: &mut VertexState,
    oracle: &ProbeOracle<'_>,
    order: &ProbeOrder,
    f: u64,
    mode: BudgetMode,
) -> Result<()> {
    let mut failures = 0u64;
    loop {
        let within_budget = match mode {
            BudgetMode::PerRound => failures <= f,
            BudgetMode::Cumulative => u64::from(state.e) <= f,
        };
        if state.done || !within_budget {
            return Ok(());
        }
        match state.probe_next(oracle, order)? {
            Some(false) => failures += 1,
            Some(true) => {}
            None => return Ok(()),
        }
    }
}

/// Exact tie-closed top-k by DSOE.
pub fn dsoe_topk(
    oracle: &ProbeOracle<'_>,
    k: usize,
    cfg: &DsoeConfig,
    exec: &Executor,
) -> Result<TopKRun> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    cfg.validate()?;
    let n_w = oracle.n_white();
    cfg.order.check(n_w)?;
    let start = oracle.probes();

    let mut live: Vec<VertexState> = (0..oracle.n_black())
        .map(|v| VertexState::new(v, n_w))
        .collect();
    let mut completed = Completed::default();
    completed.absorb(&mut live);

    let mut rounds = Vec::new();
    let mut budget = cfg.initial_budget;
    let mut round = 0;
    while completed.len() < k && !live.is_empty() {
        round += 1;
        let f = budget;
        let stats = exec.parallel_map(Phase::Round, round, &mut live, |st| {
            dsoe_routine(st, oracle, &cfg.order, f, cfg.budget_mode)
        })?;
        rounds.push(stats);
        completed.absorb(&mut live);
        budget = budget.saturating_mul(cfg.growth_factor);
    }

    let threshold = completed.kth_highest(k);
    if let Some(t) = threshold {
        if !live.is_empty() {
            let stats = exec.parallel_map(Phase::Exhaust, round + 1, &mut live, |st| {
                exhaust(st, oracle, &cfg.order, t)
            })?;
            rounds.push(stats);
            completed.absorb(&mut live);
        }
    }

    Ok(TopKRun {
        result: completed.into_result(k, oracle.n_black()),
        probes: oracle.probes() - start,
        rounds,
        threshold,
        pruned: live,
    })
}
