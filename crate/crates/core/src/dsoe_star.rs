//! DSOE*: prediction-guided Switch-On-Empty.
//!
//! 1. Every black vertex probes a small random sample of white vertices; the
//!    number of positives is its degree prediction.
//! 2. Rounds of [`star_routine`] give each live vertex a negative-probe
//!    budget derived from its prediction, so vertices that look dense are
//!    probed deeper. Fully probed vertices join the set `M`.
//! 3. Once `|M| >= k`, the k-th highest degree in `M` becomes threshold `T`
//!    and every live vertex is [`exhaust`]ed against it.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{Executor, Phase};
use crate::oracle::ProbeOracle;
use crate::run::{Completed, TopKRun};
use crate::state::{ProbeOrder, VertexState};

/// Per-vertex sample size as a function of `n_w`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SampleRule {
    /// `ceil(ln(ln(n_w)))`, at least 1.
    #[default]
    LogLog,
    Fixed(u32),
}

impl SampleRule {
    /// Sample size for a white side of `n_w` vertices, clamped to `n_w`.
    pub fn size(self, n_w: u32) -> u32 {
        let raw = match self {
            SampleRule::LogLog => {
                let v = (n_w as f64).ln().ln().ceil();
                if v.is_nan() || v < 1.0 {
                    1
                } else {
                    v as u32
                }
            }
            SampleRule::Fixed(n) => n.max(1),
        };
        raw.min(n_w)
    }
}

impl FromStr for SampleRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "loglog" {
            return Ok(SampleRule::LogLog);
        }
        s.parse::<u32>()
            .ok()
            .filter(|&n| n >= 1)
            .map(SampleRule::Fixed)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "sample rule must be \"loglog\" or a positive count, got {s:?}"
                ))
            })
    }
}

impl fmt::Display for SampleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleRule::LogLog => f.write_str("loglog"),
            SampleRule::Fixed(n) => write!(f, "{n}"),
        }
    }
}

/// Negative-probe budget per routine call: `N = scale * prediction + offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetRule {
    pub scale: u32,
    pub offset: u32,
}

impl Default for BudgetRule {
    fn default() -> Self {
        Self {
            scale: 1,
            offset: 1,
        }
    }
}

impl BudgetRule {
    pub fn budget(self, prediction: u32) -> u64 {
        u64::from(self.scale) * u64::from(prediction) + u64::from(self.offset)
    }
}

/// Parses `"<scale>p+<offset>"`, e.g. `p+1` or `2p+1`.
impl FromStr for BudgetRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidConfig(format!("budget rule must look like \"2p+1\", got {s:?}"));
        let (scale, offset) = s.split_once("p+").ok_or_else(bad)?;
        let scale = if scale.is_empty() {
            1
        } else {
            scale.parse().map_err(|_| bad())?
        };
        let offset: u32 = offset.parse().map_err(|_| bad())?;
        if offset == 0 {
            return Err(Error::InvalidConfig(
                "budget rule offset must be at least 1".into(),
            ));
        }
        Ok(Self { scale, offset })
    }
}

impl fmt::Display for BudgetRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}p+{}", self.scale, self.offset)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DsoeStarConfig {
    pub sample_rule: SampleRule,
    pub budget_rule: BudgetRule,
    pub seed: u64,
    pub order: ProbeOrder,
}

/// Sampling seed of one vertex. Depends only on the run seed and the vertex,
/// never on which worker handles it.
pub fn vertex_seed(seed: u64, vertex: u32) -> u64 {
    seed ^ u64::from(vertex)
}

/// Probes `sample_size` distinct white vertices chosen uniformly without
/// replacement and stores the number of positives as the prediction.
pub fn predict(
    state: &mut VertexState,
    oracle: &ProbeOracle<'_>,
    sample_size: u32,
    seed: u64,
) -> Result<()> {
    if state.probed() != 0 || !state.sampled.is_empty() {
        return Err(Error::InvalidConfig(format!(
            "vertex {} was already probed before prediction",
            state.vertex
        )));
    }
    let n_w = oracle.n_white();
    let amount = sample_size.min(n_w) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(vertex_seed(seed, state.vertex));
    let mut positives = 0;
    for w in index::sample(&mut rng, n_w as usize, amount) {
        if state.probe_sample(oracle, w as u32)? {
            positives += 1;
        }
    }
    state.prediction = positives;
    Ok(())
}

/// Probes from the cursor until `budget_rule(prediction)` negatives have been
/// seen in this call, or the vertex is exhausted.
pub fn star_routine(
    state: &mut VertexState,
    oracle: &ProbeOracle<'_>,
    order: &ProbeOrder,
    budget_rule: BudgetRule,
) -> Result<()> {
    let budget = budget_rule.budget(state.prediction);
    let mut negatives = 0u64;
    while !state.done && negatives < budget {
        match state.probe_next(oracle, order)? {
            Some(false) => negatives += 1,
            Some(true) => {}
            None => break,
        }
    }
    Ok(())
}

/// Keeps probing while the vertex's degree upper bound `n_w - e(u)` is at
/// least `threshold`. On return the vertex is either fully probed or
/// provably below the threshold.
pub fn exhaust(
    state: &mut VertexState,
    oracle: &ProbeOracle<'_>,
    order: &ProbeOrder,
    threshold: u32,
) -> Result<()> {
    let n_w = oracle.n_white();
    while !state.done && state.upper_bound(n_w) >= threshold {
        if state.probe_next(oracle, order)?.is_none() {
            break;
        }
    }
    Ok(())
}

/// Exact tie-closed top-k by DSOE*.
pub fn dsoe_star_topk(
    oracle: &ProbeOracle<'_>,
    k: usize,
    cfg: &DsoeStarConfig,
    exec: &Executor,
) -> Result<TopKRun> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let n_w = oracle.n_white();
    cfg.order.check(n_w)?;
    let start = oracle.probes();
    let sample_size = cfg.sample_rule.size(n_w);

    let mut live: Vec<VertexState> = (0..oracle.n_black())
        .map(|v| VertexState::new(v, n_w))
        .collect();
    let mut rounds = Vec::new();
    let mut members = Completed::default();
    members.absorb(&mut live);

    if !live.is_empty() {
        let stats = exec.parallel_map(Phase::Predict, 0, &mut live, |st| {
            predict(st, oracle, sample_size, cfg.seed)
        })?;
        rounds.push(stats);
        members.absorb(&mut live);
    }

    let mut round = 0;
    while members.len() < k && !live.is_empty() {
        round += 1;
        let stats = exec.parallel_map(Phase::Round, round, &mut live, |st| {
            star_routine(st, oracle, &cfg.order, cfg.budget_rule)
        })?;
        rounds.push(stats);
        members.absorb(&mut live);
    }

    let threshold = members.kth_highest(k);
    if let Some(t) = threshold {
        if !live.is_empty() {
            let stats = exec.parallel_map(Phase::Exhaust, round + 1, &mut live, |st| {
                exhaust(st, oracle, &cfg.order, t)
            })?;
            rounds.push(stats);
            members.absorb(&mut live);
        }
    }

    Ok(TopKRun {
        result: members.into_result(k, oracle.n_black()),
        probes: oracle.probes() - start,
        rounds,
        threshold,
        pruned: live,
    })
}
