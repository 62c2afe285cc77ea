//! Barrier-synchronized parallel maps over vertex states.
//!
//! An [`Executor`] owns a fixed pool of worker threads for its whole
//! lifetime. Each call to [`Executor::parallel_map`] splits the live states
//! into partitions, hands every partition to a worker with exclusive access,
//! and returns only after every partition has finished. Nothing from the next
//! round can start before that, so rounds are strictly separated.

use std::any::Any;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::VertexState;

/// How live states are split among workers in static mode.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Partitioner {
    /// Worker `i` gets the `i`-th contiguous run of states.
    #[default]
    Contiguous,
    /// State at position `p` goes to worker `p % workers`.
    RoundRobin,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Schedule {
    /// One partition per worker, fixed for the round.
    #[default]
    Static,
    /// Fixed-size chunks that idle workers pull as they finish, for skewed
    /// per-vertex costs. The partitioner is ignored.
    Dynamic { chunk: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Phase {
    Predict,
    Round,
    Exhaust,
}

/// What one parallel map did.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundStats {
    pub phase: Phase,
    pub round: u32,
    /// States the body was applied to.
    pub live: usize,
    pub probes: u64,
    pub completed: usize,
    pub wall_us: u64,
    /// Ids that became fully probed during this map, ascending.
    #[serde(skip)]
    pub completed_vertices: Vec<u32>,
}

impl RoundStats {
    pub(crate) fn empty(phase: Phase, round: u32) -> Self {
        Self {
            phase,
            round,
            live: 0,
            probes: 0,
            completed: 0,
            wall_us: 0,
            completed_vertices: Vec::new(),
        }
    }
}

pub struct Executor {
    workers: usize,
    partitioner: Partitioner,
    schedule: Schedule,
    pool: rayon::ThreadPool,
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor")
            .field("workers", &self.workers)
            .field("partitioner", &self.partitioner)
            .field("schedule", &self.schedule)
            .finish()
    }
}

#[derive(Default)]
struct PartitionTally {
    probes: u64,
    completed: Vec<u32>,
}

impl Executor {
    /// Spawns `workers` threads that live as long as the executor.
    pub fn new(workers: usize) -> Result<Self> {
        if workers == 0 {
            return Err(Error::InvalidConfig(
                "worker count must be at least 1".into(),
            ));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("probe-worker-{i}"))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
        Ok(Self {
            workers,
            partitioner: Partitioner::default(),
            schedule: Schedule::default(),
            pool,
        })
    }

    pub fn with_partitioner(mut self, partitioner: Partitioner) -> Self {
        self.partitioner = partitioner;
        self
    }

    pub fn with_schedule(mut self, schedule: Schedule) -> Result<Self> {
        if let Schedule::Dynamic { chunk: 0 } = schedule {
            return Err(Error::InvalidConfig(
                "dynamic chunk size must be at least 1".into(),
            ));
        }
        self.schedule = schedule;
        Ok(self)
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    /// Applies `body` exactly once to every state, in parallel, and returns
    /// after all of them are done.
    ///
    /// `body` must only touch the state it is handed (plus shared read-only
    /// data such as the oracle). If a body fails or panics the whole round is
    /// reported as failed, naming the lowest vertex id that failed.
    pub fn parallel_map<F>(
        &self,
        phase: Phase,
        round: u32,
        states: &mut [VertexState],
        body: F,
    ) -> Result<RoundStats>
    where
        F: Fn(&mut VertexState) -> Result<()> + Sync,
    {
        if states.is_empty() {
            return Ok(RoundStats::empty(phase, round));
        }
        let start = Instant::now();
        let live = states.len();
        let partitions = self.partition(states);
        let body = &body;
        let outcomes: Vec<Result<PartitionTally>> = self.pool.install(|| {
            partitions
                .into_par_iter()
                .with_max_len(1)
                .map(|part| run_partition(part, body))
                .collect()
        });

        let mut probes = 0;
        let mut completed_vertices = Vec::new();
        let mut failure: Option<Error> = None;
        for outcome in outcomes {
            match outcome {
                Ok(tally) => {
                    probes += tally.probes;
                    completed_vertices.extend(tally.completed);
                }
                Err(err) => {
                    if failure
                        .as_ref()
                        .is_none_or(|f| failed_vertex(&err) < failed_vertex(f))
                    {
                        failure = Some(err);
                    }
                }
            }
        }
        if let Some(err) = failure {
            return Err(err);
        }
        completed_vertices.sort_unstable();
        Ok(RoundStats {
            phase,
            round,
            live,
            probes,
            completed: completed_vertices.len(),
            wall_us: start.elapsed().as_micros() as u64,
            completed_vertices,
        })
    }

    fn partition<'a>(&self, states: &'a mut [VertexState]) -> Vec<Vec<&'a mut VertexState>> {
        match (self.schedule, self.partitioner) {
            (Schedule::Dynamic { chunk }, _) => states
                .chunks_mut(chunk)
                .map(|c| c.iter_mut().collect())
                .collect(),
            (Schedule::Static, Partitioner::Contiguous) => {
                let size = states.len().div_ceil(self.workers);
                states
                    .chunks_mut(size)
                    .map(|c| c.iter_mut().collect())
                    .collect()
            }
            (Schedule::Static, Partitioner::RoundRobin) => {
                let mut buckets: Vec<Vec<&mut VertexState>> =
                    (0..self.workers).map(|_| Vec::new()).collect();
                for (i, st) in states.iter_mut().enumerate() {
                    buckets[i % self.workers].push(st);
                }
                buckets
            }
        }
    }
}

fn run_partition<F>(part: Vec<&mut VertexState>, body: &F) -> Result<PartitionTally>
where
    F: Fn(&mut VertexState) -> Result<()> + Sync,
{
    let mut tally = PartitionTally::default();
    for st in part {
        let vertex = st.vertex;
        let before = st.probed();
        let was_done = st.done;
        match catch_unwind(AssertUnwindSafe(|| body(st))) {
            Ok(Ok(())) => {}
            Ok(Err(source)) => {
                return Err(Error::WorkerFailed {
                    vertex,
                    source: Box::new(source),
                })
            }
            Err(payload) => {
                return Err(Error::WorkerPanicked {
                    vertex,
                    message: panic_message(payload.as_ref()),
                })
            }
        }
        tally.probes += u64::from(st.probed() - before);
        if st.done && !was_done {
            tally.completed.push(vertex);
        }
    }
    Ok(tally)
}

fn failed_vertex(err: &Error) -> u32 {
    match err {
        Error::WorkerFailed { vertex, .. } | Error::WorkerPanicked { vertex, .. } => *vertex,
        _ => u32::MAX,
    }
}

fn panic_message(payload: &(dyn Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string panic payload".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BipartiteGraph;
    use crate::oracle::ProbeOracle;
    use crate::state::ProbeOrder;

    fn fresh(n: u32, n_w: u32) -> Vec<VertexState> {
        (0..n).map(|v| VertexState::new(v, n_w)).collect()
    }

    fn probe_three<'a>(
        oracle: &'a ProbeOracle<'a>,
    ) -> impl Fn(&mut VertexState) -> Result<()> + Sync + 'a {
        move |st| {
            for _ in 0..3 {
                st.probe_next(oracle, &ProbeOrder::Ascending)?;
            }
            Ok(())
        }
    }

    #[test]
    fn worker_count_does_not_change_states() {
        let g = crate::generate::generate_random(100, 10, 0.4, 1).unwrap();
        let mut reference = None;
        for workers in [1, 2, 8] {
            for partitioner in [Partitioner::Contiguous, Partitioner::RoundRobin] {
                let oracle = ProbeOracle::new(&g);
                let exec = Executor::new(workers)
                    .unwrap()
                    .with_partitioner(partitioner);
                let mut states = fresh(100, 10);
                let stats = exec
                    .parallel_map(Phase::Round, 1, &mut states, probe_three(&oracle))
                    .unwrap();
                assert_eq!(stats.probes, oracle.probes());
                assert_eq!(stats.probes, 300);
                match &reference {
                    None => reference = Some(states),
                    Some(r) => assert_eq!(r, &states),
                }
            }
        }
    }

    #[test]
    fn dynamic_schedule_matches_static() {
        let g = crate::generate::generate_random(64, 6, 0.5, 2).unwrap();
        let oracle = ProbeOracle::new(&g);
        let mut a = fresh(64, 6);
        Executor::new(3)
            .unwrap()
            .parallel_map(Phase::Round, 1, &mut a, probe_three(&oracle))
            .unwrap();
        let mut b = fresh(64, 6);
        let stats = Executor::new(3)
            .unwrap()
            .with_schedule(Schedule::Dynamic { chunk: 5 })
            .unwrap()
            .parallel_map(Phase::Round, 1, &mut b, probe_three(&oracle))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(stats.live, 64);
    }

    #[test]
    fn empty_live_set_is_a_no_op() {
        let g = BipartiteGraph::complete(1, 1);
        let oracle = ProbeOracle::new(&g);
        let stats = Executor::new(4)
            .unwrap()
            .parallel_map(Phase::Round, 7, &mut [], probe_three(&oracle))
            .unwrap();
        assert_eq!(stats, RoundStats::empty(Phase::Round, 7));
        assert_eq!(oracle.probes(), 0);
    }

    #[test]
    fn completions_are_reported() {
        let g = BipartiteGraph::complete(4, 3);
        let oracle = ProbeOracle::new(&g);
        let mut states = fresh(4, 3);
        let stats = Executor::new(2)
            .unwrap()
            .parallel_map(Phase::Round, 1, &mut states, probe_three(&oracle))
            .unwrap();
        assert_eq!(stats.completed_vertices, vec![0, 1, 2, 3]);
        assert_eq!(stats.completed, 4);
    }

    #[test]
    fn panicking_body_names_the_vertex() {
        let mut states = fresh(10, 1);
        let err = Executor::new(2)
            .unwrap()
            .parallel_map(Phase::Round, 1, &mut states, |st| {
                if st.vertex == 6 {
                    panic!("boom");
                }
                Ok(())
            })
            .unwrap_err();
        match err {
            Error::WorkerPanicked { vertex, message } => {
                assert_eq!(vertex, 6);
                assert_eq!(message, "boom");
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn failing_body_reports_source() {
        let g = BipartiteGraph::complete(1, 1);
        let oracle = ProbeOracle::new(&g);
        let mut states = vec![VertexState::new(5, 1)];
        let err = Executor::new(1)
            .unwrap()
            .parallel_map(Phase::Round, 1, &mut states, |st| {
                st.probe_next(&oracle, &ProbeOrder::Ascending).map(|_| ())
            })
            .unwrap_err();
        assert!(matches!(err, Error::WorkerFailed { vertex: 5, .. }));
    }

    #[test]
    fn rejects_zero_workers() {
        assert!(Executor::new(0).is_err());
        assert!(Executor::new(1)
            .unwrap()
            .with_schedule(Schedule::Dynamic { chunk: 0 })
            .is_err());
    }
}
