//! Switch-On-Empty, the centralized baseline.
//!
//! Each round visits every unresolved black vertex in id order and probes it
//! until the first negative answer, then switches to the next vertex. A
//! vertex resumes where it stopped in the next round. Fully probed vertices
//! leave the live set with an exact degree. The run stops once every live
//! vertex's degree upper bound `n_w - e(u)` is below the k-th highest exact
//! degree found so far; vertices whose bound equals that degree stay live,
//! so ties are always resolved before stopping.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exec::{Phase, RoundStats};
use crate::oracle::ProbeOracle;
use crate::run::{Completed, TopKRun};
use crate::state::{ProbeOrder, VertexState};

#[derive(Clone, Debug, Default)]
pub struct SoeConfig {
    pub order: ProbeOrder,
}

/// Resumable SOE state, one [`run_round`](Self::run_round) at a time.
#[derive(Debug)]
pub struct SoeRunState {
    k: usize,
    n_b: u32,
    n_w: u32,
    live: Vec<VertexState>,
    completed: Completed,
    round: u32,
    kth_degree_so_far: Option<u32>,
    rounds: Vec<RoundStats>,
}

impl SoeRunState {
    pub fn new(oracle: &ProbeOracle<'_>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroK);
        }
        let n_w = oracle.n_white();
        let mut live: Vec<VertexState> = (0..oracle.n_black())
            .map(|v| VertexState::new(v, n_w))
            .collect();
        let mut completed = Completed::default();
        completed.absorb(&mut live);
        Ok(Self {
            k,
            n_b: oracle.n_black(),
            n_w,
            kth_degree_so_far: completed.kth_highest(k),
            live,
            completed,
            round: 0,
            rounds: Vec::new(),
        })
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    pub fn live(&self) -> &[VertexState] {
        &self.live
    }

    pub fn completed_count(&self) -> usize {
        self.completed.len()
    }

    /// k-th highest exact degree among completed vertices, once at least k
    /// have completed.
    pub fn kth_degree_so_far(&self) -> Option<u32> {
        self.kth_degree_so_far
    }

    /// Largest degree any live vertex could still have.
    pub fn live_upper_bound(&self) -> Option<u32> {
        self.live.iter().map(|s| s.upper_bound(self.n_w)).max()
    }

    pub fn is_finished(&self) -> bool {
        match (self.live_upper_bound(), self.kth_degree_so_far) {
            (None, _) => true,
            (Some(ub), Some(kth)) => ub < kth,
            (Some(_), None) => false,
        }
    }

    /// One full pass over the live vertices.
    pub fn run_round(&mut self, oracle: &ProbeOracle<'_>, order: &ProbeOrder) -> Result<()> {
        self.round += 1;
        let start = Instant::now();
        let live = self.live.len();
        let mut probes = 0u64;
        for st in &mut self.live {
            let before = st.probed();
            while let Some(true) = st.probe_next(oracle, order)? {}
            probes += u64::from(st.probed() - before);
        }
        let completed_vertices: Vec<u32> = self
            .live
            .iter()
            .filter(|s| s.done)
            .map(|s| s.vertex)
            .collect();
        self.completed.absorb(&mut self.live);
        self.kth_degree_so_far = self.completed.kth_highest(self.k);
        self.rounds.push(RoundStats {
            phase: Phase::Round,
            round: self.round,
            live,
            probes,
            completed: completed_vertices.len(),
            wall_us: start.elapsed().as_micros() as u64,
            completed_vertices,
        });
        Ok(())
    }

    pub fn finish(self, probes: u64) -> TopKRun {
        TopKRun {
            threshold: self.kth_degree_so_far,
            result: self.completed.into_result(self.k, self.n_b),
            probes,
            rounds: self.rounds,
            pruned: self.live,
        }
    }
}

/// Exact tie-closed top-k by Switch-On-Empty. With `k > n_b` every vertex
/// ends up fully probed.
pub fn soe_topk(oracle: &ProbeOracle<'_>, k: usize, cfg: &SoeConfig) -> Result<TopKRun> {
    cfg.order.check(oracle.n_white())?;
    let start = oracle.probes();
    let mut run = SoeRunState::new(oracle, k)?;
    while !run.is_finished() {
        run.run_round(oracle, &cfg.order)?;
    }
    Ok(run.finish(oracle.probes() - start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BipartiteGraph;
    use crate::reference::brute_force_topk;

    fn explicit() -> BipartiteGraph {
        BipartiteGraph::from_edges(3, 4, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 1)])
            .unwrap()
            .0
    }

    #[test]
    fn complete_graph_exhausts() {
        let g = BipartiteGraph::complete(2, 3);
        let oracle = ProbeOracle::new(&g);
        let run = soe_topk(&oracle, 1, &SoeConfig::default()).unwrap();
        assert_eq!(run.result, brute_force_topk(&g, 1).unwrap());
        assert_eq!(run.result.len(), 2);
        assert_eq!(run.probes, 6);
    }

    #[test]
    fn empty_graph_total_tie() {
        let g = BipartiteGraph::empty(3, 4);
        let oracle = ProbeOracle::new(&g);
        let run = soe_topk(&oracle, 1, &SoeConfig::default()).unwrap();
        assert_eq!(run.result, brute_force_topk(&g, 1).unwrap());
        assert_eq!(run.probes, 12);
        assert_eq!(run.rounds.len(), 4);
    }

    #[test]
    fn explicit_graph_trace() {
        // Hand trace with ascending order, n_w = 4:
        //   round 1: b0 +,+,+,- (done, d=3); b1 +,-; b2 -      -> 7 probes
        //            kth = 3, live upper bounds are 3 and 3    -> continue
        //   round 2: b1 -; b2 +,-                              -> 3 probes
        //            live upper bounds are 2 and 2 < 3         -> stop
        let g = explicit();
        let oracle = ProbeOracle::new(&g).with_audit();
        let run = soe_topk(&oracle, 1, &SoeConfig::default()).unwrap();
        assert_eq!(run.result, brute_force_topk(&g, 1).unwrap());
        assert_eq!(run.probes, 10);
        let per_round: Vec<u64> = run.rounds.iter().map(|r| r.probes).collect();
        assert_eq!(per_round, vec![7, 3]);
        assert_eq!(run.threshold, Some(3));
        assert!(oracle.audit_report().unwrap().repeats.is_empty());
        for st in &run.pruned {
            assert!(st.upper_bound(4) < 3);
            st.check_sandwich(&g).unwrap();
        }
    }

    #[test]
    fn k_beyond_vertices_is_exhaustive() {
        let g = explicit();
        let oracle = ProbeOracle::new(&g);
        let run = soe_topk(&oracle, 5, &SoeConfig::default()).unwrap();
        assert!(run.result.k_exceeds_vertices);
        assert_eq!(run.result.len(), 3);
        assert_eq!(run.probes, 12);
    }

    #[test]
    fn kth_degree_so_far_only_from_exact_degrees() {
        let g = explicit();
        let oracle = ProbeOracle::new(&g);
        let mut run = SoeRunState::new(&oracle, 2).unwrap();
        assert_eq!(run.kth_degree_so_far(), None);
        run.run_round(&oracle, &ProbeOrder::Ascending).unwrap();
        // Only b0 has completed; one exact degree is not enough for k = 2.
        assert_eq!(run.completed_count(), 1);
        assert_eq!(run.kth_degree_so_far(), None);
        assert!(!run.is_finished());
    }

    #[test]
    fn rejects_zero_k_and_bad_order() {
        let g = explicit();
        let oracle = ProbeOracle::new(&g);
        assert!(matches!(
            soe_topk(&oracle, 0, &SoeConfig::default()),
            Err(Error::ZeroK)
        ));
        let cfg = SoeConfig {
            order: ProbeOrder::shuffled(3, 1),
        };
        assert!(soe_topk(&oracle, 1, &cfg).is_err());
    }

    #[test]
    fn no_white_vertices() {
        let g = BipartiteGraph::empty(3, 0);
        let oracle = ProbeOracle::new(&g);
        let run = soe_topk(&oracle, 2, &SoeConfig::default()).unwrap();
        assert_eq!(run.result.len(), 3);
        assert_eq!(run.probes, 0);
    }
}
