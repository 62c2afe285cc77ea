use crate::exec::RoundStats;
use crate::state::{ResultSet, VertexState};

/// Everything an algorithm reports about one top-k computation.
#[derive(Clone, Debug)]
pub struct TopKRun {
    pub result: ResultSet,
    /// Probes issued by this run (oracle counter delta).
    pub probes: u64,
    pub rounds: Vec<RoundStats>,
    /// The k-th highest exact degree used to stop, if one was reached.
    pub threshold: Option<u32>,
    /// Vertices left unresolved at termination; each one's degree upper
    /// bound is below `threshold`.
    pub pruned: Vec<VertexState>,
}

impl TopKRun {
    /// Sum of per-round probe counts.
    pub fn round_probes(&self) -> u64 {
        self.rounds.iter().map(|r| r.probes).sum()
    }
}

/// Exactly known degrees gathered so far.
#[derive(Debug, Default)]
pub(crate) struct Completed(Vec<(u32, u32)>);

impl Completed {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// k-th highest degree, counting multiplicity.
    pub fn kth_highest(&self, k: usize) -> Option<u32> {
        if k == 0 || self.0.len() < k {
            return None;
        }
        let mut degrees: Vec<u32> = self.0.iter().map(|&(_, d)| d).collect();
        let (_, kth, _) = degrees.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
        Some(*kth)
    }

    /// Moves every finished state out of `live`, keeping the rest in order.
    pub fn absorb(&mut self, live: &mut Vec<VertexState>) {
        live.retain(|st| match st.degree() {
            Some(d) => {
                self.0.push((st.vertex, d));
                false
            }
            None => true,
        });
    }

    pub fn into_result(self, k: usize, n_black: u32) -> ResultSet {
        ResultSet::tie_closed(k, n_black, self.0)
    }
}
