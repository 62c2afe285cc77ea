//! Exhaustive ground-truth answers. These read the graph directly and never
//! touch a probe counter.

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::state::ResultSet;

/// Tie-closed top-k by reading every black degree off the graph.
pub fn brute_force_topk(graph: &BipartiteGraph, k: usize) -> Result<ResultSet> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    let candidates = graph
        .black_degrees()
        .into_iter()
        .enumerate()
        .map(|(b, d)| (b as u32, d));
    Ok(ResultSet::tie_closed(k, graph.n_black(), candidates))
}

/// The k-th largest black degree, counting multiplicity.
pub fn kth_degree(graph: &BipartiteGraph, k: usize) -> Result<u32> {
    if k == 0 || k > graph.n_black() as usize {
        return Err(Error::KOutOfRange {
            k,
            n_b: graph.n_black(),
        });
    }
    let mut degrees = graph.black_degrees();
    let (_, kth, _) = degrees.select_nth_unstable_by(k - 1, |a, b| b.cmp(a));
    Ok(*kth)
}
