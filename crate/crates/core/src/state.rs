//! Per-vertex probing bookkeeping and the answer type shared by all
//! algorithms.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;
use crate::oracle::ProbeOracle;

/// The order in which a black vertex walks the white side. Every black
/// vertex uses the same order within a run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum ProbeOrder {
    #[default]
    Ascending,
    Permuted(Arc<[u32]>),
}

impl ProbeOrder {
    /// A seeded uniform permutation of `0..n_w`.
    pub fn shuffled(n_w: u32, seed: u64) -> Self {
        let mut perm: Vec<u32> = (0..n_w).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        ProbeOrder::Permuted(perm.into())
    }

    #[inline]
    pub fn at(&self, position: u32) -> u32 {
        match self {
            ProbeOrder::Ascending => position,
            ProbeOrder::Permuted(perm) => perm[position as usize],
        }
    }

    pub(crate) fn check(&self, n_w: u32) -> Result<()> {
        match self {
            ProbeOrder::Permuted(perm) if perm.len() != n_w as usize => Err(Error::InvalidConfig(
                format!("probe order has {} entries but n_w = {n_w}", perm.len()),
            )),
            _ => Ok(()),
        }
    }
}

/// What is known about one black vertex so far.
///
/// `s` and `e` count confirmed neighbors and confirmed non-neighbors, so the
/// true degree always lies in `s ..= n_w - e`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexState {
    pub vertex: u32,
    pub s: u32,
    pub e: u32,
    /// Position in the [`ProbeOrder`] of the next white vertex to consider.
    pub cursor: u32,
    /// White ids probed out of order during prediction, kept sorted.
    pub sampled: Vec<u32>,
    pub prediction: u32,
    pub done: bool,
}

impl VertexState {
    pub fn new(vertex: u32, n_w: u32) -> Self {
        Self {
            vertex,
            done: n_w == 0,
            ..Self::default()
        }
    }

    pub fn probed(&self) -> u32 {
        self.s + self.e
    }

    #[inline]
    pub fn upper_bound(&self, n_w: u32) -> u32 {
        n_w - self.e
    }

    /// The exact degree, once every white vertex has been probed.
    pub fn degree(&self) -> Option<u32> {
        self.done.then_some(self.s)
    }

    fn record(&mut self, answer: bool, n_w: u32) {
        if answer {
            self.s += 1;
        } else {
            self.e += 1;
        }
        self.done = self.probed() == n_w;
    }

    /// Probes the next white vertex in `order` that has not been probed yet.
    /// Returns `None` once the vertex is exhausted.
    pub fn probe_next(
        &mut self,
        oracle: &ProbeOracle<'_>,
        order: &ProbeOrder,
    ) -> Result<Option<bool>> {
        let n_w = oracle.n_white();
        if self.done {
            return Ok(None);
        }
        while self.cursor < n_w {
            let w = order.at(self.cursor);
            self.cursor += 1;
            if self.sampled.binary_search(&w).is_ok() {
                continue;
            }
            let answer = oracle.probe(self.vertex, w)?;
            self.record(answer, n_w);
            return Ok(Some(answer));
        }
        // Only reachable if the bookkeeping was corrupted externally.
        self.done = true;
        Ok(None)
    }

    /// Probes a specific white vertex ahead of the cursor and remembers it so
    /// [`probe_next`](Self::probe_next) skips it later. The caller must not
    /// pass a white id that was already probed.
    pub fn probe_sample(&mut self, oracle: &ProbeOracle<'_>, w: u32) -> Result<bool> {
        let answer = oracle.probe(self.vertex, w)?;
        if let Err(at) = self.sampled.binary_search(&w) {
            self.sampled.insert(at, w);
        }
        self.record(answer, oracle.n_white());
        Ok(answer)
    }

    /// Checks `s <= d(u) <= n_w - e` and `done <=> s + e = n_w` against the
    /// ground truth.
    pub fn check_sandwich(&self, graph: &BipartiteGraph) -> Result<(), String> {
        let n_w = graph.n_white();
        let degree = graph.true_degree(self.vertex).map_err(|e| e.to_string())?;
        if self.probed() > n_w {
            return Err(format!("vertex {}: s + e > n_w", self.vertex));
        }
        if self.done != (self.probed() == n_w) {
            return Err(format!("vertex {}: done flag out of sync", self.vertex));
        }
        if self.s > degree || degree > self.upper_bound(n_w) {
            return Err(format!(
                "vertex {}: degree {degree} outside [{}, {}]",
                self.vertex,
                self.s,
                self.upper_bound(n_w)
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankedVertex {
    pub vertex: u32,
    pub degree: u32,
}

/// A tie-closed top-k answer.
///
/// Entries are sorted by degree descending, then vertex id ascending. When
/// more than `k` entries are present, every entry past rank `k` has the same
/// degree as rank `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultSet {
    pub k: usize,
    pub entries: Vec<RankedVertex>,
    /// Set when `k` exceeded the number of black vertices, in which case every
    /// vertex is listed.
    pub k_exceeds_vertices: bool,
}

impl ResultSet {
    /// Tie-closed top-k of a set of exactly known `(vertex, degree)` pairs:
    /// with `d*` the k-th largest degree, keeps every candidate of degree
    /// `>= d*`.
    pub fn tie_closed<I>(k: usize, n_black: u32, candidates: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        let mut entries: Vec<RankedVertex> = candidates
            .into_iter()
            .map(|(vertex, degree)| RankedVertex { vertex, degree })
            .collect();
        entries.sort_unstable_by(|a, b| b.degree.cmp(&a.degree).then(a.vertex.cmp(&b.vertex)));
        if k >= 1 && entries.len() > k {
            let cutoff = entries[k - 1].degree;
            let keep = entries.partition_point(|r| r.degree >= cutoff);
            entries.truncate(keep);
        }
        Self {
            k,
            entries,
            k_exceeds_vertices: k > n_black as usize,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Degree of the k-th entry, i.e. the smallest degree that qualifies.
    pub fn threshold(&self) -> Option<u32> {
        self.entries.last().map(|r| r.degree)
    }

    pub fn top_degree(&self) -> Option<u32> {
        self.entries.first().map(|r| r.degree)
    }

    /// Structural checks that need no ground truth: ordering, and that every
    /// entry beyond rank k ties with rank k.
    pub fn check_shape(&self) -> Result<(), String> {
        let sorted = self.entries.windows(2).all(|w| {
            w[0].degree > w[1].degree || (w[0].degree == w[1].degree && w[0].vertex < w[1].vertex)
        });
        if !sorted {
            return Err("entries are not sorted by (degree desc, vertex asc)".into());
        }
        if self.k >= 1 && self.entries.len() > self.k {
            let cutoff = self.entries[self.k - 1].degree;
            if self.entries[self.k..].iter().any(|r| r.degree != cutoff) {
                return Err(format!("entries beyond rank {} do not tie with it", self.k));
            }
        }
        Ok(())
    }
}
