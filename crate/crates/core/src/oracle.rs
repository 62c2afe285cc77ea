//! The hidden-graph interface.
//!
//! Algorithms never see a [`BipartiteGraph`] directly; every edge they learn
//! about comes from [`ProbeOracle::probe`], which is what gets counted.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// One answered query, as seen by the audit log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProbeEvent {
    pub black: u32,
    pub white: u32,
    pub answer: bool,
}

#[derive(Default)]
struct AuditLog {
    events: Vec<ProbeEvent>,
    seen: HashSet<(u32, u32)>,
    repeats: Vec<(u32, u32)>,
}

/// Snapshot of everything an auditing oracle recorded.
#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    /// Every probe in the order the oracle answered it. Under a multi-worker
    /// run the interleaving across vertices is scheduler dependent.
    pub events: Vec<ProbeEvent>,
    /// Pairs that were probed more than once (one entry per repeat).
    pub repeats: Vec<(u32, u32)>,
}

impl AuditReport {
    pub fn distinct_pairs(&self) -> usize {
        self.events.len() - self.repeats.len()
    }
}

/// Counting edge-probe oracle over a materialized ground-truth graph.
///
/// Safe to share across worker threads: the counter is atomic and the graph
/// is never mutated.
pub struct ProbeOracle<'g> {
    graph: &'g BipartiteGraph,
    probes: AtomicU64,
    delay: Option<Duration>,
    audit: Option<Mutex<AuditLog>>,
}

impl<'g> ProbeOracle<'g> {
    pub fn new(graph: &'g BipartiteGraph) -> Self {
        Self {
            graph,
            probes: AtomicU64::new(0),
            delay: None,
            audit: None,
        }
    }

    /// Sleeps for `delay` on every probe, modelling an expensive edge
    /// function. A zero delay disables it.
    pub fn with_delay(mut self, delay: Duration) -> Self {
        self.delay = (!delay.is_zero()).then_some(delay);
        self
    }

    /// Records every probed pair so repeats can be detected afterwards.
    pub fn with_audit(mut self) -> Self {
        self.audit = Some(Mutex::new(AuditLog::default()));
        self
    }

    pub fn n_black(&self) -> u32 {
        self.graph.n_black()
    }

    pub fn n_white(&self) -> u32 {
        self.graph.n_white()
    }

    pub fn delay(&self) -> Option<Duration> {
        self.delay
    }

    /// Answers whether `(b, w)` is an edge. Each successful call counts as
    /// exactly one probe; rejected ids are not counted.
    pub fn probe(&self, b: u32, w: u32) -> Result<bool> {
        if b >= self.graph.n_black() {
            return Err(Error::BlackOutOfRange {
                vertex: b,
                n_b: self.graph.n_black(),
            });
        }
        if w >= self.graph.n_white() {
            return Err(Error::WhiteOutOfRange {
                vertex: w,
                n_w: self.graph.n_white(),
            });
        }
        if let Some(delay) = self.delay {
            thread::sleep(delay);
        }
        let answer = self.graph.row(b).binary_search(&w).is_ok();
        self.probes.fetch_add(1, Ordering::Relaxed);
        if let Some(audit) = &self.audit {
            let mut log = audit.lock().unwrap_or_else(|e| e.into_inner());
            log.events.push(ProbeEvent {
                black: b,
                white: w,
                answer,
            });
            if !log.seen.insert((b, w)) {
                log.repeats.push((b, w));
            }
        }
        Ok(answer)
    }

    /// Total probes answered so far.
    pub fn probes(&self) -> u64 {
        self.probes.load(Ordering::Relaxed)
    }

    /// `None` unless the oracle was built with [`with_audit`](Self::with_audit).
    pub fn audit_report(&self) -> Option<AuditReport> {
        self.audit.as_ref().map(|audit| {
            let log = audit.lock().unwrap_or_else(|e| e.into_inner());
            AuditReport {
                events: log.events.clone(),
                repeats: log.repeats.clone(),
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_and_complete() {
        let empty = BipartiteGraph::empty(1, 1);
        let oracle = ProbeOracle::new(&empty);
        assert!(!oracle.probe(0, 0).unwrap());
        assert_eq!(oracle.probes(), 1);

        let k11 = BipartiteGraph::complete(1, 1);
        assert!(ProbeOracle::new(&k11).probe(0, 0).unwrap());
    }

    #[test]
    fn explicit_graph() {
        let (g, _) =
            BipartiteGraph::from_edges(3, 4, [(0, 0), (0, 1), (0, 2), (1, 0), (2, 1)]).unwrap();
        let oracle = ProbeOracle::new(&g);
        assert!(oracle.probe(2, 1).unwrap());
        assert!(!oracle.probe(2, 3).unwrap());
        assert_eq!(oracle.probes(), 2);
    }

    #[test]
    fn rejects_out_of_range_without_counting() {
        let g = BipartiteGraph::empty(2, 3);
        let oracle = ProbeOracle::new(&g);
        assert!(matches!(
            oracle.probe(2, 0),
            Err(Error::BlackOutOfRange { vertex: 2, .. })
        ));
        assert!(matches!(
            oracle.probe(0, 3),
            Err(Error::WhiteOutOfRange { vertex: 3, .. })
        ));
        assert_eq!(oracle.probes(), 0);
    }

    #[test]
    fn audit_flags_repeats_and_answers_are_pure() {
        let g = BipartiteGraph::complete(2, 2);
        let oracle = ProbeOracle::new(&g).with_audit();
        let first = oracle.probe(1, 0).unwrap();
        let second = oracle.probe(1, 0).unwrap();
        assert_eq!(first, second);
        oracle.probe(0, 1).unwrap();
        let report = oracle.audit_report().unwrap();
        assert_eq!(report.events.len() as u64, oracle.probes());
        assert_eq!(report.repeats, vec![(1, 0)]);
        assert_eq!(report.distinct_pairs(), 2);
    }

    #[test]
    fn delay_elapses() {
        let g = BipartiteGraph::empty(1, 1);
        let oracle = ProbeOracle::new(&g).with_delay(Duration::from_millis(2));
        let start = std::time::Instant::now();
        oracle.probe(0, 0).unwrap();
        assert!(start.elapsed() >= Duration::from_millis(2));
    }

    #[test]
    fn concurrent_counting_is_exact() {
        let g = BipartiteGraph::complete(8, 100);
        let oracle = ProbeOracle::new(&g);
        std::thread::scope(|s| {
            for b in 0..8 {
                let oracle = &oracle;
                s.spawn(move || {
                    for w in 0..100 {
                        oracle.probe(b, w).unwrap();
                    }
                });
            }
        });
        assert_eq!(oracle.probes(), 800);
    }
}
