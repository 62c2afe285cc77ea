#![allow(dead_code)]

use hidden_topk::{generate_powerlaw, generate_random, BipartiteGraph};
use proptest::prelude::*;

/// Small uniform or power-law graphs, up to `max` vertices per side.
pub fn small_graph(max: u32) -> impl Strategy<Value = BipartiteGraph> {
    let uniform = (
        1..=max,
        1..=max,
        prop::sample::select(vec![0.0, 0.05, 0.3, 0.6, 1.0]),
        any::<u64>(),
    )
        .prop_map(|(nb, nw, p, seed)| generate_random(nb, nw, p, seed).unwrap());
    let powerlaw = (1..=max, 1..=max, 1.2f64..3.0, 0.0f64..=1.0, any::<u64>()).prop_map(
        |(nb, nw, a, frac, seed)| generate_powerlaw(nb, nw, a, frac * f64::from(nw), seed).unwrap(),
    );
    prop_oneof![uniform, powerlaw]
}

/// Graph plus a k in `1..=n_b + 1`, so the k > n_b fallback is also hit.
pub fn graph_and_k(max: u32) -> impl Strategy<Value = (BipartiteGraph, usize)> {
    small_graph(max).prop_flat_map(|g| {
        let nb = g.n_black() as usize;
        (Just(g), 1..=nb + 1)
    })
}
