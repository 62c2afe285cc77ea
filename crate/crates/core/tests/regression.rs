//! Probe counts on a fixed instance, pinned from the first run so that
//! accidental changes to probing behavior show up. The answers themselves
//! are checked against brute force.

use hidden_topk::*;

fn instance() -> BipartiteGraph {
    generate_powerlaw(40, 40, 2.0, 10.0, 3).unwrap()
}

#[test]
fn pinned_probe_counts() {
    let g = instance();
    let expected = brute_force_topk(&g, 3).unwrap();
    let exec = Executor::new(3).unwrap();

    let soe = soe_topk(&ProbeOracle::new(&g), 3, &SoeConfig::default()).unwrap();
    let dsoe = dsoe_topk(&ProbeOracle::new(&g), 3, &DsoeConfig::default(), &exec).unwrap();
    let cfg = DsoeStarConfig {
        seed: 42,
        ..DsoeStarConfig::default()
    };
    let star = dsoe_star_topk(&ProbeOracle::new(&g), 3, &cfg, &exec).unwrap();

    for run in [&soe, &dsoe, &star] {
        assert_eq!(run.result, expected);
    }
    let top: Vec<(u32, u32)> = expected
        .entries
        .iter()
        .map(|e| (e.vertex, e.degree))
        .collect();
    assert_eq!(top, vec![(8, 40), (38, 24), (13, 20)]);

    assert_eq!((soe.probes, soe.rounds.len()), (1098, 21));
    assert_eq!((dsoe.probes, dsoe.rounds.len()), (1577, 6));
    assert_eq!((star.probes, star.rounds.len()), (1099, 10));
}
