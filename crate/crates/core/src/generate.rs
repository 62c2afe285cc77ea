//! Seeded synthetic bipartite graphs.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Pareto};

use crate::error::{Error, Result};
use crate::graph::BipartiteGraph;

/// Includes every `(b, w)` pair independently with probability `p`.
pub fn generate_random(n_b: u32, n_w: u32, p: f64, seed: u64) -> Result<BipartiteGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n_b)
        .map(|_| (0..n_w).filter(|_| rng.random_bool(p)).collect())
        .collect();
    BipartiteGraph::from_rows(n_w, rows)
}

/// Black degrees follow a discrete power law truncated at `n_w`; each black
/// vertex then picks its neighbors uniformly without replacement.
///
/// A degree is `min(n_w, floor(c * x))` with `x ~ Pareto(1, exponent)`. The
/// scale `c` is solved so that the expected degree equals `mean_degree`,
/// using `E[min(n_w, floor(cX))] = sum_{j=1..n_w} min(1, (c/j)^exponent)`.
pub fn generate_powerlaw(
    n_b: u32,
    n_w: u32,
    exponent: f64,
    mean_degree: f64,
    seed: u64,
) -> Result<BipartiteGraph> {
    if exponent.is_nan() || exponent <= 1.0 || !exponent.is_finite() {
        return Err(Error::InvalidExponent(exponent));
    }
    if mean_degree.is_nan() || mean_degree < 0.0 || mean_degree > n_w as f64 {
        return Err(Error::InfeasibleMeanDegree {
            mean: mean_degree,
            n_w,
        });
    }
    if mean_degree == 0.0 || n_w == 0 {
        return Ok(BipartiteGraph::empty(n_b, n_w));
    }
    if mean_degree == n_w as f64 {
        return Ok(BipartiteGraph::complete(n_b, n_w));
    }

    let scale = solve_scale(n_w, exponent, mean_degree);
    let pareto = Pareto::new(1.0, exponent).expect("exponent validated above");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n_b)
        .map(|_| {
            let x: f64 = pareto.sample(&mut rng);
            let degree = (scale * x).floor().min(n_w as f64) as usize;
            let mut row: Vec<u32> = index::sample(&mut rng, n_w as usize, degree)
                .into_iter()
                .map(|w| w as u32)
                .collect();
            row.sort_unstable();
            row
        })
        .collect();
    BipartiteGraph::from_rows(n_w, rows)
}

fn expected_degree(n_w: u32, exponent: f64, scale: f64) -> f64 {
    (1..=n_w)
        .map(|j| (scale / j as f64).powf(exponent).min(1.0))
        .sum()
}

fn solve_scale(n_w: u32, exponent: f64, mean: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while expected_degree(n_w, exponent, hi) < mean {
        hi *= 2.0;
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if expected_degree(n_w, exponent, mid) < mean {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}
