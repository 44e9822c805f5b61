#![allow(dead_code)]

use pinkey_core::graph::WeightedGraph;
use pinkey_core::NetworkSpec;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform integer in `lo..=hi`.
pub fn between(rng: &mut ChaCha8Rng, lo: u64, hi: u64) -> u64 {
    lo + rng.next_u64() % (hi - lo + 1)
}

/// Random spec on `min_m..=max_m` terminals with budgets in `0..=max_budget`,
/// optionally patched to be connected by a random path of positive budgets.
pub fn random_spec(
    rng: &mut ChaCha8Rng,
    min_m: usize,
    max_m: usize,
    max_budget: u64,
    connected: bool,
) -> NetworkSpec {
    let m = between(rng, min_m as u64, max_m as u64) as usize;
    let mut spec = NetworkSpec::new(m).unwrap();
    for i in 0..m {
        for j in i + 1..m {
            spec.set_budget(i, j, between(rng, 0, max_budget)).unwrap();
        }
    }
    if connected {
        let mut order: Vec<usize> = (0..m).collect();
        for i in (1..m).rev() {
            order.swap(i, between(rng, 0, i as u64) as usize);
        }
        for w in order.windows(2) {
            if spec.budget(w[0], w[1]) == 0 {
                spec.set_budget(w[0], w[1], between(rng, 1, max_budget)).unwrap();
            }
        }
    }
    spec
}

/// Star centered at 0 on `2..=max_m` terminals with leaf budgets in `0..=max_budget`.
pub fn random_star(rng: &mut ChaCha8Rng, max_m: usize, max_budget: u64) -> NetworkSpec {
    let m = between(rng, 2, max_m as u64) as usize;
    let mut spec = NetworkSpec::new(m).unwrap();
    for leaf in 1..m {
        spec.set_budget(0, leaf, between(rng, 0, max_budget)).unwrap();
    }
    spec
}

/// Every spanning tree weight of `g`, by trying all (m-1)-subsets of its edges.
pub fn all_spanning_tree_weights(g: &WeightedGraph) -> Vec<u64> {
    let edges: Vec<_> = g.edges().collect();
    let m = g.m();
    let mut out = Vec::new();
    for mask in 0u32..(1 << edges.len()) {
        if mask.count_ones() as usize != m - 1 {
            continue;
        }
        let mut comp: Vec<usize> = (0..m).collect();
        let mut ok = true;
        let mut weight = 0;
        for (k, (p, w)) in edges.iter().enumerate() {
            if mask >> k & 1 == 0 {
                continue;
            }
            let (a, b) = (comp[p.lo()], comp[p.hi()]);
            if a == b {
                ok = false;
                break;
            }
            for c in comp.iter_mut() {
                if *c == b {
                    *c = a;
                }
            }
            weight += w;
        }
        if ok {
            out.push(weight);
        }
    }
    out
}

/// Bell numbers via the Bell triangle.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let last = *next.last().unwrap();
            next.push(last + x);
        }
        row = next;
    }
    row[0]
}
