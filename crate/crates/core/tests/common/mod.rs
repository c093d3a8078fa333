//! Seeded random-topology corpus shared by the integration suites.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use corecast::topology::{Cost, Link, RouterId, Topology};

/// Builds a connected topology with `n` routers, scattered ids, a random
/// spanning tree plus extra links, and costs in `1..=max_cost`.
pub fn random_connected_topology(rng: &mut StdRng, n: usize, max_cost: Cost) -> Topology {
    assert!(n >= 1);
    // scattered, non-contiguous ids
    let mut ids: BTreeSet<RouterId> = BTreeSet::new();
    while ids.len() < n {
        ids.insert(RouterId(rng.random_range(0..(n as u32 * 4 + 8))));
    }
    let ids: Vec<RouterId> = ids.into_iter().collect();

    // spanning tree guarantees connectivity
    let mut pairs: BTreeSet<(RouterId, RouterId)> = BTreeSet::new();
    let mut links = Vec::new();
    for k in 1..n {
        let parent = ids[rng.random_range(0..k)];
        let cost = rng.random_range(1..=max_cost);
        let link = Link::new(parent, ids[k], cost);
        pairs.insert((link.a, link.b));
        links.push(link);
    }
    // extra links for alternative paths
    for _ in 0..rng.random_range(0..=n) {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            continue;
        }
        let link = Link::new(ids[i], ids[j], rng.random_range(1..=max_cost));
        if pairs.insert((link.a, link.b)) {
            links.push(link);
        }
    }

    // label a few routers to exercise the name map
    let mut labels = BTreeMap::new();
    for (k, id) in ids.iter().enumerate() {
        if k % 3 == 0 {
            labels.insert(*id, format!("n{id}"));
        }
    }

    Topology::new(ids.into_iter().collect(), links, labels).expect("generated graph is valid")
}

/// The standard corpus: `count` topologies with sizes in `2..=50` and costs
/// in `1..=100`, derived from frozen seeds so every run sees the same graphs.
pub fn corpus(count: usize) -> Vec<Topology> {
    (0..count)
        .map(|i| {
            let mut rng = StdRng::seed_from_u64(0xC0DE_BA5E + i as u64);
            let n = rng.random_range(2..=50);
            random_connected_topology(&mut rng, n, 100)
        })
        .collect()
}
