//! The built-in 8-router example network and its known-good results.
//!
//! The reference data here is what the `check` subcommand and the
//! conformance tests compare against: converged routing tables, the
//! pseudo-diameter of every router, and the sorted core table.

use std::collections::{BTreeMap, BTreeSet};

use crate::topology::{Cost, Link, RouterId, Topology};

pub const A: RouterId = RouterId(0);
pub const B: RouterId = RouterId(1);
pub const C: RouterId = RouterId(2);
pub const D: RouterId = RouterId(3);
pub const E: RouterId = RouterId(4);
pub const F: RouterId = RouterId(5);
pub const G: RouterId = RouterId(6);
pub const H: RouterId = RouterId(7);

/// Network diameter of the example topology.
pub const DIAMETER: Cost = 90;

const LABELS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

const LINKS: [(RouterId, RouterId, Cost); 10] = [
    (A, B, 30),
    (A, C, 40),
    (B, D, 30),
    (B, E, 50),
    (C, E, 20),
    (C, F, 50),
    (D, G, 20),
    (E, G, 20),
    (E, H, 20),
    (F, H, 20),
];

/// The example topology: eight routers labeled A..H (ids ascending, so H
/// carries the highest id) joined by ten links.
pub fn topology() -> Topology {
    let routers: BTreeSet<RouterId> = (0..8).map(RouterId).collect();
    let links = LINKS.iter().map(|&(a, b, c)| Link::new(a, b, c)).collect();
    let labels = (0..8).map(|i| (RouterId(i), LABELS[i as usize].to_string())).collect();
    Topology::new(routers, links, labels).expect("example network is valid")
}

/// Converged routing-table rows `(owner, dest, next, cost)` for the example
/// network. `next` is `None` for the four destination pairs that admit two
/// equal-cost shortest paths; there the next hop depends on the tie rule
/// and only the cost is meaningful.
pub fn reference_routes() -> Vec<(RouterId, RouterId, Option<RouterId>, Cost)> {
    vec![
        (A, B, Some(B), 30),
        (A, C, Some(C), 40),
        (A, D, Some(B), 60),
        (A, E, Some(C), 60),
        (A, F, Some(C), 90),
        (A, G, None, 80),
        (A, H, Some(C), 80),
        (B, A, Some(A), 30),
        (B, C, None, 70),
        (B, D, Some(D), 30),
        (B, E, Some(E), 50),
        (B, F, Some(E), 90),
        (B, G, Some(D), 50),
        (B, H, Some(E), 70),
        (C, A, Some(A), 40),
        (C, B, None, 70),
        (C, D, Some(E), 60),
        (C, E, Some(E), 20),
        (C, F, Some(F), 50),
        (C, G, Some(E), 40),
        (C, H, Some(E), 40),
        (D, A, Some(B), 60),
        (D, B, Some(B), 30),
        (D, C, Some(G), 60),
        (D, E, Some(G), 40),
        (D, F, Some(G), 80),
        (D, G, Some(G), 20),
        (D, H, Some(G), 60),
        (E, A, Some(C), 60),
        (E, B, Some(B), 50),
        (E, C, Some(C), 20),
        (E, D, Some(G), 40),
        (E, F, Some(H), 40),
        (E, G, Some(G), 20),
        (E, H, Some(H), 20),
        (F, A, Some(C), 90),
        (F, B, Some(H), 90),
        (F, C, Some(C), 50),
        (F, D, Some(H), 80),
        (F, E, Some(H), 40),
        (F, G, Some(H), 60),
        (F, H, Some(H), 20),
        (G, A, None, 80),
        (G, B, Some(D), 50),
        (G, C, Some(E), 40),
        (G, D, Some(D), 20),
        (G, E, Some(E), 20),
        (G, F, Some(E), 60),
        (G, H, Some(E), 40),
        (H, A, Some(E), 80),
        (H, B, Some(E), 70),
        (H, C, Some(E), 40),
        (H, D, Some(E), 60),
        (H, E, Some(E), 20),
        (H, F, Some(F), 20),
        (H, G, Some(E), 40),
    ]
}

/// Pseudo-diameter of every router in the example network, ascending by id.
pub fn reference_pds() -> BTreeMap<RouterId, Cost> {
    [
        (A, 90),
        (B, 90),
        (C, 70),
        (D, 80),
        (E, 60),
        (F, 90),
        (G, 80),
        (H, 80),
    ]
    .into_iter()
    .collect()
}

/// The sorted core table of the example network: ascending pseudo-diameter,
/// ties broken by descending router id.
pub fn reference_core_order() -> Vec<(RouterId, Cost)> {
    vec![
        (E, 60),
        (C, 70),
        (H, 80),
        (G, 80),
        (D, 80),
        (F, 90),
        (B, 90),
        (A, 90),
    ]
}
