//! Distance-vector routing tables and an independent all-pairs oracle.
//!
//! [`compute_dvr`] runs the synchronous distance-vector exchange: in each
//! round every router shares its current vector with its direct neighbors
//! only, and recomputes its own vector from what it heard. The iteration
//! reaches a fixed point in at most `n - 1` changing rounds on a connected
//! `n`-router graph.
//!
//! [`apsp_oracle`] computes the same metric by Floyd-Warshall relaxation
//! over the whole graph. It shares no code with `compute_dvr`; tests compare
//! the two against each other.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::topology::{Cost, RouterId, Topology};

/// One row of a routing table: how `owner` reaches `dest`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct RouteEntry {
    pub dest: RouterId,
    pub next: RouterId,
    pub cost: Cost,
}

/// A single router's converged view: one entry per router in the topology,
/// ascending by destination. The self entry has cost 0 and `next == owner`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct RoutingTable {
    owner: RouterId,
    entries: Vec<RouteEntry>,
}

impl RoutingTable {
    pub fn owner(&self) -> RouterId {
        self.owner
    }

    pub fn entries(&self) -> &[RouteEntry] {
        &self.entries
    }

    pub fn entry(&self, dest: RouterId) -> Option<&RouteEntry> {
        self.entries
            .binary_search_by_key(&dest, |e| e.dest)
            .ok()
            .map(|i| &self.entries[i])
    }

    pub fn cost_to(&self, dest: RouterId) -> Option<Cost> {
        self.entry(dest).map(|e| e.cost)
    }

    pub fn next_hop(&self, dest: RouterId) -> Option<RouterId> {
        self.entry(dest).map(|e| e.next)
    }

    /// Maximum cost over the non-self entries; 0 for a single-router table.
    pub fn max_cost(&self) -> Cost {
        self.entries
            .iter()
            .filter(|e| e.dest != self.owner)
            .map(|e| e.cost)
            .max()
            .unwrap_or(0)
    }
}

/// All routers' converged tables plus the topology they were derived from.
#[derive(Clone, Debug)]
pub struct RoutingState {
    topology: Topology,
    tables: BTreeMap<RouterId, RoutingTable>,
    rounds: usize,
}

impl RoutingState {
    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub fn table(&self, router: RouterId) -> Option<&RoutingTable> {
        self.tables.get(&router)
    }

    /// Tables ascending by owner id.
    pub fn tables(&self) -> impl Iterator<Item = &RoutingTable> {
        self.tables.values()
    }

    /// Number of synchronous exchange rounds that changed at least one
    /// table before the fixed point was reached.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Cost from `from` to `to` as recorded in `from`'s table.
    pub fn route_cost(&self, from: RouterId, to: RouterId) -> Result<Cost> {
        let table = self.table(from).ok_or(Error::UnknownRouter(from))?;
        table.cost_to(to).ok_or(Error::UnknownRouter(to))
    }

    /// Next hop from `from` toward `to` as recorded in `from`'s table.
    pub fn next_hop(&self, from: RouterId, to: RouterId) -> Result<RouterId> {
        let table = self.table(from).ok_or(Error::UnknownRouter(from))?;
        table.next_hop(to).ok_or(Error::UnknownRouter(to))
    }
}

/// Runs the synchronous distance-vector exchange to convergence.
///
/// When two neighbors offer equal cost to a destination, the neighbor with
/// the higher router id becomes the next hop, so tables are deterministic.
pub fn compute_dvr(topology: &Topology) -> RoutingState {
    let ids: Vec<RouterId> = topology.routers().collect();
    let index: BTreeMap<RouterId, usize> = ids.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let n = ids.len();

    // adjacency as indices
    let adjacency: Vec<Vec<(usize, Cost)>> = ids
        .iter()
        .map(|r| {
            topology
                .neighbors(*r)
                .map(|(nb, c)| (index[&nb], c))
                .collect()
        })
        .collect();

    let mut dist = vec![vec![Cost::MAX; n]; n];
    let mut next = vec![vec![usize::MAX; n]; n];
    for i in 0..n {
        dist[i][i] = 0;
        next[i][i] = i;
    }

    let mut rounds = 0;
    loop {
        // every router reads the vectors its neighbors advertised last round
        let snapshot = dist.clone();
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let mut best_cost = Cost::MAX;
                let mut best_hop = usize::MAX;
                for &(h, link_cost) in &adjacency[i] {
                    if snapshot[h][j] == Cost::MAX {
                        continue;
                    }
                    let candidate = link_cost + snapshot[h][j];
                    let better = candidate < best_cost
                        || (candidate == best_cost
                            && best_hop != usize::MAX
                            && ids[h] > ids[best_hop]);
                    if better {
                        best_cost = candidate;
                        best_hop = h;
                    }
                }
                if best_cost < dist[i][j] || (best_cost == dist[i][j] && best_hop != next[i][j]) {
                    if best_cost < dist[i][j] {
                        changed = true;
                    }
                    dist[i][j] = best_cost;
                    next[i][j] = best_hop;
                }
            }
        }
        if !changed {
            break;
        }
        rounds += 1;
    }

    let tables = ids
        .iter()
        .enumerate()
        .map(|(i, owner)| {
            let entries = ids
                .iter()
                .enumerate()
                .map(|(j, dest)| RouteEntry {
                    dest: *dest,
                    next: ids[next[i][j]],
                    cost: dist[i][j],
                })
                .collect();
            (
                *owner,
                RoutingTable {
                    owner: *owner,
                    entries,
                },
            )
        })
        .collect();

    RoutingState {
        topology: topology.clone(),
        tables,
        rounds,
    }
}

/// All-pairs shortest-path costs computed by exhaustive relaxation.
#[derive(Clone, Debug)]
pub struct CostMatrix {
    ids: Vec<RouterId>,
    index: BTreeMap<RouterId, usize>,
    dist: Vec<Vec<Cost>>,
}

impl CostMatrix {
    pub fn cost(&self, a: RouterId, b: RouterId) -> Option<Cost> {
        let i = *self.index.get(&a)?;
        let j = *self.index.get(&b)?;
        Some(self.dist[i][j])
    }

    /// Largest entry of the matrix.
    pub fn max(&self) -> Cost {
        self.dist
            .iter()
            .flat_map(|row| row.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Maximum cost from `router` to any other router.
    pub fn max_from(&self, router: RouterId) -> Option<Cost> {
        let i = *self.index.get(&router)?;
        self.dist[i]
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, c)| *c)
            .max()
            .or(Some(0))
    }

    /// Neighbors of `from` that lie on a shortest path toward `to`. A
    /// single element means the next hop is forced; more than one means
    /// equal-cost paths exist and any tie rule is admissible.
    pub fn equal_cost_first_hops(
        &self,
        topology: &Topology,
        from: RouterId,
        to: RouterId,
    ) -> Vec<RouterId> {
        let Some(total) = self.cost(from, to) else {
            return Vec::new();
        };
        topology
            .neighbors(from)
            .filter(|(nb, link_cost)| {
                self.cost(*nb, to)
                    .is_some_and(|rest| link_cost + rest == total)
            })
            .map(|(nb, _)| nb)
            .collect()
    }
}

/// Floyd-Warshall over the full graph; the verification oracle for
/// [`compute_dvr`].
pub fn apsp_oracle(topology: &Topology) -> CostMatrix {
    let ids: Vec<RouterId> = topology.routers().collect();
    let index: BTreeMap<RouterId, usize> = ids.iter().enumerate().map(|(i, r)| (*r, i)).collect();
    let n = ids.len();

    let mut dist = vec![vec![Cost::MAX; n]; n];
    for (i, row) in dist.iter_mut().enumerate() {
        row[i] = 0;
    }
    for link in topology.links() {
        let a = index[&link.a];
        let b = index[&link.b];
        dist[a][b] = dist[a][b].min(link.cost);
        dist[b][a] = dist[b][a].min(link.cost);
    }
    for k in 0..n {
        for i in 0..n {
            if dist[i][k] == Cost::MAX {
                continue;
            }
            for j in 0..n {
                if dist[k][j] == Cost::MAX {
                    continue;
                }
                let through = dist[i][k] + dist[k][j];
                if through < dist[i][j] {
                    dist[i][j] = through;
                }
            }
        }
    }

    CostMatrix { ids, index, dist }
}

impl CostMatrix {
    pub fn routers(&self) -> &[RouterId] {
        &self.ids
    }
}
