//! Pseudo-diameters and the budget-bounded broadcast built on them.
//!
//! The pseudo-diameter of a router is the largest cost in its converged
//! routing table: an upper bound on its distance to any other router, and
//! never more than the network diameter. A broadcast budgeted by the
//! source's pseudo-diameter therefore reaches every router, and the per-hop
//! budget reductions along any delivery path sum to at most that budget.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::dvr::{RoutingState, RoutingTable};
use crate::topology::{Cost, RouterId};

/// A router's pseudo-diameter: the maximum cost over the non-self entries
/// of its routing table.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct PseudoDiameter {
    pub router: RouterId,
    pub value: Cost,
}

/// Reads the pseudo-diameter off a converged routing table. A single-router
/// table has no non-self entries and yields 0.
pub fn pseudo_diameter(table: &RoutingTable) -> PseudoDiameter {
    PseudoDiameter {
        router: table.owner(),
        value: table.max_cost(),
    }
}

/// One router receiving its copy of a broadcast packet.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Delivery {
    pub router: RouterId,
    /// Routers traversed from the source to this router, inclusive.
    pub path: Vec<RouterId>,
    /// Per-hop budget reductions along `path`; one per traversed link.
    pub decrements: Vec<Cost>,
    /// Budget left when the packet arrived.
    pub remaining: Cost,
}

impl Delivery {
    /// Total budget spent getting here.
    pub fn spent(&self) -> Cost {
        self.decrements.iter().sum()
    }
}

/// The full record of one budgeted broadcast: every router appears exactly
/// once in `deliveries`, in the deterministic order the flood visited them.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BroadcastTrace {
    pub source: RouterId,
    /// The source's pseudo-diameter, i.e. the initial budget.
    pub budget: Cost,
    pub payload: Vec<u8>,
    pub deliveries: Vec<Delivery>,
}

impl BroadcastTrace {
    pub fn delivery_to(&self, router: RouterId) -> Option<&Delivery> {
        self.deliveries.iter().find(|d| d.router == router)
    }
}

/// Floods `payload` from `source` with a budget equal to the source's
/// pseudo-diameter.
///
/// A router `u` forwards to a neighbor `v` only when `v`'s own next hop
/// toward the source is `u` (reverse-path acceptance) and the budget still
/// covers the link: each copy carries `budget - link_cost`, and a copy is
/// sent only while that stays nonnegative. Neighbors are visited in
/// ascending id order, so traces are reproducible.
pub fn pd_broadcast(state: &RoutingState, source: RouterId, payload: &[u8]) -> Result<BroadcastTrace> {
    let table = state.table(source).ok_or(Error::UnknownRouter(source))?;
    let budget = pseudo_diameter(table).value;
    let topology = state.topology();

    let mut deliveries = Vec::with_capacity(topology.len());
    deliveries.push(Delivery {
        router: source,
        path: vec![source],
        decrements: Vec::new(),
        remaining: budget,
    });

    let mut queue: VecDeque<usize> = VecDeque::new();
    queue.push_back(0);
    while let Some(at) = queue.pop_front() {
        let (router, remaining) = (deliveries[at].router, deliveries[at].remaining);
        for (neighbor, link_cost) in topology.neighbors(router) {
            // reverse-path check: neighbor accepts only from its next hop
            // toward the source
            if state.next_hop(neighbor, source)? != router {
                continue;
            }
            if remaining < link_cost {
                continue;
            }
            let mut path = deliveries[at].path.clone();
            path.push(neighbor);
            let mut decrements = deliveries[at].decrements.clone();
            decrements.push(link_cost);
            deliveries.push(Delivery {
                router: neighbor,
                path,
                decrements,
                remaining: remaining - link_cost,
            });
            queue.push_back(deliveries.len() - 1);
        }
    }

    Ok(BroadcastTrace {
        source,
        budget,
        payload: payload.to_vec(),
        deliveries,
    })
}
