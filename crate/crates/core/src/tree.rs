//! Core-rooted shared trees and the delivery-delay model.
//!
//! Members join by walking their unicast next hops toward the core and
//! grafting onto the first on-tree router they meet, so every branch is a
//! shortest path. Traffic from a sender is modeled as a unicast to the
//! core followed by forwarding down the tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::dvr::RoutingState;
use crate::topology::{Cost, RouterId, Topology};

/// A multicast group: an identifier plus its nonempty member set.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MulticastGroup {
    id: String,
    members: BTreeSet<RouterId>,
}

impl MulticastGroup {
    pub fn new(id: impl Into<String>, members: BTreeSet<RouterId>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::EmptyGroup);
        }
        Ok(MulticastGroup {
            id: id.into(),
            members,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn members(&self) -> &BTreeSet<RouterId> {
        &self.members
    }
}

/// A shared tree rooted at `core`. Every on-tree router except the core has
/// exactly one parent: its next hop toward the core.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SharedTree {
    core: RouterId,
    members: BTreeSet<RouterId>,
    parent: BTreeMap<RouterId, RouterId>,
    on_tree: BTreeSet<RouterId>,
    // path cost to the core, accumulated link by link while grafting
    cost_to_core: BTreeMap<RouterId, Cost>,
}

impl SharedTree {
    pub fn core(&self) -> RouterId {
        self.core
    }

    pub fn members(&self) -> &BTreeSet<RouterId> {
        &self.members
    }

    pub fn on_tree(&self) -> &BTreeSet<RouterId> {
        &self.on_tree
    }

    pub fn parent_of(&self, router: RouterId) -> Option<RouterId> {
        self.parent.get(&router).copied()
    }

    /// Tree-path cost from `router` up to the core.
    pub fn cost_to_core(&self, router: RouterId) -> Option<Cost> {
        self.cost_to_core.get(&router).copied()
    }

    /// Tree edges as `(child, parent, link cost)`, ascending by child id.
    pub fn edges(&self) -> impl Iterator<Item = (RouterId, RouterId, Cost)> + '_ {
        self.parent.iter().map(|(child, parent)| {
            let child_cost = self.cost_to_core[child];
            let parent_cost = self.cost_to_core[parent];
            (*child, *parent, child_cost - parent_cost)
        })
    }
}

/// Builds the shared tree for `group` rooted at `core`.
///
/// Each member walks its next hops toward the core and grafts onto the
/// first router already on the tree; relay routers on the way join too.
pub fn build_shared_tree(
    state: &RoutingState,
    core: RouterId,
    group: &MulticastGroup,
) -> Result<SharedTree> {
    let topology = state.topology();
    if !topology.contains(core) {
        return Err(Error::UnknownRouter(core));
    }
    for member in group.members() {
        if !topology.contains(*member) {
            return Err(Error::UnknownRouter(*member));
        }
    }

    let mut tree = SharedTree {
        core,
        members: group.members().clone(),
        parent: BTreeMap::new(),
        on_tree: BTreeSet::from([core]),
        cost_to_core: BTreeMap::from([(core, 0)]),
    };

    for member in group.members() {
        if tree.on_tree.contains(member) {
            continue;
        }
        // walk toward the core until the existing tree is reached
        let mut walk = vec![*member];
        let mut at = *member;
        while !tree.on_tree.contains(&at) {
            at = state.next_hop(at, core)?;
            walk.push(at);
            debug_assert!(walk.len() <= topology.len(), "next-hop walk must not loop");
        }
        // graft from the junction back out to the member
        for pair in walk.windows(2).rev() {
            let (child, parent) = (pair[0], pair[1]);
            let link = topology
                .link_cost(child, parent)
                .expect("next hop is a direct neighbor");
            let cost = link + tree.cost_to_core[&parent];
            tree.parent.insert(child, parent);
            tree.cost_to_core.insert(child, cost);
            tree.on_tree.insert(child);
        }
    }

    Ok(tree)
}

/// Delay seen by every member when `sender` transmits through `tree`:
/// the sender's unicast cost to the core plus the tree-path cost from the
/// core down to the member.
pub fn deliver(
    state: &RoutingState,
    tree: &SharedTree,
    sender: RouterId,
) -> Result<BTreeMap<RouterId, Cost>> {
    let to_core = state.route_cost(sender, tree.core())?;
    Ok(tree
        .members()
        .iter()
        .map(|member| {
            let down = tree.cost_to_core[member];
            (*member, to_core + down)
        })
        .collect())
}

/// Renders the topology as a DOT graph, highlighting the given tree's
/// edges, its core (double circle), and its members (filled).
pub fn dot_graph(topology: &Topology, tree: Option<&SharedTree>) -> String {
    let tree_edges: BTreeSet<(RouterId, RouterId)> = tree
        .map(|t| {
            t.edges()
                .map(|(child, parent, _)| (child.min(parent), child.max(parent)))
                .collect()
        })
        .unwrap_or_default();

    let mut out = String::from("graph topology {\n");
    out.push_str("  node [shape=circle];\n");
    for router in topology.routers() {
        let name = topology.display_name(router);
        let mut attrs = Vec::new();
        if tree.is_some_and(|t| t.core() == router) {
            attrs.push("shape=doublecircle".to_string());
        }
        if tree.is_some_and(|t| t.members().contains(&router)) {
            attrs.push("style=filled".to_string());
        }
        if attrs.is_empty() {
            let _ = writeln!(out, "  \"{name}\";");
        } else {
            let _ = writeln!(out, "  \"{name}\" [{}];", attrs.join(", "));
        }
    }
    for link in topology.links() {
        let a = topology.display_name(link.a);
        let b = topology.display_name(link.b);
        let highlight = if tree_edges.contains(&(link.a, link.b)) {
            ", color=red, penwidth=2.0"
        } else {
            ""
        };
        let _ = writeln!(out, "  \"{a}\" -- \"{b}\" [label={}{highlight}];", link.cost);
    }
    out.push_str("}\n");
    out
}
