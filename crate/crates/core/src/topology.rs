//! The network graph every other module consumes.
//!
//! A [`Topology`] is a connected, undirected graph of routers joined by
//! positively weighted links. It is immutable once validated and can be
//! loaded from (and exported to) a line-oriented text format:
//!
//! ```text
//! # comment
//! router <id> [<label>]
//! link <idA> <idB> <cost>
//! ```
//!
//! Fields are whitespace-separated, costs are base-10 integers, and `#`
//! starts a comment anywhere on a line. [`Topology::export`] emits the same
//! format deterministically: routers ascending by id, links ascending by
//! `(min id, max id)`.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Link and path costs, in integer delay units.
pub type Cost = u64;

/// A router identifier. Stands in for an address; only the total order
/// matters (ties in core selection go to the numerically higher id).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct RouterId(pub u32);

impl fmt::Display for RouterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for RouterId {
    fn from(id: u32) -> Self {
        RouterId(id)
    }
}

/// An undirected link between two distinct routers. Endpoints are stored
/// with `a < b` so that `(a, b, c)` and `(b, a, c)` denote the same link.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct Link {
    pub a: RouterId,
    pub b: RouterId,
    pub cost: Cost,
}

impl Link {
    /// Builds a link with normalized endpoint order.
    pub fn new(x: RouterId, y: RouterId, cost: Cost) -> Self {
        if x <= y {
            Link { a: x, b: y, cost }
        } else {
            Link { a: y, b: x, cost }
        }
    }
}

/// A validated network graph: routers, links, and optional labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Topology {
    routers: BTreeSet<RouterId>,
    links: Vec<Link>,
    labels: BTreeMap<RouterId, String>,
    // neighbor lists ascending by id, derived from `links`
    adjacency: BTreeMap<RouterId, Vec<(RouterId, Cost)>>,
}

impl Topology {
    /// Validates and builds a topology. Rejects self-loops, non-positive
    /// costs, duplicate links, links to undeclared routers, duplicate
    /// labels, and disconnected graphs.
    pub fn new(
        routers: BTreeSet<RouterId>,
        links: Vec<Link>,
        labels: BTreeMap<RouterId, String>,
    ) -> Result<Self> {
        if routers.is_empty() {
            return Err(Error::NoRouters);
        }

        let mut seen_labels: BTreeMap<&str, RouterId> = BTreeMap::new();
        for (router, label) in &labels {
            if !routers.contains(router) {
                return Err(Error::UnknownRouter(*router));
            }
            if let Some(first) = seen_labels.insert(label, *router) {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                    first,
                    second: *router,
                });
            }
        }

        let mut normalized = Vec::with_capacity(links.len());
        let mut seen_pairs = BTreeSet::new();
        for link in links {
            let link = Link::new(link.a, link.b, link.cost);
            if link.a == link.b {
                return Err(Error::SelfLoop(link.a));
            }
            for endpoint in [link.a, link.b] {
                if !routers.contains(&endpoint) {
                    return Err(Error::UnknownLinkEndpoint {
                        a: link.a,
                        b: link.b,
                        missing: endpoint,
                    });
                }
            }
            if link.cost < 1 {
                return Err(Error::InvalidLinkCost {
                    a: link.a,
                    b: link.b,
                    cost: link.cost,
                });
            }
            if !seen_pairs.insert((link.a, link.b)) {
                return Err(Error::DuplicateLink {
                    a: link.a,
                    b: link.b,
                });
            }
            normalized.push(link);
        }
        normalized.sort_by_key(|l| (l.a, l.b));

        let mut adjacency: BTreeMap<RouterId, Vec<(RouterId, Cost)>> =
            routers.iter().map(|r| (*r, Vec::new())).collect();
        for link in &normalized {
            adjacency.get_mut(&link.a).unwrap().push((link.b, link.cost));
            adjacency.get_mut(&link.b).unwrap().push((link.a, link.cost));
        }
        for neighbors in adjacency.values_mut() {
            neighbors.sort_by_key(|(id, _)| *id);
        }

        let topology = Topology {
            routers,
            links: normalized,
            labels,
            adjacency,
        };
        topology.check_connected()?;
        Ok(topology)
    }

    fn check_connected(&self) -> Result<()> {
        let start = *self.routers.iter().next().expect("nonempty");
        let mut reached = BTreeSet::new();
        let mut stack = vec![start];
        reached.insert(start);
        while let Some(router) = stack.pop() {
            for (next, _) in self.neighbors(router) {
                if reached.insert(next) {
                    stack.push(next);
                }
            }
        }
        match self.routers.iter().find(|r| !reached.contains(r)) {
            Some(unreached) => Err(Error::Disconnected {
                from: start,
                unreached: *unreached,
            }),
            None => Ok(()),
        }
    }

    /// Parses a topology document. See the module docs for the format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut routers = BTreeSet::new();
        let mut labels = BTreeMap::new();
        let mut links = Vec::new();

        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let parse_id = |token: &str| -> Result<RouterId> {
                token.parse::<u32>().map(RouterId).map_err(|_| Error::Parse {
                    line: line_no,
                    reason: format!("invalid router id {token:?}"),
                })
            };
            match fields[0] {
                "router" => {
                    if fields.len() < 2 || fields.len() > 3 {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: format!(
                                "expected `router <id> [<label>]`, got {raw_line:?}"
                            ),
                        });
                    }
                    let id = parse_id(fields[1])?;
                    if !routers.insert(id) {
                        return Err(Error::DuplicateRouter(id));
                    }
                    if let Some(label) = fields.get(2) {
                        labels.insert(id, (*label).to_string());
                    }
                }
                "link" => {
                    if fields.len() != 4 {
                        return Err(Error::Parse {
                            line: line_no,
                            reason: format!(
                                "expected `link <idA> <idB> <cost>`, got {raw_line:?}"
                            ),
                        });
                    }
                    let a = parse_id(fields[1])?;
                    let b = parse_id(fields[2])?;
                    let cost = fields[3].parse::<Cost>().map_err(|_| Error::Parse {
                        line: line_no,
                        reason: format!("invalid link cost {:?}", fields[3]),
                    })?;
                    links.push(Link::new(a, b, cost));
                }
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        reason: format!("unknown directive {other:?}"),
                    });
                }
            }
        }

        Topology::new(routers, links, labels)
    }

    /// Emits the document form of this topology. `parse(export(t)) == t`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for router in &self.routers {
            match self.labels.get(router) {
                Some(label) => out.push_str(&format!("router {router} {label}\n")),
                None => out.push_str(&format!("router {router}\n")),
            }
        }
        for link in &self.links {
            out.push_str(&format!("link {} {} {}\n", link.a, link.b, link.cost));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.routers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routers.is_empty()
    }

    pub fn contains(&self, router: RouterId) -> bool {
        self.routers.contains(&router)
    }

    /// Routers in ascending id order.
    pub fn routers(&self) -> impl Iterator<Item = RouterId> + '_ {
        self.routers.iter().copied()
    }

    /// Links sorted by `(a, b)`.
    pub fn links(&self) -> &[Link] {
        &self.links
    }

    /// Direct neighbors of `router` with link costs, ascending by id.
    pub fn neighbors(&self, router: RouterId) -> impl Iterator<Item = (RouterId, Cost)> + '_ {
        self.adjacency
            .get(&router)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
            .iter()
            .copied()
    }

    /// Cost of the direct link between two routers, if one exists.
    pub fn link_cost(&self, a: RouterId, b: RouterId) -> Option<Cost> {
        self.neighbors(a)
            .find(|(n, _)| *n == b)
            .map(|(_, cost)| cost)
    }

    pub fn label(&self, router: RouterId) -> Option<&str> {
        self.labels.get(&router).map(String::as_str)
    }

    /// Label if one is set, otherwise the id rendered as text.
    pub fn display_name(&self, router: RouterId) -> String {
        match self.label(router) {
            Some(label) => label.to_string(),
            None => router.to_string(),
        }
    }

    /// Resolves a user-facing token to a router: a numeric id if that id
    /// exists, otherwise an exact label match.
    pub fn resolve(&self, token: &str) -> Option<RouterId> {
        if let Ok(id) = token.parse::<u32>() {
            if self.routers.contains(&RouterId(id)) {
                return Some(RouterId(id));
            }
        }
        self.labels
            .iter()
            .find(|(_, label)| label.as_str() == token)
            .map(|(id, _)| *id)
    }

    /// Maximum over all router pairs of the shortest-path cost.
    ///
    /// Computed with one Dijkstra pass per router, independently of the
    /// routing-table machinery that the rest of the crate builds.
    pub fn diameter(&self) -> Cost {
        let mut max = 0;
        for source in self.routers() {
            let dist = self.dijkstra(source);
            for cost in dist.values() {
                max = max.max(*cost);
            }
        }
        max
    }

    fn dijkstra(&self, source: RouterId) -> BTreeMap<RouterId, Cost> {
        let mut dist = BTreeMap::new();
        let mut heap = BinaryHeap::new();
        dist.insert(source, 0);
        heap.push(Reverse((0, source)));
        while let Some(Reverse((d, router))) = heap.pop() {
            if dist.get(&router).is_some_and(|best| *best < d) {
                continue;
            }
            for (next, cost) in self.neighbors(router) {
                let candidate = d + cost;
                if dist.get(&next).is_none_or(|best| candidate < *best) {
                    dist.insert(next, candidate);
                    heap.push(Reverse((candidate, next)));
                }
            }
        }
        dist
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixture;

    fn simple(text: &str) -> Result<Topology> {
        Topology::parse(text)
    }

    #[test]
    fn parses_fixture_document() {
        let topo = simple(&fixture::topology().export()).unwrap();
        assert_eq!(topo.len(), 8);
        assert_eq!(topo.links().len(), 10);
        assert_eq!(topo.label(RouterId(0)), Some("A"));
    }

    #[test]
    fn single_router_topology_is_valid() {
        let topo = simple("router 7\n").unwrap();
        assert_eq!(topo.len(), 1);
        assert_eq!(topo.diameter(), 0);
    }

    #[test]
    fn zero_cost_link_is_rejected() {
        let err = simple("router 0\nrouter 1\nlink 0 1 0\n").unwrap_err();
        assert_eq!(
            err,
            Error::InvalidLinkCost {
                a: RouterId(0),
                b: RouterId(1),
                cost: 0
            }
        );
    }

    #[test]
    fn self_loop_is_rejected() {
        let err = simple("router 0\nlink 0 0 5\n").unwrap_err();
        assert_eq!(err, Error::SelfLoop(RouterId(0)));
    }

    #[test]
    fn duplicate_link_is_rejected_in_either_order() {
        let err = simple("router 0\nrouter 1\nlink 0 1 5\nlink 1 0 9\n").unwrap_err();
        assert_eq!(
            err,
            Error::DuplicateLink {
                a: RouterId(0),
                b: RouterId(1)
            }
        );
    }

    #[test]
    fn disconnected_graph_is_rejected() {
        let err = simple("router 0\nrouter 1\nrouter 2\nlink 0 1 3\n").unwrap_err();
        assert_eq!(
            err,
            Error::Disconnected {
                from: RouterId(0),
                unreached: RouterId(2)
            }
        );
    }

    #[test]
    fn link_to_undeclared_router_is_rejected() {
        let err = simple("router 0\nlink 0 9 3\n").unwrap_err();
        assert_eq!(
            err,
            Error::UnknownLinkEndpoint {
                a: RouterId(0),
                b: RouterId(9),
                missing: RouterId(9)
            }
        );
    }

    #[test]
    fn malformed_line_reports_its_number() {
        let err = simple("router 0\nbogus 1 2\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_document_is_rejected() {
        assert_eq!(simple("# nothing here\n").unwrap_err(), Error::NoRouters);
    }

    #[test]
    fn duplicate_router_is_rejected() {
        let err = simple("router 3\nrouter 3\n").unwrap_err();
        assert_eq!(err, Error::DuplicateRouter(RouterId(3)));
    }

    #[test]
    fn duplicate_label_is_rejected() {
        let err = simple("router 0 X\nrouter 1 X\nlink 0 1 1\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateLabel { .. }));
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let topo = simple("# head\n\nrouter 0 A # trailing\nrouter 1\nlink 0 1 2\n").unwrap();
        assert_eq!(topo.len(), 2);
        assert_eq!(topo.label(RouterId(0)), Some("A"));
    }

    #[test]
    fn diameter_of_two_hop_path() {
        let topo = simple("router 0\nrouter 1\nrouter 2\nlink 0 1 1\nlink 1 2 1\n").unwrap();
        assert_eq!(topo.diameter(), 2);
    }

    #[test]
    fn fixture_diameter_is_90() {
        assert_eq!(fixture::topology().diameter(), 90);
    }

    #[test]
    fn export_round_trips() {
        let topo = fixture::topology();
        assert_eq!(Topology::parse(&topo.export()).unwrap(), topo);
    }

    #[test]
    fn resolve_accepts_ids_and_labels() {
        let topo = fixture::topology();
        assert_eq!(topo.resolve("E"), Some(RouterId(4)));
        assert_eq!(topo.resolve("4"), Some(RouterId(4)));
        assert_eq!(topo.resolve("Z"), None);
    }
}
