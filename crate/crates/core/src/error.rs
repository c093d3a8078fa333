use crate::topology::RouterId;
use thiserror::Error;

/// Errors produced by topology loading, validation, and the simulation
/// operations built on top of a validated topology.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    /// A line in a topology document that does not conform to the format.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    /// The same router id was declared twice.
    #[error("duplicate router {0}")]
    DuplicateRouter(RouterId),

    /// Two routers carry the same label, which would make label lookups ambiguous.
    #[error("label {label:?} assigned to both router {first} and router {second}")]
    DuplicateLabel {
        label: String,
        first: RouterId,
        second: RouterId,
    },

    /// A link connecting a router to itself.
    #[error("link {0}-{0}: self-loops are not allowed")]
    SelfLoop(RouterId),

    /// The same unordered router pair was linked more than once.
    #[error("duplicate link {a}-{b}")]
    DuplicateLink { a: RouterId, b: RouterId },

    /// Link costs are delay units and must be at least 1.
    #[error("link {a}-{b}: cost {cost} is not positive")]
    InvalidLinkCost { a: RouterId, b: RouterId, cost: u64 },

    /// A link references a router that was never declared.
    #[error("link {a}-{b}: unknown router {missing}")]
    UnknownLinkEndpoint {
        a: RouterId,
        b: RouterId,
        missing: RouterId,
    },

    /// A topology document that declares no routers at all.
    #[error("topology declares no routers")]
    NoRouters,

    /// The graph is not connected; `unreached` cannot be reached from `from`.
    #[error("router {unreached} is not reachable from router {from}")]
    Disconnected { from: RouterId, unreached: RouterId },

    /// An operation was asked about a router that is not part of the topology.
    #[error("unknown router {0}")]
    UnknownRouter(RouterId),

    /// The requested candidate set size lies outside 1..=n.
    #[error("candidate count {m} out of range 1..={n}")]
    CandidateCountOutOfRange { m: usize, n: usize },

    /// A multicast group must have at least one member.
    #[error("multicast group has no members")]
    EmptyGroup,

    /// Core selection needs at least one candidate to choose from.
    #[error("candidate core set is empty")]
    EmptyCandidateSet,
}

pub type Result<T> = std::result::Result<T, Error>;
