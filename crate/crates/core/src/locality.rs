//! Per-sender core choice by the end-to-end delay estimate.
//!
//! A sender scores each candidate core as the core's pseudo-diameter plus
//! the sender's own table cost to that core, and picks the minimum. The
//! estimate needs nothing beyond the sender's routing table and the shared
//! core table, so every sender decides independently.

use serde::Serialize;

use crate::cores::{CandidateCoreSet, CoreTable};
use crate::error::{Error, Result};
use crate::dvr::RoutingState;
use crate::topology::{Cost, RouterId};

/// The delay estimate a sender assigns one candidate core.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct EdEstimate {
    pub sender: RouterId,
    pub core: RouterId,
    /// Cost from the sender to the core, from the sender's table.
    pub cost_to_core: Cost,
    /// The core's pseudo-diameter: its worst-case reach to any member.
    pub core_pd: Cost,
    /// `core_pd + cost_to_core`.
    pub ed: Cost,
}

/// Assembles the estimate for one `(sender, core)` pair.
pub fn ed(
    state: &RoutingState,
    table: &CoreTable,
    sender: RouterId,
    core: RouterId,
) -> Result<EdEstimate> {
    let core_pd = table.pd_of(core).ok_or(Error::UnknownRouter(core))?;
    let cost_to_core = state.route_cost(sender, core)?;
    Ok(EdEstimate {
        sender,
        core,
        cost_to_core,
        core_pd,
        ed: core_pd + cost_to_core,
    })
}

/// Picks the candidate core with the lowest estimate for `sender`.
///
/// Equal estimates prefer the lower pseudo-diameter, then the higher
/// router id, so the choice is total and deterministic.
pub fn select_core(
    state: &RoutingState,
    table: &CoreTable,
    candidates: &CandidateCoreSet,
    sender: RouterId,
) -> Result<(RouterId, EdEstimate)> {
    if candidates.is_empty() {
        return Err(Error::EmptyCandidateSet);
    }
    let mut best: Option<EdEstimate> = None;
    for core in candidates.cores() {
        let estimate = ed(state, table, sender, *core)?;
        let replace = match &best {
            None => true,
            Some(current) => {
                (estimate.ed, estimate.core_pd, std::cmp::Reverse(estimate.core))
                    < (current.ed, current.core_pd, std::cmp::Reverse(current.core))
            }
        };
        if replace {
            best = Some(estimate);
        }
    }
    let chosen = best.expect("candidate set is nonempty");
    Ok((chosen.core, chosen))
}
