//! Candidate core selection: exchange pseudo-diameters, sort, pick the head.
//!
//! Every router ends up with the same table because the budgeted broadcast
//! delivers each router's pseudo-diameter to all others, and the sort order
//! (ascending pseudo-diameter, ties to the higher router id) is total.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::dvr::RoutingState;
use crate::pseudo::{pd_broadcast, pseudo_diameter};
use crate::topology::{Cost, RouterId};

/// One row of the core table.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct CoreRow {
    pub router: RouterId,
    pub pd: Cost,
}

/// Every router paired with its pseudo-diameter, sorted ascending by
/// pseudo-diameter with ties broken by descending router id.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CoreTable {
    rows: Vec<CoreRow>,
}

impl CoreTable {
    pub fn rows(&self) -> &[CoreRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pd_of(&self, router: RouterId) -> Option<Cost> {
        self.rows.iter().find(|r| r.router == router).map(|r| r.pd)
    }
}

/// The first `m` routers of the core table, in table order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CandidateCoreSet {
    cores: Vec<RouterId>,
}

impl CandidateCoreSet {
    pub fn cores(&self) -> &[RouterId] {
        &self.cores
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    pub fn contains(&self, router: RouterId) -> bool {
        self.cores.contains(&router)
    }

    // Bypasses the m >= 1 check so error paths can be exercised.
    #[cfg(test)]
    pub(crate) fn empty() -> Self {
        CandidateCoreSet { cores: Vec::new() }
    }
}

// Wire form of the value announcement: pseudo-diameter then sender id,
// little endian.
fn encode_announcement(pd: Cost, router: RouterId) -> Vec<u8> {
    let mut bytes = Vec::with_capacity(12);
    bytes.extend_from_slice(&pd.to_le_bytes());
    bytes.extend_from_slice(&router.0.to_le_bytes());
    bytes
}

fn decode_announcement(bytes: &[u8]) -> Option<(Cost, RouterId)> {
    if bytes.len() != 12 {
        return None;
    }
    let pd = Cost::from_le_bytes(bytes[..8].try_into().ok()?);
    let id = u32::from_le_bytes(bytes[8..].try_into().ok()?);
    Some((pd, RouterId(id)))
}

/// Reads every router's pseudo-diameter straight off its table, with no
/// message simulation. The fast path for large inputs; [`broadcast_pds`]
/// is the faithful exchange.
pub fn pds_from_tables(state: &RoutingState) -> BTreeMap<RouterId, Cost> {
    state
        .tables()
        .map(|table| {
            let pd = pseudo_diameter(table);
            (pd.router, pd.value)
        })
        .collect()
}

/// Simulates every router broadcasting its pseudo-diameter and returns what
/// each router collected: `collected[r][s]` is the value `r` heard from `s`.
pub fn collect_pds_per_router(
    state: &RoutingState,
) -> Result<BTreeMap<RouterId, BTreeMap<RouterId, Cost>>> {
    let mut collected: BTreeMap<RouterId, BTreeMap<RouterId, Cost>> = state
        .topology()
        .routers()
        .map(|r| (r, BTreeMap::new()))
        .collect();

    for source in state.topology().routers() {
        let pd = pseudo_diameter(state.table(source).expect("validated topology"));
        let trace = pd_broadcast(state, source, &encode_announcement(pd.value, source))?;
        for delivery in &trace.deliveries {
            let (value, from) =
                decode_announcement(&trace.payload).expect("announcement encodes 12 bytes");
            collected
                .get_mut(&delivery.router)
                .expect("delivery to known router")
                .insert(from, value);
        }
    }

    Ok(collected)
}

/// Runs the pseudo-diameter exchange and returns the map every router
/// agreed on.
///
/// The budgeted broadcast reaches every router, so each router collects all
/// `n` values; the views are checked identical before one is returned.
pub fn broadcast_pds(state: &RoutingState) -> Result<BTreeMap<RouterId, Cost>> {
    let collected = collect_pds_per_router(state)?;
    let n = state.topology().len();
    let mut views = collected.values();
    let first = views.next().expect("topology has at least one router");
    assert_eq!(first.len(), n, "a router missed an announcement");
    for view in views {
        assert_eq!(view, first, "pseudo-diameter views diverged");
    }
    Ok(first.clone())
}

/// Sorts the collected pseudo-diameters into the core table: ascending by
/// value, equal values ordered by descending router id.
pub fn build_core_table(pds: &BTreeMap<RouterId, Cost>) -> CoreTable {
    let mut rows: Vec<CoreRow> = pds
        .iter()
        .map(|(router, pd)| CoreRow {
            router: *router,
            pd: *pd,
        })
        .collect();
    rows.sort_by(|x, y| x.pd.cmp(&y.pd).then(y.router.cmp(&x.router)));
    CoreTable { rows }
}

/// Takes the first `m` rows of the core table as the candidate core set.
pub fn select_candidates(table: &CoreTable, m: usize) -> Result<CandidateCoreSet> {
    if m < 1 || m > table.len() {
        return Err(Error::CandidateCountOutOfRange {
            m,
            n: table.len(),
        });
    }
    Ok(CandidateCoreSet {
        cores: table.rows[..m].iter().map(|r| r.router).collect(),
    })
}
