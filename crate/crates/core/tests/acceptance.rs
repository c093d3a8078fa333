//! Acceptance suite: golden checks on the built-in example network plus
//! zero-failure property sweeps over a 200-graph random corpus.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see one
//! pass line per criterion.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::SeedableRng;

use corecast::cores::{
    broadcast_pds, build_core_table, collect_pds_per_router, pds_from_tables, select_candidates,
};
use corecast::dvr::{apsp_oracle, compute_dvr};
use corecast::fixture;
use corecast::locality::{ed, select_core};
use corecast::pseudo::{pd_broadcast, pseudo_diameter, Delivery};
use corecast::topology::RouterId;
use corecast::tree::{build_shared_tree, deliver, MulticastGroup};

const CORPUS_SIZE: usize = 200;

fn pass(line: &str) {
    println!("PASS {line}");
}

/// Converged tables on the example network reproduce the reference rows:
/// every (dest, cost) entry exactly, and the next hop wherever the
/// shortest path is unique. Completes in under a second.
#[test]
fn example_network_routing_tables_match_reference() {
    let started = Instant::now();
    let topo = fixture::topology();
    let state = compute_dvr(&topo);
    let matrix = apsp_oracle(&topo);

    for (owner, dest, reference_next, reference_cost) in fixture::reference_routes() {
        let entry = state.table(owner).unwrap().entry(dest).unwrap();
        assert_eq!(
            entry.cost, reference_cost,
            "cost {owner} -> {dest}: got {}, reference {}",
            entry.cost, reference_cost
        );
        let first_hops = matrix.equal_cost_first_hops(&topo, owner, dest);
        match reference_next {
            Some(next) => {
                assert_eq!(
                    first_hops.len(),
                    1,
                    "{owner} -> {dest} marked unique but has hops {first_hops:?}"
                );
                assert_eq!(entry.next, next, "next hop {owner} -> {dest}");
            }
            None => {
                assert!(
                    first_hops.len() > 1,
                    "{owner} -> {dest} marked ambiguous but has hops {first_hops:?}"
                );
                assert!(first_hops.contains(&entry.next));
            }
        }
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "table reproduction took {elapsed:?}"
    );
    pass("example network: all 56 (dest, cost) rows match; next hops match where unique");
}

/// The eight pseudo-diameters come out as 90, 90, 70, 80, 60, 90, 80, 80.
#[test]
fn example_network_pseudo_diameters() {
    let state = compute_dvr(&fixture::topology());
    let expected: Vec<u64> = vec![90, 90, 70, 80, 60, 90, 80, 80];
    let got: Vec<u64> = state
        .tables()
        .map(|table| pseudo_diameter(table).value)
        .collect();
    assert_eq!(got, expected);
    pass("example network: pseudo-diameters are 90 90 70 80 60 90 80 80");
}

/// The sorted core table is E(60), C(70), H(80), G(80), D(80), F(90),
/// B(90), A(90), and the three-candidate set is {E, C, H}.
#[test]
fn example_network_core_table_and_candidates() {
    let state = compute_dvr(&fixture::topology());
    let table = build_core_table(&broadcast_pds(&state).unwrap());
    let got: Vec<(RouterId, u64)> = table.rows().iter().map(|r| (r.router, r.pd)).collect();
    assert_eq!(got, fixture::reference_core_order());

    let candidates = select_candidates(&table, 3).unwrap();
    assert_eq!(candidates.cores(), &[fixture::E, fixture::C, fixture::H]);
    pass("example network: core table sorted E C H G D F B A; candidates {E, C, H}");
}

/// Sender A scores the candidates 120, 110, 160 and picks C.
#[test]
fn example_network_sender_a_picks_core_c() {
    use fixture::{A, C, E, H};
    let state = compute_dvr(&fixture::topology());
    let table = build_core_table(&broadcast_pds(&state).unwrap());
    let candidates = select_candidates(&table, 3).unwrap();

    assert_eq!(ed(&state, &table, A, E).unwrap().ed, 120);
    assert_eq!(ed(&state, &table, A, C).unwrap().ed, 110);
    assert_eq!(ed(&state, &table, A, H).unwrap().ed, 160);

    let (core, estimate) = select_core(&state, &table, &candidates, A).unwrap();
    assert_eq!(core, C);
    assert_eq!(estimate.ed, 110);
    pass("example network: sender A estimates 120/110/160 and selects C");
}

/// The network diameter is 90; every pseudo-diameter stays within it and
/// router A's reaches it.
#[test]
fn example_network_diameter_bounds_pseudo_diameters() {
    let topo = fixture::topology();
    let state = compute_dvr(&topo);
    assert_eq!(topo.diameter(), fixture::DIAMETER);
    for table in state.tables() {
        assert!(pseudo_diameter(table).value <= 90);
    }
    assert_eq!(pseudo_diameter(state.table(fixture::A).unwrap()).value, 90);
    pass("example network: diameter 90 bounds every pseudo-diameter; A attains it");
}

/// On 200 random connected graphs (n in 2..=50, costs in 1..=100) and every
/// source, the budgeted broadcast delivers to all n routers exactly once.
#[test]
fn broadcast_covers_every_router_exactly_once() {
    let corpus = common::corpus(CORPUS_SIZE);
    assert_eq!(corpus.len(), CORPUS_SIZE);
    let mut sources = 0usize;
    for topo in &corpus {
        let state = compute_dvr(topo);
        let everyone: BTreeSet<RouterId> = topo.routers().collect();
        for source in topo.routers() {
            let trace = pd_broadcast(&state, source, &[]).unwrap();
            assert_eq!(trace.deliveries.len(), topo.len(), "source {source}");
            let delivered: BTreeSet<RouterId> =
                trace.deliveries.iter().map(|d| d.router).collect();
            assert_eq!(delivered, everyone, "source {source} missed routers");
            sources += 1;
        }
    }
    pass(&format!(
        "broadcast coverage: {sources} sources across {CORPUS_SIZE} graphs, zero failures"
    ));
}

/// On the same corpus, every delivery's summed budget decrements stay
/// within the source's pseudo-diameter, and the farthest router spends
/// exactly all of it.
#[test]
fn broadcast_budget_decrements_stay_within_pseudo_diameter() {
    let corpus = common::corpus(CORPUS_SIZE);
    let mut deliveries = 0usize;
    for topo in &corpus {
        let state = compute_dvr(topo);
        for source in topo.routers() {
            let budget = pseudo_diameter(state.table(source).unwrap()).value;
            let trace = pd_broadcast(&state, source, &[]).unwrap();
            assert_eq!(trace.budget, budget);
            for delivery in &trace.deliveries {
                assert!(
                    delivery.spent() <= budget,
                    "delivery to {} spent {} of budget {budget}",
                    delivery.router,
                    delivery.spent()
                );
            }
            let max_spent = trace.deliveries.iter().map(Delivery::spent).max().unwrap();
            assert_eq!(
                max_spent, budget,
                "no delivery from {source} exhausted the budget"
            );
            deliveries += trace.deliveries.len();
        }
    }
    pass(&format!(
        "broadcast budget: {deliveries} deliveries within budget, equality at the farthest router"
    ));
}

/// Table costs equal the independent all-pairs oracle on the full corpus,
/// and following next hops always terminates within n - 1 steps.
#[test]
fn table_costs_match_oracle_and_walks_terminate() {
    let corpus = common::corpus(CORPUS_SIZE);
    let mut pairs = 0usize;
    for topo in &corpus {
        let state = compute_dvr(topo);
        let matrix = apsp_oracle(topo);
        for i in topo.routers() {
            for j in topo.routers() {
                assert_eq!(
                    Some(state.route_cost(i, j).unwrap()),
                    matrix.cost(i, j),
                    "cost {i} -> {j} disagrees with the oracle"
                );
                if i != j {
                    let mut at = i;
                    let mut steps = 0;
                    while at != j {
                        at = state.next_hop(at, j).unwrap();
                        steps += 1;
                        assert!(steps < topo.len(), "walk {i} -> {j} loops");
                    }
                }
                pairs += 1;
            }
        }
    }
    pass(&format!(
        "oracle equivalence: {pairs} pairs match, all walks loop-free"
    ));
}

/// Every router collects the same pseudo-diameter announcements and would
/// sort them into the identical core table.
#[test]
fn core_tables_are_unanimous_across_routers() {
    let corpus = common::corpus(CORPUS_SIZE);
    for topo in &corpus {
        let state = compute_dvr(topo);
        let views = collect_pds_per_router(&state).unwrap();
        let tables: Vec<_> = views.values().map(build_core_table).collect();
        for table in &tables[1..] {
            assert_eq!(table, &tables[0], "a router derived a different core table");
        }
        assert_eq!(tables[0].len(), topo.len());
    }
    pass(&format!(
        "unanimity: identical core tables at every router across {CORPUS_SIZE} graphs"
    ));
}

/// For every sender on the corpus, delivery through the chosen core to a
/// full-membership group never exceeds the sender's estimate.
#[test]
fn chosen_core_estimate_bounds_realized_delay() {
    let corpus = common::corpus(CORPUS_SIZE);
    let mut checked = 0usize;
    for topo in &corpus {
        let state = compute_dvr(topo);
        let table = build_core_table(&pds_from_tables(&state));
        let candidates = select_candidates(&table, 3.min(topo.len())).unwrap();
        let group = MulticastGroup::new("all", topo.routers().collect()).unwrap();
        let trees: Vec<_> = candidates
            .cores()
            .iter()
            .map(|core| (*core, build_shared_tree(&state, *core, &group).unwrap()))
            .collect();
        for sender in topo.routers() {
            let (core, estimate) = select_core(&state, &table, &candidates, sender).unwrap();
            let tree = &trees.iter().find(|(c, _)| *c == core).unwrap().1;
            let delays = deliver(&state, tree, sender).unwrap();
            let worst = delays.values().max().unwrap();
            assert!(
                *worst <= estimate.ed,
                "sender {sender}: delay {worst} exceeds estimate {}",
                estimate.ed
            );
            checked += 1;
        }
    }
    pass(&format!(
        "estimate soundness: max delay within the estimate for {checked} senders"
    ));
}

/// Core selection itself (pseudo-diameter extraction plus the sort), given
/// converged tables for 1000 routers, completes in well under five seconds.
#[test]
fn core_selection_scales_to_a_thousand_routers() {
    let mut rng = StdRng::seed_from_u64(0xB16);
    let topo = common::random_connected_topology(&mut rng, 1000, 100);
    let state = compute_dvr(&topo);

    let started = Instant::now();
    let pds = pds_from_tables(&state);
    let table = build_core_table(&pds);
    let candidates = select_candidates(&table, 3).unwrap();
    let elapsed = started.elapsed();

    assert_eq!(table.len(), 1000);
    assert_eq!(candidates.len(), 3);
    assert!(
        elapsed < Duration::from_secs(5),
        "selection took {elapsed:?}"
    );
    pass(&format!(
        "scaling: selection over 1000 converged tables in {elapsed:?}"
    ));
}
