//! Scenario runner over topology files: converged routing tables,
//! pseudo-diameters, core selection, per-sender core choice, shared trees,
//! budgeted broadcasts, and a self-check against the built-in example
//! network.
//!
//! Output is deterministic TSV on stdout (JSON with `--json`); diagnostics
//! go to stderr. Exit codes: 1 usage error, 2 topology error, 3 check
//! mismatch.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use corecast::cores::{broadcast_pds, build_core_table, collect_pds_per_router, select_candidates};
use corecast::dvr::{apsp_oracle, compute_dvr, RoutingState};
use corecast::fixture;
use corecast::locality::{ed, select_core};
use corecast::pseudo::{pd_broadcast, pseudo_diameter};
use corecast::topology::{Cost, RouterId, Topology};
use corecast::tree::{build_shared_tree, deliver, dot_graph, MulticastGroup};

#[derive(Parser)]
#[command(name = "corecast", version, about = "Core selection and shared-tree multicast simulator")]
struct Cli {
    /// Emit JSON instead of TSV
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(id = "topo_source", required = true, multiple = false)]
struct Source {
    /// Use the built-in 8-router example network
    #[arg(long)]
    fixture: bool,

    /// Load the network from a topology file
    #[arg(long, value_name = "FILE")]
    topology: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print every router's converged routing table
    Dvr {
        #[command(flatten)]
        source: Source,
    },
    /// Print every router's pseudo-diameter
    Pd {
        #[command(flatten)]
        source: Source,
    },
    /// Print the sorted core table and the candidate core set
    Cores {
        #[command(flatten)]
        source: Source,
        /// Number of candidate cores to select
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Score every candidate core for a sender and pick the best
    Select {
        #[command(flatten)]
        source: Source,
        /// Sending router (id or label)
        #[arg(long)]
        sender: String,
        /// Number of candidate cores to select
        #[arg(long, default_value_t = 3)]
        m: usize,
    },
    /// Build the shared tree for a group rooted at a core
    Tree {
        #[command(flatten)]
        source: Source,
        /// Core router (id or label)
        #[arg(long)]
        core: String,
        /// Group members, comma separated (ids or labels)
        #[arg(long, value_delimiter = ',', required = true)]
        group: Vec<String>,
        /// Also print per-member delays for this sender
        #[arg(long)]
        sender: Option<String>,
        /// Emit a DOT graph with the tree highlighted instead of TSV
        #[arg(long, conflicts_with = "json")]
        dot: bool,
    },
    /// Simulate the budgeted broadcast from one router
    Broadcast {
        #[command(flatten)]
        source: Source,
        /// Broadcasting router (id or label)
        #[arg(long = "source", value_name = "ROUTER")]
        from: String,
    },
    /// Verify this build against known-good results
    Check {
        #[command(flatten)]
        source: Source,
    },
}

enum Failure {
    Usage(String),
    Topology(String),
    Mismatch(usize),
}

impl Failure {
    fn report(&self) -> ExitCode {
        match self {
            Failure::Usage(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(1)
            }
            Failure::Topology(msg) => {
                eprintln!("error: {msg}");
                ExitCode::from(2)
            }
            Failure::Mismatch(count) => {
                eprintln!("error: {count} check(s) failed");
                ExitCode::from(3)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help and version are not errors
            if matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = err.print();
                return ExitCode::SUCCESS;
            }
            let _ = err.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => failure.report(),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Dvr { source } => {
            let state = load_state(&source)?;
            cmd_dvr(&state, cli.json);
            Ok(())
        }
        Command::Pd { source } => {
            let state = load_state(&source)?;
            cmd_pd(&state, cli.json);
            Ok(())
        }
        Command::Cores { source, m } => {
            let state = load_state(&source)?;
            cmd_cores(&state, m, cli.json)
        }
        Command::Select { source, sender, m } => {
            let state = load_state(&source)?;
            cmd_select(&state, &sender, m, cli.json)
        }
        Command::Tree {
            source,
            core,
            group,
            sender,
            dot,
        } => {
            let state = load_state(&source)?;
            cmd_tree(&state, &core, &group, sender.as_deref(), dot, cli.json)
        }
        Command::Broadcast { source, from } => {
            let state = load_state(&source)?;
            cmd_broadcast(&state, &from, cli.json)
        }
        Command::Check { source } => {
            let fixture_mode = source.fixture;
            let state = load_state(&source)?;
            cmd_check(&state, fixture_mode, cli.json)
        }
    }
}

fn load_state(source: &Source) -> Result<RoutingState, Failure> {
    let topology = if source.fixture {
        fixture::topology()
    } else {
        let path = source.topology.as_ref().expect("clap enforces one source");
        let text = fs::read_to_string(path)
            .map_err(|err| Failure::Topology(format!("{}: {err}", path.display())))?;
        Topology::parse(&text)
            .map_err(|err| Failure::Topology(format!("{}: {err}", path.display())))?
    };
    Ok(compute_dvr(&topology))
}

fn resolve(topology: &Topology, token: &str) -> Result<RouterId, Failure> {
    topology
        .resolve(token)
        .ok_or_else(|| Failure::Usage(format!("unknown router {token:?}")))
}

fn name(topology: &Topology, router: RouterId) -> String {
    topology.display_name(router)
}

fn cmd_dvr(state: &RoutingState, as_json: bool) {
    let topo = state.topology();
    if as_json {
        let tables: Vec<Value> = state
            .tables()
            .map(|table| {
                let entries: Vec<Value> = table
                    .entries()
                    .iter()
                    .map(|e| {
                        json!({
                            "dest": name(topo, e.dest),
                            "next": name(topo, e.next),
                            "cost": e.cost,
                        })
                    })
                    .collect();
                json!({ "owner": name(topo, table.owner()), "entries": entries })
            })
            .collect();
        print_json(&json!({ "tables": tables }));
    } else {
        let mut out = String::new();
        for table in state.tables() {
            for entry in table.entries() {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    name(topo, table.owner()),
                    name(topo, entry.dest),
                    name(topo, entry.next),
                    entry.cost
                );
            }
        }
        emit(&out);
    }
}

fn cmd_pd(state: &RoutingState, as_json: bool) {
    let topo = state.topology();
    let pds: Vec<(RouterId, Cost)> = state
        .tables()
        .map(|table| {
            let pd = pseudo_diameter(table);
            (pd.router, pd.value)
        })
        .collect();
    if as_json {
        let rows: Vec<Value> = pds
            .iter()
            .map(|(router, pd)| json!({ "router": name(topo, *router), "pd": pd }))
            .collect();
        print_json(&json!({ "pseudo_diameters": rows }));
    } else {
        let mut out = String::new();
        for (router, pd) in pds {
            let _ = writeln!(out, "{}\t{pd}", name(topo, router));
        }
        emit(&out);
    }
}

fn core_table_for(state: &RoutingState) -> corecast::cores::CoreTable {
    build_core_table(&broadcast_pds(state).expect("routers exist in their own state"))
}

fn cmd_cores(state: &RoutingState, m: usize, as_json: bool) -> Result<(), Failure> {
    let topo = state.topology();
    let table = core_table_for(state);
    let candidates =
        select_candidates(&table, m).map_err(|err| Failure::Usage(err.to_string()))?;
    if as_json {
        let rows: Vec<Value> = table
            .rows()
            .iter()
            .map(|row| {
                json!({
                    "router": name(topo, row.router),
                    "pd": row.pd,
                    "candidate": candidates.contains(row.router),
                })
            })
            .collect();
        let chosen: Vec<String> = candidates.cores().iter().map(|c| name(topo, *c)).collect();
        print_json(&json!({ "table": rows, "candidates": chosen }));
    } else {
        let mut out = String::new();
        for row in table.rows() {
            let mark = if candidates.contains(row.router) { "*" } else { "-" };
            let _ = writeln!(out, "{}\t{}\t{mark}", name(topo, row.router), row.pd);
        }
        emit(&out);
    }
    Ok(())
}

fn cmd_select(state: &RoutingState, sender: &str, m: usize, as_json: bool) -> Result<(), Failure> {
    let topo = state.topology();
    let sender = resolve(topo, sender)?;
    let table = core_table_for(state);
    let candidates =
        select_candidates(&table, m).map_err(|err| Failure::Usage(err.to_string()))?;
    let (chosen, chosen_estimate) = select_core(state, &table, &candidates, sender)
        .map_err(|err| Failure::Usage(err.to_string()))?;

    let estimates: Vec<_> = candidates
        .cores()
        .iter()
        .map(|core| ed(state, &table, sender, *core).expect("candidates are known routers"))
        .collect();

    if as_json {
        let rows: Vec<Value> = estimates
            .iter()
            .map(|e| {
                json!({
                    "core": name(topo, e.core),
                    "pd": e.core_pd,
                    "cost": e.cost_to_core,
                    "ed": e.ed,
                    "chosen": e.core == chosen,
                })
            })
            .collect();
        print_json(&json!({
            "sender": name(topo, sender),
            "candidates": rows,
            "chosen": name(topo, chosen),
            "ed": chosen_estimate.ed,
        }));
    } else {
        let mut out = String::new();
        for e in &estimates {
            let mark = if e.core == chosen { "*" } else { "-" };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{mark}",
                name(topo, e.core),
                e.core_pd,
                e.cost_to_core,
                e.ed
            );
        }
        emit(&out);
    }
    Ok(())
}

fn cmd_tree(
    state: &RoutingState,
    core: &str,
    group_tokens: &[String],
    sender: Option<&str>,
    dot: bool,
    as_json: bool,
) -> Result<(), Failure> {
    let topo = state.topology();
    let core = resolve(topo, core)?;
    let mut members = BTreeSet::new();
    for token in group_tokens {
        members.insert(resolve(topo, token)?);
    }
    let group =
        MulticastGroup::new("cli", members).map_err(|err| Failure::Usage(err.to_string()))?;
    let tree = build_shared_tree(state, core, &group)
        .map_err(|err| Failure::Usage(err.to_string()))?;

    if dot {
        emit(&dot_graph(topo, Some(&tree)));
        return Ok(());
    }

    let delays = match sender {
        Some(token) => {
            let sender = resolve(topo, token)?;
            Some((sender, deliver(state, &tree, sender).expect("sender was resolved")))
        }
        None => None,
    };

    if as_json {
        let edges: Vec<Value> = tree
            .edges()
            .map(|(child, parent, cost)| {
                json!({
                    "child": name(topo, child),
                    "parent": name(topo, parent),
                    "cost": cost,
                })
            })
            .collect();
        let mut doc = json!({
            "core": name(topo, tree.core()),
            "members": tree.members().iter().map(|m| name(topo, *m)).collect::<Vec<_>>(),
            "edges": edges,
        });
        if let Some((sender, delays)) = &delays {
            let rows: Vec<Value> = delays
                .iter()
                .map(|(member, delay)| json!({ "member": name(topo, *member), "delay": delay }))
                .collect();
            doc["sender"] = json!(name(topo, *sender));
            doc["delays"] = json!(rows);
        }
        print_json(&doc);
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "core\t{}", name(topo, tree.core()));
        for (child, parent, cost) in tree.edges() {
            let _ = writeln!(
                out,
                "edge\t{}\t{}\t{cost}",
                name(topo, child),
                name(topo, parent)
            );
        }
        if let Some((_, delays)) = &delays {
            for (member, delay) in delays {
                let _ = writeln!(out, "delay\t{}\t{delay}", name(topo, *member));
            }
        }
        emit(&out);
    }
    Ok(())
}

fn cmd_broadcast(state: &RoutingState, from: &str, as_json: bool) -> Result<(), Failure> {
    let topo = state.topology();
    let from = resolve(topo, from)?;
    let trace = pd_broadcast(state, from, &[]).expect("source was resolved");

    let mut deliveries: Vec<_> = trace.deliveries.iter().collect();
    deliveries.sort_by_key(|d| d.router);

    if as_json {
        let rows: Vec<Value> = deliveries
            .iter()
            .map(|d| {
                json!({
                    "router": name(topo, d.router),
                    "path": d.path.iter().map(|r| name(topo, *r)).collect::<Vec<_>>(),
                    "spent": d.spent(),
                    "remaining": d.remaining,
                })
            })
            .collect();
        print_json(&json!({
            "source": name(topo, trace.source),
            "budget": trace.budget,
            "deliveries": rows,
        }));
    } else {
        let mut out = String::new();
        for d in deliveries {
            let path: Vec<String> = d.path.iter().map(|r| name(topo, *r)).collect();
            let _ = writeln!(out, "{}\t{}\t{}", name(topo, d.router), path.join("-"), d.spent());
        }
        emit(&out);
    }
    Ok(())
}

struct Check {
    name: &'static str,
    detail: Option<String>,
}

impl Check {
    fn run(name: &'static str, result: Result<(), String>) -> Check {
        Check {
            name,
            detail: result.err(),
        }
    }

    fn ok(&self) -> bool {
        self.detail.is_none()
    }
}

fn cmd_check(state: &RoutingState, fixture_mode: bool, as_json: bool) -> Result<(), Failure> {
    let checks = if fixture_mode {
        fixture_checks(state)
    } else {
        generic_checks(state)
    };

    if as_json {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "ok": c.ok(),
                    "detail": c.detail.clone().unwrap_or_default(),
                })
            })
            .collect();
        print_json(&json!({
            "checks": rows,
            "ok": checks.iter().all(Check::ok),
        }));
    } else {
        let mut out = String::new();
        for check in &checks {
            match &check.detail {
                None => {
                    let _ = writeln!(out, "ok\t{}", check.name);
                }
                Some(detail) => {
                    let _ = writeln!(out, "FAIL\t{}\t{detail}", check.name);
                }
            }
        }
        emit(&out);
    }

    let failed = checks.iter().filter(|c| !c.ok()).count();
    if failed > 0 {
        return Err(Failure::Mismatch(failed));
    }
    Ok(())
}

/// Golden reproduction on the built-in example network.
fn fixture_checks(state: &RoutingState) -> Vec<Check> {
    let topo = state.topology();
    let matrix = apsp_oracle(topo);

    let routing_tables = || -> Result<(), String> {
        for (owner, dest, reference_next, reference_cost) in fixture::reference_routes() {
            let entry = state
                .table(owner)
                .and_then(|t| t.entry(dest))
                .ok_or_else(|| format!("missing entry {owner} -> {dest}"))?;
            if entry.cost != reference_cost {
                return Err(format!(
                    "cost {} -> {}: got {}, want {}",
                    name(topo, owner),
                    name(topo, dest),
                    entry.cost,
                    reference_cost
                ));
            }
            if let Some(next) = reference_next {
                if entry.next != next {
                    return Err(format!(
                        "next hop {} -> {}: got {}, want {}",
                        name(topo, owner),
                        name(topo, dest),
                        name(topo, entry.next),
                        name(topo, next)
                    ));
                }
            } else if !matrix
                .equal_cost_first_hops(topo, owner, dest)
                .contains(&entry.next)
            {
                return Err(format!(
                    "next hop {} -> {} is not on a shortest path",
                    name(topo, owner),
                    name(topo, dest)
                ));
            }
        }
        Ok(())
    };

    let pds = || -> Result<(), String> {
        let got: Vec<(RouterId, Cost)> = state
            .tables()
            .map(|t| {
                let pd = pseudo_diameter(t);
                (pd.router, pd.value)
            })
            .collect();
        let want: Vec<(RouterId, Cost)> = fixture::reference_pds().into_iter().collect();
        if got != want {
            return Err(format!("got {got:?}"));
        }
        Ok(())
    };

    let diameter = || -> Result<(), String> {
        let got = topo.diameter();
        if got != fixture::DIAMETER {
            return Err(format!("got {got}, want {}", fixture::DIAMETER));
        }
        Ok(())
    };

    let core_order = || -> Result<(), String> {
        let table = core_table_for(state);
        let got: Vec<(RouterId, Cost)> = table.rows().iter().map(|r| (r.router, r.pd)).collect();
        if got != fixture::reference_core_order() {
            return Err(format!("got {got:?}"));
        }
        Ok(())
    };

    let candidates = || -> Result<(), String> {
        let table = core_table_for(state);
        let set = select_candidates(&table, 3).map_err(|e| e.to_string())?;
        if set.cores() != [fixture::E, fixture::C, fixture::H] {
            let names: Vec<String> = set.cores().iter().map(|c| name(topo, *c)).collect();
            return Err(format!("got {names:?}"));
        }
        Ok(())
    };

    let sender_choice = || -> Result<(), String> {
        use fixture::{A, C, E, H};
        let table = core_table_for(state);
        let set = select_candidates(&table, 3).map_err(|e| e.to_string())?;
        for (core, want) in [(E, 120), (C, 110), (H, 160)] {
            let got = ed(state, &table, A, core).map_err(|e| e.to_string())?.ed;
            if got != want {
                return Err(format!(
                    "estimate A -> {}: got {got}, want {want}",
                    name(topo, core)
                ));
            }
        }
        let (core, estimate) = select_core(state, &table, &set, A).map_err(|e| e.to_string())?;
        if core != C || estimate.ed != 110 {
            return Err(format!(
                "sender A chose {} with estimate {}",
                name(topo, core),
                estimate.ed
            ));
        }
        Ok(())
    };

    vec![
        Check::run("routing tables", routing_tables()),
        Check::run("pseudo-diameters", pds()),
        Check::run("network diameter", diameter()),
        Check::run("core table order", core_order()),
        Check::run("candidate set (m = 3)", candidates()),
        Check::run("sender A core choice", sender_choice()),
    ]
}

/// Self-consistency suite for user-supplied topologies.
fn generic_checks(state: &RoutingState) -> Vec<Check> {
    let topo = state.topology();
    let matrix = apsp_oracle(topo);

    let oracle = || -> Result<(), String> {
        for i in topo.routers() {
            for j in topo.routers() {
                let table_cost = state.route_cost(i, j).map_err(|e| e.to_string())?;
                if Some(table_cost) != matrix.cost(i, j) {
                    return Err(format!(
                        "cost {} -> {} disagrees with the oracle",
                        name(topo, i),
                        name(topo, j)
                    ));
                }
            }
        }
        Ok(())
    };

    let walks = || -> Result<(), String> {
        for i in topo.routers() {
            for j in topo.routers() {
                if i == j {
                    continue;
                }
                let mut at = i;
                let mut steps = 0;
                while at != j {
                    at = state.next_hop(at, j).map_err(|e| e.to_string())?;
                    steps += 1;
                    if steps > topo.len() - 1 {
                        return Err(format!(
                            "walk {} -> {} does not terminate",
                            name(topo, i),
                            name(topo, j)
                        ));
                    }
                }
            }
        }
        Ok(())
    };

    let coverage = || -> Result<(), String> {
        let everyone: BTreeSet<RouterId> = topo.routers().collect();
        for source in topo.routers() {
            let trace = pd_broadcast(state, source, &[]).map_err(|e| e.to_string())?;
            let seen: BTreeSet<RouterId> = trace.deliveries.iter().map(|d| d.router).collect();
            if trace.deliveries.len() != topo.len() || seen != everyone {
                return Err(format!(
                    "broadcast from {} delivered {} of {} routers",
                    name(topo, source),
                    seen.len(),
                    topo.len()
                ));
            }
        }
        Ok(())
    };

    let budget = || -> Result<(), String> {
        for source in topo.routers() {
            let trace = pd_broadcast(state, source, &[]).map_err(|e| e.to_string())?;
            let mut max_spent = 0;
            for delivery in &trace.deliveries {
                let spent = delivery.spent();
                if spent > trace.budget {
                    return Err(format!(
                        "delivery to {} spent {spent} of budget {}",
                        name(topo, delivery.router),
                        trace.budget
                    ));
                }
                max_spent = max_spent.max(spent);
            }
            if max_spent != trace.budget {
                return Err(format!(
                    "no delivery from {} exhausted the budget",
                    name(topo, source)
                ));
            }
        }
        Ok(())
    };

    let unanimity = || -> Result<(), String> {
        let views = collect_pds_per_router(state).map_err(|e| e.to_string())?;
        let tables: Vec<_> = views.values().map(build_core_table).collect();
        for table in &tables[1..] {
            if table != &tables[0] {
                return Err("routers derived different core tables".to_string());
            }
        }
        Ok(())
    };

    let tree_soundness = || -> Result<(), String> {
        let table = core_table_for(state);
        let set = select_candidates(&table, 1).map_err(|e| e.to_string())?;
        let core = set.cores()[0];
        let group =
            MulticastGroup::new("check", topo.routers().collect()).map_err(|e| e.to_string())?;
        let tree = build_shared_tree(state, core, &group).map_err(|e| e.to_string())?;
        for member in group.members() {
            if tree.cost_to_core(*member) != matrix.cost(*member, core) {
                return Err(format!(
                    "branch through {} is not a shortest path",
                    name(topo, *member)
                ));
            }
        }
        for sender in topo.routers() {
            let estimate = ed(state, &table, sender, core).map_err(|e| e.to_string())?;
            let delays = deliver(state, &tree, sender).map_err(|e| e.to_string())?;
            let worst = delays.values().max().expect("group is nonempty");
            if *worst > estimate.ed {
                return Err(format!(
                    "delay {worst} from {} exceeds estimate {}",
                    name(topo, sender),
                    estimate.ed
                ));
            }
        }
        Ok(())
    };

    vec![
        Check::run("tables match oracle", oracle()),
        Check::run("next-hop walks terminate", walks()),
        Check::run("broadcast coverage", coverage()),
        Check::run("broadcast budget bound", budget()),
        Check::run("unanimous core tables", unanimity()),
        Check::run("shared-tree soundness", tree_soundness()),
    ]
}

fn print_json(value: &Value) {
    emit(&format!(
        "{}\n",
        serde_json::to_string_pretty(value).expect("valid JSON")
    ));
}

/// Writes to stdout, treating a closed pipe as a normal early exit so the
/// output composes with tools like `head`.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(err) = out.write_all(text.as_bytes()) {
        if err.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {err}");
        std::process::exit(1);
    }
}
