//! Duty-network pairing generation.
//!
//! Legal duties are enumerated first by chaining flights with legal sit
//! times. Duties are then linked by rest arcs into a time-ordered DAG, and
//! every base-to-base path within the pairing limits becomes a pairing.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::{Cents, Duty, FlightId, Instance, Minutes, Pairing};

/// Enumerates every legal duty of the instance.
///
/// Output is sorted by first flight id, then by length, then
/// lexicographically by flight ids.
pub fn enumerate_duties(inst: &Instance) -> Vec<Duty> {
    let schedule = &inst.flights;
    let rules = &inst.rules;

    // connections[f] = flights that may follow f inside a duty
    let mut connections: Vec<Vec<FlightId>> = vec![Vec::new(); schedule.len()];
    for a in schedule {
        for b in schedule {
            let sit = b.departure - a.arrival;
            if a.destination == b.origin && sit >= rules.min_sit && sit <= rules.max_sit {
                connections[a.id].push(b.id);
            }
        }
    }

    let mut duties = Vec::new();
    let mut path = Vec::new();
    for start in schedule {
        let report = start.departure - rules.briefing;
        extend_duty(
            inst,
            &connections,
            report,
            0,
            start.id,
            &mut path,
            &mut duties,
        );
    }
    duties.sort_by(|a: &Duty, b: &Duty| {
        (a.flights[0], a.flights.len(), &a.flights).cmp(&(
            b.flights[0],
            b.flights.len(),
            &b.flights,
        ))
    });
    duties
}

fn extend_duty(
    inst: &Instance,
    connections: &[Vec<FlightId>],
    report: Minutes,
    flying_so_far: Minutes,
    next: FlightId,
    path: &mut Vec<FlightId>,
    out: &mut Vec<Duty>,
) {
    let rules = &inst.rules;
    let flight = &inst.flights[next];
    let flying = flying_so_far + flight.block_minutes();
    let span = flight.arrival + rules.debriefing - report;
    // both measures only grow along the chain
    if flying > rules.max_duty_flying || span > rules.max_duty_span {
        return;
    }
    path.push(next);
    out.push(Duty::new(path.clone(), rules));
    for &succ in &connections[next] {
        extend_duty(inst, connections, report, flying, succ, path, out);
    }
    path.pop();
}

/// Duties linked by legal rests.
#[derive(Debug, Clone)]
pub struct ConnectionGraph {
    pub duty_nodes: Vec<Duty>,
    /// `rest_arcs[u]` lists duties that may follow duty `u`, ascending.
    pub rest_arcs: Vec<Vec<usize>>,
    /// Per instance base (same order as `Instance::bases`): duties leaving it.
    pub base_sources: Vec<Vec<usize>>,
    /// Per instance base: duties arriving at it.
    pub base_sinks: Vec<Vec<usize>>,
}

impl ConnectionGraph {
    pub fn build(inst: &Instance, duties: Vec<Duty>) -> Self {
        let schedule = &inst.flights;
        let rules = &inst.rules;

        let mut by_origin: HashMap<&str, Vec<(Minutes, usize)>> = HashMap::new();
        for (idx, d) in duties.iter().enumerate() {
            by_origin
                .entry(d.origin(schedule))
                .or_default()
                .push((d.start(schedule), idx));
        }
        for list in by_origin.values_mut() {
            list.sort_unstable();
        }

        let rest_arcs = duties
            .iter()
            .map(|u| {
                let release = u.end(schedule);
                let (lo, hi) = (release + rules.min_rest, release + rules.max_layover);
                let mut next: Vec<usize> = match by_origin.get(u.destination(schedule)) {
                    Some(list) => {
                        let from = list.partition_point(|&(t, _)| t < lo);
                        let to = list.partition_point(|&(t, _)| t <= hi);
                        list[from..to].iter().map(|&(_, v)| v).collect()
                    }
                    None => Vec::new(),
                };
                next.sort_unstable();
                next
            })
            .collect();

        let base_sources = inst
            .bases
            .iter()
            .map(|b| {
                (0..duties.len())
                    .filter(|&i| duties[i].origin(schedule) == b)
                    .collect()
            })
            .collect();
        let base_sinks = inst
            .bases
            .iter()
            .map(|b| {
                (0..duties.len())
                    .filter(|&i| duties[i].destination(schedule) == b)
                    .collect()
            })
            .collect();

        ConnectionGraph {
            duty_nodes: duties,
            rest_arcs,
            base_sources,
            base_sinks,
        }
    }

    /// Builds the graph from scratch for `inst`.
    pub fn for_instance(inst: &Instance) -> Self {
        Self::build(inst, enumerate_duties(inst))
    }
}

/// A pairing found by the search, before deduplication and id assignment.
#[derive(Debug, Clone)]
struct Candidate {
    base: usize,
    flights: Vec<FlightId>,
    /// Number of flights in each duty.
    split: Vec<usize>,
    duty_ids: Vec<usize>,
    cost: Cents,
}

/// Enumerates all legal pairings and fails if any flight stays uncovered.
pub fn enumerate_pairings(
    inst: &Instance,
    graph: &ConnectionGraph,
    workers: Option<usize>,
) -> Result<AllPairs> {
    let all = enumerate_pairings_lenient(inst, graph, workers)?;
    all.ensure_coverable()?;
    Ok(all)
}

/// Enumerates all legal pairings without insisting on full coverage; the
/// caller can inspect [`AllPairs::uncoverable`].
///
/// The result is identical for every worker count.
pub fn enumerate_pairings_lenient(
    inst: &Instance,
    graph: &ConnectionGraph,
    workers: Option<usize>,
) -> Result<AllPairs> {
    let roots: Vec<(usize, usize)> = graph
        .base_sources
        .iter()
        .enumerate()
        .flat_map(|(b, srcs)| srcs.iter().map(move |&s| (b, s)))
        .collect();

    let search = || -> Vec<Candidate> {
        roots
            .par_iter()
            .flat_map_iter(|&(base, source)| search_from(inst, graph, base, source))
            .collect()
    };
    let mut candidates = match workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(search),
        None => search(),
    };

    // Identical flight sequences collapse to the cheapest construction; on
    // equal cost the canonically smallest duty split wins.
    candidates.sort_by(|a, b| {
        (a.base, &a.flights, a.cost, &a.split).cmp(&(b.base, &b.flights, b.cost, &b.split))
    });
    candidates.dedup_by(|later, kept| later.base == kept.base && later.flights == kept.flights);
    candidates.sort_by(|a, b| {
        (a.base, a.flights[0], a.flights.len(), &a.flights).cmp(&(
            b.base,
            b.flights[0],
            b.flights.len(),
            &b.flights,
        ))
    });

    let pairings = candidates
        .into_iter()
        .enumerate()
        .map(|(id, c)| {
            let duties = c
                .duty_ids
                .iter()
                .map(|&d| graph.duty_nodes[d].clone())
                .collect();
            Pairing::from_parts(
                id,
                inst.bases[c.base].clone(),
                duties,
                c.cost,
                inst.num_flights(),
            )
        })
        .collect();
    AllPairs::new(inst.num_flights(), pairings)
}

fn search_from(
    inst: &Instance,
    graph: &ConnectionGraph,
    base: usize,
    source: usize,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    let mut path = vec![source];
    let report = graph.duty_nodes[source].start(&inst.flights);
    walk(inst, graph, base, report, &mut path, &mut out);
    out
}

fn walk(
    inst: &Instance,
    graph: &ConnectionGraph,
    base: usize,
    report: Minutes,
    path: &mut Vec<usize>,
    out: &mut Vec<Candidate>,
) {
    let schedule = &inst.flights;
    let rules = &inst.rules;
    let last = &graph.duty_nodes[*path.last().unwrap()];
    if last.end(schedule) - report > rules.max_pairing_span() {
        return;
    }
    if last.destination(schedule) == inst.bases[base] {
        out.push(candidate(inst, graph, base, path));
    }
    if path.len() == rules.max_duties_per_pairing {
        return;
    }
    for &next in &graph.rest_arcs[*path.last().unwrap()] {
        path.push(next);
        walk(inst, graph, base, report, path, out);
        path.pop();
    }
}

fn candidate(inst: &Instance, graph: &ConnectionGraph, base: usize, path: &[usize]) -> Candidate {
    let duties: Vec<&Duty> = path.iter().map(|&d| &graph.duty_nodes[d]).collect();
    let flights = duties
        .iter()
        .flat_map(|d| d.flights.iter().copied())
        .collect();
    let split = duties.iter().map(|d| d.flights.len()).collect();
    let flying = duties.iter().map(|d| d.flying_minutes(&inst.flights)).sum();
    Candidate {
        base,
        flights,
        split,
        duty_ids: path.to_vec(),
        cost: inst.cost_model.cost(flying, duties.len()),
    }
}
