//! Test-side oracles and fixtures. Nothing here calls the library's
//! legality checker, enumerator or solvers.

#![allow(dead_code)]

/// Library-vs-oracle checks shared by the test suites and the acceptance run.
pub mod checks;

use std::collections::BTreeMap;

use crewpair::oracle::{generate_instance, SyntheticSpec};
use crewpair::{AllPairs, Cents, CostModel, Duty, Flight, FlightId, Instance, LegalityRules, Pairing};
use rand::Rng;

pub const DAY: i64 = 24 * 60;

/// Pairing cost from first principles.
pub fn oracle_cost(model: &CostModel, flying: i64, duties: usize) -> Cents {
    let d = duties as i64;
    let raw = model.per_flying_minute * flying + model.per_duty_fixed * d + model.hotel_night * (d - 1);
    raw.max(model.pairing_guarantee_minimum)
}

/// Cost of the pairing flying `flights` from `base`, split into duties of
/// the given sizes, or `None` if any rule is broken.
pub fn legal_cost(inst: &Instance, base: &str, flights: &[FlightId], split: &[usize]) -> Option<Cents> {
    let r = &inst.rules;
    let fl = |i: FlightId| &inst.flights[i];
    if flights.is_empty() || split.is_empty() || split.len() > r.max_duties_per_pairing {
        return None;
    }
    if !inst.bases.iter().any(|b| b == base) {
        return None;
    }
    if fl(flights[0]).origin != base || fl(*flights.last().unwrap()).destination != base {
        return None;
    }
    let mut duties: Vec<&[FlightId]> = Vec::new();
    let mut at = 0;
    for &n in split {
        if n == 0 || at + n > flights.len() {
            return None;
        }
        duties.push(&flights[at..at + n]);
        at += n;
    }
    if at != flights.len() {
        return None;
    }
    let report = |d: &[FlightId]| fl(d[0]).departure - r.briefing;
    let release = |d: &[FlightId]| fl(*d.last().unwrap()).arrival + r.debriefing;
    let mut flying = 0;
    for d in &duties {
        let mut block = 0;
        for (k, &f) in d.iter().enumerate() {
            block += fl(f).arrival - fl(f).departure;
            if k > 0 {
                let prev = fl(d[k - 1]);
                let sit = fl(f).departure - prev.arrival;
                if prev.destination != fl(f).origin || sit < r.min_sit || sit > r.max_sit {
                    return None;
                }
            }
        }
        if block > r.max_duty_flying || release(d) - report(d) > r.max_duty_span {
            return None;
        }
        flying += block;
    }
    for w in duties.windows(2) {
        let (a, b) = (w[0], w[1]);
        let rest = report(b) - release(a);
        if fl(*a.last().unwrap()).destination != fl(b[0]).origin || rest < r.min_rest || rest > r.max_layover {
            return None;
        }
    }
    if release(duties.last().unwrap()) - report(duties[0]) > r.max_pairing_days as i64 * DAY {
        return None;
    }
    Some(oracle_cost(&inst.cost_model, flying, duties.len()))
}

pub type PairingKey = (String, Vec<FlightId>);

/// Every legal pairing keyed by (base, flight sequence). Where several duty
/// splits of one sequence are legal, the cheapest is kept, ties going to
/// the lexicographically smallest split.
pub fn brute_force_pairings(inst: &Instance) -> BTreeMap<PairingKey, (Cents, Vec<usize>)> {
    let mut out = BTreeMap::new();
    for base in &inst.bases {
        for f in 0..inst.flights.len() {
            if inst.flights[f].origin == *base {
                extend(inst, base, &mut vec![f], &mut vec![1], &mut out);
            }
        }
    }
    out
}

fn extend(
    inst: &Instance,
    base: &str,
    seq: &mut Vec<FlightId>,
    split: &mut Vec<usize>,
    out: &mut BTreeMap<PairingKey, (Cents, Vec<usize>)>,
) {
    // duty count and overall span only grow as the sequence is extended
    let r = &inst.rules;
    let first = &inst.flights[seq[0]];
    let last = &inst.flights[*seq.last().unwrap()];
    if split.len() > r.max_duties_per_pairing
        || last.arrival + r.debriefing - (first.departure - r.briefing) > r.max_pairing_days as i64 * DAY
    {
        return;
    }
    if last.destination == base {
        if let Some(cost) = legal_cost(inst, base, seq, split) {
            let candidate = (cost, split.clone());
            out.entry((base.to_string(), seq.clone()))
                .and_modify(|e: &mut (Cents, Vec<usize>)| {
                    if candidate < *e {
                        *e = candidate.clone();
                    }
                })
                .or_insert(candidate);
        }
    }
    for g in 0..inst.flights.len() {
        let next = &inst.flights[g];
        if next.origin != last.destination || next.departure <= last.arrival {
            continue;
        }
        seq.push(g);
        *split.last_mut().unwrap() += 1;
        extend(inst, base, seq, split, out);
        *split.last_mut().unwrap() -= 1;
        split.push(1);
        extend(inst, base, seq, split, out);
        split.pop();
        seq.pop();
    }
}

/// The library's pairings in the same keyed form.
pub fn keyed(all: &AllPairs) -> BTreeMap<PairingKey, (Cents, Vec<usize>)> {
    all.pairings()
        .iter()
        .map(|p| {
            (
                (p.base.clone(), p.flights().collect()),
                (p.cost, p.duties.iter().map(|d| d.flights.len()).collect()),
            )
        })
        .collect()
}

/// Penalized objective of a selection, counted directly from coverings.
pub fn objective(all: &AllPairs, penalty: Cents, chosen: &[usize]) -> Option<Cents> {
    let mut counts = vec![0i64; all.num_flights()];
    let mut cost = 0;
    for &p in chosen {
        cost += all.cost(p);
        for f in all.get(p).flights() {
            counts[f] += 1;
        }
    }
    if counts.iter().any(|&c| c == 0) {
        return None;
    }
    Some(cost + penalty * counts.iter().map(|&c| c - 1).sum::<i64>())
}

/// Minimum objective over all 2^P subsets of pairings.
pub fn subset_enumeration_optimum(all: &AllPairs, penalty: Cents) -> Option<Cents> {
    assert!(all.len() <= 22, "subset enumeration is limited to 22 pairings");
    let mut best: Option<Cents> = None;
    let mut chosen = Vec::with_capacity(all.len());
    for mask in 0u32..(1u32 << all.len()) {
        chosen.clear();
        chosen.extend((0..all.len()).filter(|&j| mask >> j & 1 == 1));
        if let Some(v) = objective(all, penalty, &chosen) {
            best = Some(best.map_or(v, |b: Cents| b.min(v)));
        }
    }
    best
}

/// Minimum objective by dynamic programming over covered-flight sets. Uses
/// objective = sum (c_j + p |S_j|) - p F, valid for any cover.
pub fn flight_mask_optimum(all: &AllPairs, penalty: Cents) -> Option<Cents> {
    let n = all.num_flights();
    assert!(n <= 20, "flight-mask DP is limited to 20 flights");
    let full = (1usize << n) - 1;
    let masks: Vec<(usize, Cents)> = all
        .pairings()
        .iter()
        .map(|p| {
            let m = p.flights().fold(0usize, |m, f| m | 1 << f);
            (m, p.cost + penalty * p.num_flights() as Cents)
        })
        .collect();
    let mut dp = vec![Cents::MAX; full + 1];
    dp[0] = 0;
    for mask in 0..=full {
        if dp[mask] == Cents::MAX {
            continue;
        }
        for &(m, w) in &masks {
            let next = mask | m;
            if next != mask && dp[mask] + w < dp[next] {
                dp[next] = dp[mask] + w;
            }
        }
    }
    (dp[full] != Cents::MAX).then(|| dp[full] - penalty * n as Cents)
}

/// Exhaustive optimum: literal subset enumeration when the pairing count
/// allows, the flight-mask DP otherwise.
pub fn exhaustive_optimum(all: &AllPairs, penalty: Cents) -> Option<Cents> {
    if all.len() <= 16 {
        subset_enumeration_optimum(all, penalty)
    } else {
        flight_mask_optimum(all, penalty)
    }
}

/// Rules drawn around the defaults, sometimes tight enough to strand flights.
pub fn random_rules<R: Rng>(rng: &mut R) -> LegalityRules {
    let min_sit = 5 * rng.gen_range(4..=12);
    let min_rest = 60 * rng.gen_range(6..=11);
    LegalityRules {
        min_sit,
        max_sit: min_sit + 5 * rng.gen_range(6..=48),
        max_duty_flying: 60 * rng.gen_range(3..=9),
        max_duty_span: 60 * rng.gen_range(6..=14),
        min_rest,
        max_layover: min_rest + 60 * rng.gen_range(2..=30),
        max_duties_per_pairing: rng.gen_range(1..=4),
        max_pairing_days: rng.gen_range(1..=4),
        briefing: 5 * rng.gen_range(0..=12),
        debriefing: 5 * rng.gen_range(0..=6),
    }
}

pub fn random_cost_model<R: Rng>(rng: &mut R) -> CostModel {
    CostModel {
        per_flying_minute: rng.gen_range(50..=400),
        per_duty_fixed: 100 * rng.gen_range(0..=300),
        hotel_night: 100 * rng.gen_range(0..=200),
        pairing_guarantee_minimum: 100 * rng.gen_range(0..=800),
    }
}

/// Flights with random endpoints and times over two days; many will not
/// fit into any pairing.
pub fn random_schedule<R: Rng>(rng: &mut R, num_flights: usize, airports: usize) -> Vec<Flight> {
    let code = |i: usize| format!("A{i}");
    let mut flights: Vec<Flight> = (0..num_flights)
        .map(|_| {
            let o = rng.gen_range(0..airports);
            let mut d = rng.gen_range(0..airports - 1);
            if d >= o {
                d += 1;
            }
            let dep = 5 * rng.gen_range(0..(2 * DAY / 5));
            Flight {
                id: 0,
                origin: code(o),
                destination: code(d),
                departure: dep,
                arrival: dep + 5 * rng.gen_range(6..=48),
            }
        })
        .collect();
    flights.sort_by_key(|f| (f.departure, f.arrival));
    for (i, f) in flights.iter_mut().enumerate() {
        f.id = i;
    }
    flights
}

/// A random small instance: either a synthetic schedule or fully random
/// flights, each under random rules and costs.
pub fn random_small_instance<R: Rng>(rng: &mut R, max_flights: usize) -> Instance {
    let rules = random_rules(rng);
    let cost_model = random_cost_model(rng);
    if rng.gen_bool(0.5) {
        let nb = rng.gen_range(1..=2);
        let spec = SyntheticSpec {
            num_flights: rng.gen_range(2 * nb..=max_flights),
            num_airports: rng.gen_range(nb.max(2)..=5),
            num_bases: nb,
            time_horizon_days: rng.gen_range(1..=3),
            hub_factor: rng.gen_range(0.0..=1.0),
            seed: rng.gen(),
            rules: rules.clone(),
            cost_model: cost_model.clone(),
        };
        if let Ok(inst) = generate_instance(&spec) {
            return inst;
        }
        let relaxed = SyntheticSpec {
            rules: LegalityRules::default(),
            ..spec
        };
        if let Ok(inst) = generate_instance(&relaxed) {
            return inst;
        }
    }
    let airports = rng.gen_range(2..=4);
    let n = rng.gen_range(1..=max_flights);
    let flights = random_schedule(rng, n, airports);
    let served = |a: &str| flights.iter().any(|f| f.origin == a || f.destination == a);
    let mut bases: Vec<String> = ["A0", "A1"].iter().filter(|a| served(a)).map(|a| a.to_string()).collect();
    if bases.is_empty() {
        bases.push(flights[0].origin.clone());
    }
    if bases.len() == 2 && rng.gen_bool(0.5) {
        bases.pop();
    }
    Instance::new(flights, bases, rules, cost_model).unwrap()
}

/// AllPairs from `(flights, cost)` specs, one duty each, based at "DAL".
pub fn toy_allpairs(num_flights: usize, specs: &[(Vec<FlightId>, Cents)]) -> AllPairs {
    let pairings = specs
        .iter()
        .enumerate()
        .map(|(id, (flights, cost))| {
            let duty = Duty {
                flights: flights.clone(),
                briefing_minutes: 0,
                debriefing_minutes: 0,
            };
            Pairing::from_parts(id, "DAL", vec![duty], *cost, num_flights)
        })
        .collect();
    AllPairs::new(num_flights, pairings).unwrap()
}

/// A random AllPairs over `num_flights` flights with random subsets as
/// pairings; singletons are appended for uncovered flights so the result is
/// always coverable.
pub fn random_coverable<R: Rng>(rng: &mut R, num_flights: usize, num_pairings: usize) -> AllPairs {
    let mut specs: Vec<(Vec<FlightId>, Cents)> = Vec::new();
    for _ in 0..num_pairings {
        let mut fl: Vec<FlightId> = (0..num_flights).filter(|_| rng.gen_bool(0.35)).collect();
        if fl.is_empty() {
            fl.push(rng.gen_range(0..num_flights));
        }
        if specs.iter().any(|(s, _)| *s == fl) {
            continue;
        }
        specs.push((fl, rng.gen_range(1..=1000)));
    }
    for f in 0..num_flights {
        if !specs.iter().any(|(s, _)| s.contains(&f)) {
            specs.push((vec![f], rng.gen_range(1..=1000)));
        }
    }
    toy_allpairs(num_flights, &specs)
}

/// The 50-flight, single-base instance used for the quality checks.
pub fn quality_instance_spec() -> SyntheticSpec {
    SyntheticSpec::new(50, 6, 1, 2)
}

/// Ten costs in cents constructed so that their mean and sample deviation
/// round to a known summary row (mean 2649823, deviation 57559, best
/// 2494649, worst 2710084).
pub const TABLE_FIXTURE: [i64; 10] = [
    2494649, 2710084, 2648573, 2660223, 2675913, 2647426, 2660641, 2680555, 2664489, 2655677,
];

/// Spreadsheet-style statistics: AVERAGE, STDEV.S, MIN, MAX in plain f64.
pub fn spreadsheet(values: &[i64]) -> (f64, f64, i64, i64) {
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt(), *values.iter().min().unwrap(), *values.iter().max().unwrap())
}
