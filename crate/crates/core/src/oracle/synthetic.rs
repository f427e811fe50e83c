//! Synthetic schedules built from legal base-anchored rotations.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::legality::check_pairing;
use crate::model::{
    CostModel, Duty, Flight, Instance, LegalityRules, Minutes, Pairing, MINUTES_PER_DAY,
};

/// Consecutive failed rotation attempts tolerated before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

const MAX_ROTATION_FLIGHTS: usize = 6;
const MAX_FLIGHTS_PER_DUTY: usize = 4;

/// Parameters of a synthetic instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub num_flights: usize,
    pub num_airports: usize,
    pub num_bases: usize,
    /// Days over which rotations may start.
    pub time_horizon_days: u32,
    /// Probability that an intermediate stop of a rotation is a crew base.
    pub hub_factor: f64,
    pub seed: u64,
    #[serde(default)]
    pub rules: LegalityRules,
    #[serde(default)]
    pub cost_model: CostModel,
}

impl SyntheticSpec {
    pub fn new(num_flights: usize, num_airports: usize, num_bases: usize, seed: u64) -> Self {
        SyntheticSpec {
            num_flights,
            num_airports,
            num_bases,
            time_horizon_days: 3,
            hub_factor: 0.2,
            seed,
            rules: LegalityRules::default(),
            cost_model: CostModel::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.num_bases == 0 {
            return bad("num_bases must be at least 1".into());
        }
        if self.num_airports < 2 || self.num_airports < self.num_bases {
            return bad("need at least 2 airports and no fewer airports than bases".into());
        }
        if self.num_flights < 2 * self.num_bases {
            return bad(format!(
                "{} flights cannot serve {} bases with round trips",
                self.num_flights, self.num_bases
            ));
        }
        if self.time_horizon_days == 0 {
            return bad("time_horizon_days must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.hub_factor) {
            return bad(format!("hub_factor {} outside [0, 1]", self.hub_factor));
        }
        self.rules.validate()?;
        self.cost_model.validate()
    }
}

/// Airport code for index `i`; bases come first.
pub fn airport_code(i: usize, num_bases: usize) -> String {
    if i < num_bases {
        format!("B{i:02}")
    } else {
        format!("S{:02}", i - num_bases)
    }
}

/// Generates an instance whose flights are the union of randomly drawn
/// rotations, each a legal pairing out of some base. Every flight is
/// therefore coverable. The output depends only on the spec.
pub fn generate_instance(spec: &SyntheticSpec) -> Result<Instance> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let bases: Vec<String> = (0..spec.num_bases)
        .map(|i| airport_code(i, spec.num_bases))
        .collect();
    let mut flights: Vec<Flight> = Vec::with_capacity(spec.num_flights);
    let mut rotation = 0usize;
    let mut failures = 0usize;

    while flights.len() < spec.num_flights {
        let remaining = spec.num_flights - flights.len();
        // the first rotations visit every base once so all bases are served
        let base = if rotation < spec.num_bases {
            rotation
        } else {
            rng.gen_range(0..spec.num_bases)
        };
        let reserve = 2 * spec.num_bases.saturating_sub(rotation + 1);
        let mut size = rng.gen_range(2..=MAX_ROTATION_FLIGHTS.min(remaining - reserve));
        if remaining - size == 1 {
            size = remaining;
        }
        match draw_rotation(spec, base, size, &flights, &mut rng) {
            Some(new) => {
                flights.extend(new);
                rotation += 1;
                failures = 0;
            }
            None => {
                failures += 1;
                if failures >= MAX_ATTEMPTS {
                    return Err(Error::InvalidConfig(format!(
                        "no legal rotation found after {MAX_ATTEMPTS} attempts; spec too tight"
                    )));
                }
            }
        }
    }

    flights.sort_by(|a, b| {
        (a.departure, a.arrival, &a.origin, &a.destination).cmp(&(
            b.departure,
            b.arrival,
            &b.origin,
            &b.destination,
        ))
    });
    for (i, f) in flights.iter_mut().enumerate() {
        f.id = i;
    }
    Instance::new(flights, bases, spec.rules.clone(), spec.cost_model.clone())
}

fn pick_stop<R: Rng>(spec: &SyntheticSpec, avoid: &[usize], rng: &mut R) -> Option<usize> {
    let pool: Vec<usize> = if spec.num_airports > spec.num_bases && !rng.gen_bool(spec.hub_factor) {
        (spec.num_bases..spec.num_airports).collect()
    } else {
        (0..spec.num_airports).collect()
    };
    let options: Vec<usize> = pool.into_iter().filter(|a| !avoid.contains(a)).collect();
    options.choose(rng).copied()
}

/// Draws one rotation of `size` flights from `base`, or `None` if the random
/// draw is illegal.
fn draw_rotation<R: Rng>(
    spec: &SyntheticSpec,
    base: usize,
    size: usize,
    existing: &[Flight],
    rng: &mut R,
) -> Option<Vec<Flight>> {
    let rules = &spec.rules;
    let mut stops = vec![base];
    for i in 1..size {
        let prev = stops[i - 1];
        let avoid = if i == size - 1 {
            vec![prev, base]
        } else {
            vec![prev]
        };
        stops.push(pick_stop(spec, &avoid, rng)?);
    }
    stops.push(base);

    let day = rng.gen_range(0..spec.time_horizon_days) as Minutes;
    let mut t = day * MINUTES_PER_DAY + 5 * 60 + 5 * rng.gen_range(0..60);
    let first_id = existing.len();
    let mut new: Vec<Flight> = Vec::with_capacity(size);
    let mut split: Vec<usize> = vec![0];
    let (mut duty_start, mut duty_flying) = (t - rules.briefing, 0);

    for leg in 0..size {
        let block = 5 * rng.gen_range(9..=36);
        let starts_duty = split.last() == Some(&0);
        if !starts_duty {
            let lo = (rules.min_sit + 4) / 5;
            let sit = 5 * rng.gen_range(lo..=lo.max(rules.max_sit.min(150) / 5));
            let fits = *split.last().unwrap() < MAX_FLIGHTS_PER_DUTY
                && duty_flying + block <= rules.max_duty_flying
                && t + sit + block + rules.debriefing - duty_start <= rules.max_duty_span
                && rng.gen_bool(0.8);
            if fits {
                t += sit;
            } else {
                let release = t + rules.debriefing;
                let rest = 5 * rng.gen_range(0..=36) + rules.min_rest;
                t = release + rest.min(rules.max_layover) + rules.briefing;
                duty_start = t - rules.briefing;
                duty_flying = 0;
                split.push(0);
            }
        }
        new.push(Flight {
            id: first_id + leg,
            origin: airport_code(stops[leg], spec.num_bases),
            destination: airport_code(stops[leg + 1], spec.num_bases),
            departure: t,
            arrival: t + block,
        });
        t += block;
        duty_flying += block;
        *split.last_mut().unwrap() += 1;
    }

    let mut duties = Vec::with_capacity(split.len());
    let mut next = first_id;
    for n in split {
        duties.push(Duty::new((next..next + n).collect(), rules));
        next += n;
    }
    let mut schedule = existing.to_vec();
    schedule.extend(new.iter().cloned());
    let probe = Instance {
        flights: schedule,
        bases: (0..spec.num_bases)
            .map(|i| airport_code(i, spec.num_bases))
            .collect(),
        rules: rules.clone(),
        cost_model: spec.cost_model.clone(),
    };
    let pairing = Pairing::new(
        0,
        airport_code(base, spec.num_bases),
        duties,
        &probe.flights,
        &spec.cost_model,
    );
    check_pairing(&probe, &pairing).ok().map(|_| new)
}
