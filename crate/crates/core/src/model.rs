//! Domain types shared by every stage of the toolkit.
//!
//! Times are integer minutes since the Unix epoch (UTC) and money is integer
//! cents, so every cost comparison in the crate is exact.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minutes since 1970-01-01T00:00Z, or a duration in minutes.
pub type Minutes = i64;
/// Money in integer cents.
pub type Cents = i64;
/// Dense flight index within an instance.
pub type FlightId = usize;
/// Dense pairing index within an `AllPairs` set.
pub type PairingId = usize;

pub const MINUTES_PER_DAY: Minutes = 24 * 60;

/// One timetable leg.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flight {
    pub id: FlightId,
    pub origin: String,
    pub destination: String,
    pub departure: Minutes,
    pub arrival: Minutes,
}

impl Flight {
    pub fn block_minutes(&self) -> Minutes {
        self.arrival - self.departure
    }
}

/// Legality limits for duties and pairings. All durations are in minutes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LegalityRules {
    pub min_sit: Minutes,
    pub max_sit: Minutes,
    pub max_duty_flying: Minutes,
    pub max_duty_span: Minutes,
    pub min_rest: Minutes,
    /// Upper bound on the rest between two duties of one pairing.
    pub max_layover: Minutes,
    pub max_duties_per_pairing: usize,
    pub max_pairing_days: u32,
    /// Report time before the first departure of a duty.
    pub briefing: Minutes,
    /// Release time after the last arrival of a duty.
    pub debriefing: Minutes,
}

impl Default for LegalityRules {
    fn default() -> Self {
        LegalityRules {
            min_sit: 30,
            max_sit: 4 * 60,
            max_duty_flying: 8 * 60,
            max_duty_span: 12 * 60,
            min_rest: 9 * 60,
            max_layover: 36 * 60,
            max_duties_per_pairing: 4,
            max_pairing_days: 5,
            briefing: 45,
            debriefing: 15,
        }
    }
}

impl LegalityRules {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("min_sit", self.min_sit),
            ("max_sit", self.max_sit),
            ("max_duty_flying", self.max_duty_flying),
            ("max_duty_span", self.max_duty_span),
            ("min_rest", self.min_rest),
            ("max_layover", self.max_layover),
        ];
        for (name, value) in positive {
            if value <= 0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        if self.min_sit >= self.max_sit {
            return Err(Error::InvalidConfig(format!(
                "min_sit ({}) must be below max_sit ({})",
                self.min_sit, self.max_sit
            )));
        }
        if self.min_rest > self.max_layover {
            return Err(Error::InvalidConfig(format!(
                "min_rest ({}) exceeds max_layover ({})",
                self.min_rest, self.max_layover
            )));
        }
        if self.briefing < 0 || self.debriefing < 0 {
            return Err(Error::InvalidConfig(
                "briefing and debriefing must be non-negative".into(),
            ));
        }
        if self.max_duties_per_pairing == 0 || self.max_pairing_days == 0 {
            return Err(Error::InvalidConfig(
                "max_duties_per_pairing and max_pairing_days must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn max_pairing_span(&self) -> Minutes {
        Minutes::from(self.max_pairing_days) * MINUTES_PER_DAY
    }
}

/// Synthetic pairing cost model. All amounts are in cents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostModel {
    pub per_flying_minute: Cents,
    pub per_duty_fixed: Cents,
    /// Charged once per overnight rest, i.e. `duties - 1` times.
    pub hotel_night: Cents,
    pub pairing_guarantee_minimum: Cents,
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel {
            per_flying_minute: 250,
            per_duty_fixed: 20_000,
            hotel_night: 15_000,
            pairing_guarantee_minimum: 50_000,
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("per_flying_minute", self.per_flying_minute),
            ("per_duty_fixed", self.per_duty_fixed),
            ("hotel_night", self.hotel_night),
            ("pairing_guarantee_minimum", self.pairing_guarantee_minimum),
        ];
        for (name, value) in fields {
            if value < 0 {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be non-negative, got {value}"
                )));
            }
        }
        Ok(())
    }

    /// Cost of a pairing with the given total flying time and duty count.
    pub fn cost(&self, flying_minutes: Minutes, num_duties: usize) -> Cents {
        let duties = num_duties as Cents;
        let nights = (duties - 1).max(0);
        let variable = self.per_flying_minute * flying_minutes
            + self.per_duty_fixed * duties
            + self.hotel_night * nights;
        variable.max(self.pairing_guarantee_minimum)
    }
}

/// A working period of consecutive, space-time connected flights.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Duty {
    pub flights: Vec<FlightId>,
    pub briefing_minutes: Minutes,
    pub debriefing_minutes: Minutes,
}

impl Duty {
    pub fn new(flights: Vec<FlightId>, rules: &LegalityRules) -> Self {
        Duty {
            flights,
            briefing_minutes: rules.briefing,
            debriefing_minutes: rules.debriefing,
        }
    }

    fn first<'a>(&self, schedule: &'a [Flight]) -> &'a Flight {
        &schedule[self.flights[0]]
    }

    fn last<'a>(&self, schedule: &'a [Flight]) -> &'a Flight {
        &schedule[*self.flights.last().expect("duty has at least one flight")]
    }

    /// Report time: first departure minus briefing.
    pub fn start(&self, schedule: &[Flight]) -> Minutes {
        self.first(schedule).departure - self.briefing_minutes
    }

    /// Release time: last arrival plus debriefing.
    pub fn end(&self, schedule: &[Flight]) -> Minutes {
        self.last(schedule).arrival + self.debriefing_minutes
    }

    pub fn span(&self, schedule: &[Flight]) -> Minutes {
        self.end(schedule) - self.start(schedule)
    }

    pub fn flying_minutes(&self, schedule: &[Flight]) -> Minutes {
        self.flights
            .iter()
            .map(|&f| schedule[f].block_minutes())
            .sum()
    }

    pub fn origin<'a>(&self, schedule: &'a [Flight]) -> &'a str {
        &self.first(schedule).origin
    }

    pub fn destination<'a>(&self, schedule: &'a [Flight]) -> &'a str {
        &self.last(schedule).destination
    }
}

/// Rest between the release of `before` and the report of `after`.
pub fn rest_between(before: &Duty, after: &Duty, schedule: &[Flight]) -> Minutes {
    after.start(schedule) - before.end(schedule)
}

/// A base-to-base sequence of duties with its cost and flight coverage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pairing {
    pub id: PairingId,
    pub base: String,
    pub duties: Vec<Duty>,
    pub cost: Cents,
    pub coverage: FixedBitSet,
}

impl Pairing {
    /// Builds a pairing, costing it with `cost_model`.
    pub fn new(
        id: PairingId,
        base: impl Into<String>,
        duties: Vec<Duty>,
        schedule: &[Flight],
        cost_model: &CostModel,
    ) -> Self {
        let flying = duties.iter().map(|d| d.flying_minutes(schedule)).sum();
        let cost = cost_model.cost(flying, duties.len());
        Self::from_parts(id, base, duties, cost, schedule.len())
    }

    /// Builds a pairing with a precomputed cost, e.g. when loading from disk.
    pub fn from_parts(
        id: PairingId,
        base: impl Into<String>,
        duties: Vec<Duty>,
        cost: Cents,
        num_flights: usize,
    ) -> Self {
        let mut coverage = FixedBitSet::with_capacity(num_flights);
        for duty in &duties {
            for &f in &duty.flights {
                coverage.insert(f);
            }
        }
        Pairing {
            id,
            base: base.into(),
            duties,
            cost,
            coverage,
        }
    }

    /// Flight ids in flying order.
    pub fn flights(&self) -> impl Iterator<Item = FlightId> + '_ {
        self.duties.iter().flat_map(|d| d.flights.iter().copied())
    }

    pub fn num_flights(&self) -> usize {
        self.duties.iter().map(|d| d.flights.len()).sum()
    }

    pub fn covers(&self, flight: FlightId) -> bool {
        self.coverage.contains(flight)
    }

    pub fn flying_minutes(&self, schedule: &[Flight]) -> Minutes {
        self.duties.iter().map(|d| d.flying_minutes(schedule)).sum()
    }
}

/// Recomputes a pairing's cost from its duties.
pub fn pairing_cost(pairing: &Pairing, schedule: &[Flight], cost_model: &CostModel) -> Cents {
    cost_model.cost(pairing.flying_minutes(schedule), pairing.duties.len())
}

/// A crew pairing problem: flights, crew bases, rules and costing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub flights: Vec<Flight>,
    pub bases: Vec<String>,
    pub rules: LegalityRules,
    pub cost_model: CostModel,
}

fn is_airport_code(code: &str) -> bool {
    !code.is_empty()
        && code
            .chars()
            .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit())
}

impl Instance {
    pub fn new(
        flights: Vec<Flight>,
        bases: Vec<String>,
        rules: LegalityRules,
        cost_model: CostModel,
    ) -> Result<Self> {
        let inst = Instance {
            flights,
            bases,
            rules,
            cost_model,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn num_flights(&self) -> usize {
        self.flights.len()
    }

    pub fn is_base(&self, airport: &str) -> bool {
        self.bases.iter().any(|b| b == airport)
    }

    pub fn validate(&self) -> Result<()> {
        self.rules.validate()?;
        self.cost_model.validate()?;
        if self.bases.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one crew base is required".into(),
            ));
        }
        for (idx, f) in self.flights.iter().enumerate() {
            if f.id != idx {
                return Err(Error::InvalidInstance(format!(
                    "flight ids must be dense 0..{}; position {idx} holds id {}",
                    self.flights.len(),
                    f.id
                )));
            }
            if f.arrival <= f.departure {
                return Err(Error::InvalidInstance(format!(
                    "flight {}: arrival must be after departure",
                    f.id
                )));
            }
            if f.origin == f.destination {
                return Err(Error::InvalidInstance(format!(
                    "flight {}: origin equals destination ({})",
                    f.id, f.origin
                )));
            }
            for code in [&f.origin, &f.destination] {
                if !is_airport_code(code) {
                    return Err(Error::InvalidInstance(format!(
                        "flight {}: bad airport code {code:?}",
                        f.id
                    )));
                }
            }
        }
        for base in &self.bases {
            let used = self
                .flights
                .iter()
                .any(|f| &f.origin == base || &f.destination == base);
            if !used {
                return Err(Error::InvalidInstance(format!(
                    "base {base} is not served by any flight"
                )));
            }
        }
        Ok(())
    }
}

/// Per-flight cover multiplicities of a selection of pairings.
pub fn coverage_counts<'a>(
    num_flights: usize,
    selected: impl IntoIterator<Item = &'a Pairing>,
) -> Vec<u32> {
    let mut counts = vec![0u32; num_flights];
    for p in selected {
        for f in p.flights() {
            counts[f] += 1;
        }
    }
    counts
}

/// Number of deadheads implied by per-flight cover multiplicities.
///
/// For a feasible selection this is total coverings minus the number of
/// flights. Uncovered flights contribute nothing, so the value is also
/// meaningful as a diagnostic on infeasible input.
pub fn deadhead_count(counts: &[u32]) -> u64 {
    counts.iter().map(|&c| u64::from(c.saturating_sub(1))).sum()
}
