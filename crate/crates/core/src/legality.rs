//! Stand-alone legality checks for duties and pairings.
//!
//! These recompute every rule from raw flight fields. The enumerator applies
//! the same rules incrementally while searching; this module is the
//! after-the-fact verifier used by tests, the synthetic generator and
//! `report --check`.

use std::collections::HashSet;

use crate::model::{pairing_cost, rest_between, Duty, FlightId, Instance, LegalityRules, Pairing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("empty duty or pairing")]
    Empty,
    #[error("unknown flight id {0}")]
    UnknownFlight(FlightId),
    #[error("flights {0} and {1} are not connected by airport")]
    Disconnected(FlightId, FlightId),
    #[error("sit time {sit} between flights {from} and {to} is outside the legal window")]
    SitTime {
        from: FlightId,
        to: FlightId,
        sit: i64,
    },
    #[error("duty span {0} exceeds the limit")]
    DutySpan(i64),
    #[error("duty flying time {0} exceeds the limit")]
    DutyFlying(i64),
    #[error("duty briefing/debriefing differs from the rules")]
    Briefing,
    #[error("pairing has {0} duties, above the limit")]
    TooManyDuties(usize),
    #[error("{0} is not a crew base")]
    NotABase(String),
    #[error("pairing does not start at its base")]
    StartsAway,
    #[error("pairing does not end at its base")]
    EndsAway,
    #[error("rest of {0} minutes between duties is outside the legal window")]
    Rest(i64),
    #[error("pairing spans {0} minutes, above the day limit")]
    PairingSpan(i64),
    #[error("flight {0} appears twice")]
    RepeatedFlight(FlightId),
    #[error("coverage set differs from the duty flights")]
    Coverage,
    #[error("stored cost {stored} differs from recomputed {expected}")]
    Cost { stored: i64, expected: i64 },
}

pub fn check_duty(inst: &Instance, duty: &Duty) -> Result<(), Violation> {
    check_duty_with(&inst.flights, &inst.rules, duty)
}

pub(crate) fn check_duty_with(
    schedule: &[crate::model::Flight],
    rules: &LegalityRules,
    duty: &Duty,
) -> Result<(), Violation> {
    if duty.flights.is_empty() {
        return Err(Violation::Empty);
    }
    if let Some(&bad) = duty.flights.iter().find(|&&f| f >= schedule.len()) {
        return Err(Violation::UnknownFlight(bad));
    }
    if duty.briefing_minutes != rules.briefing || duty.debriefing_minutes != rules.debriefing {
        return Err(Violation::Briefing);
    }
    for pair in duty.flights.windows(2) {
        let (a, b) = (&schedule[pair[0]], &schedule[pair[1]]);
        if a.destination != b.origin {
            return Err(Violation::Disconnected(a.id, b.id));
        }
        let sit = b.departure - a.arrival;
        if sit < rules.min_sit || sit > rules.max_sit {
            return Err(Violation::SitTime {
                from: a.id,
                to: b.id,
                sit,
            });
        }
    }
    let span = duty.span(schedule);
    if span > rules.max_duty_span {
        return Err(Violation::DutySpan(span));
    }
    let flying = duty.flying_minutes(schedule);
    if flying > rules.max_duty_flying {
        return Err(Violation::DutyFlying(flying));
    }
    Ok(())
}

/// Verifies every duty and pairing rule, the coverage set and the cost.
pub fn check_pairing(inst: &Instance, pairing: &Pairing) -> Result<(), Violation> {
    let schedule = &inst.flights;
    let rules = &inst.rules;
    if pairing.duties.is_empty() {
        return Err(Violation::Empty);
    }
    if !inst.is_base(&pairing.base) {
        return Err(Violation::NotABase(pairing.base.clone()));
    }
    if pairing.duties.len() > rules.max_duties_per_pairing {
        return Err(Violation::TooManyDuties(pairing.duties.len()));
    }
    for duty in &pairing.duties {
        check_duty(inst, duty)?;
    }
    let first = &pairing.duties[0];
    let last = pairing.duties.last().unwrap();
    if first.origin(schedule) != pairing.base {
        return Err(Violation::StartsAway);
    }
    if last.destination(schedule) != pairing.base {
        return Err(Violation::EndsAway);
    }
    for pair in pairing.duties.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (a_last, b_first) = (*a.flights.last().unwrap(), b.flights[0]);
        if a.destination(schedule) != b.origin(schedule) {
            return Err(Violation::Disconnected(a_last, b_first));
        }
        let rest = rest_between(a, b, schedule);
        if rest < rules.min_rest || rest > rules.max_layover {
            return Err(Violation::Rest(rest));
        }
    }
    let span = last.end(schedule) - first.start(schedule);
    if span > rules.max_pairing_span() {
        return Err(Violation::PairingSpan(span));
    }
    let mut seen = HashSet::new();
    for f in pairing.flights() {
        if !seen.insert(f) {
            return Err(Violation::RepeatedFlight(f));
        }
    }
    let coverage: HashSet<FlightId> = pairing.coverage.ones().collect();
    if coverage != seen {
        return Err(Violation::Coverage);
    }
    let expected = pairing_cost(pairing, schedule, &inst.cost_model);
    if expected != pairing.cost {
        return Err(Violation::Cost {
            stored: pairing.cost,
            expected,
        });
    }
    Ok(())
}
