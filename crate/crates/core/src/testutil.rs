//! Small fixtures shared by unit tests.

use crate::allpairs::AllPairs;
use crate::model::{Cents, Duty, FlightId, Pairing};

/// AllPairs over `num_flights` flights from `(flights, cost)` specs; each
/// pairing is a single duty out of "DAL".
pub fn toy_allpairs(num_flights: usize, specs: &[(&[FlightId], Cents)]) -> AllPairs {
    let pairings = specs
        .iter()
        .enumerate()
        .map(|(id, (flights, cost))| {
            let duty = Duty {
                flights: flights.to_vec(),
                briefing_minutes: 0,
                debriefing_minutes: 0,
            };
            Pairing::from_parts(id, "DAL", vec![duty], *cost, num_flights)
        })
        .collect();
    AllPairs::new(num_flights, pairings).unwrap()
}
