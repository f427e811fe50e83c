//! Reference solutions for small instances: synthetic instance generation,
//! an exact branch-and-bound solver and a greedy baseline.

mod exact;
mod greedy;
mod synthetic;

pub use exact::{solve_exact, solve_exact_with_limit, DEFAULT_MAX_PAIRINGS};
pub use greedy::solve_greedy;
pub use synthetic::{airport_code, generate_instance, SyntheticSpec, MAX_ATTEMPTS};

use serde::{Deserialize, Serialize};

use crate::allpairs::AllPairs;
use crate::model::{coverage_counts, deadhead_count, Cents, PairingId};

/// A selection of pairings with its objective. Field names match
/// [`crate::ga::RunRecord`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    /// Pairing costs plus deadhead penalties.
    pub objective_cents: Cents,
    pub pairing_cost_cents: Cents,
    pub deadheads: u64,
    pub pairing_count: usize,
    /// Ascending pairing ids.
    pub pairings: Vec<PairingId>,
}

impl Solution {
    pub fn from_selection(all: &AllPairs, penalty: Cents, mut pairings: Vec<PairingId>) -> Self {
        pairings.sort_unstable();
        let counts = coverage_counts(all.num_flights(), pairings.iter().map(|&p| all.get(p)));
        let deadheads = deadhead_count(&counts);
        let pairing_cost_cents = pairings.iter().map(|&p| all.cost(p)).sum();
        Solution {
            objective_cents: pairing_cost_cents + deadheads as Cents * penalty,
            pairing_cost_cents,
            deadheads,
            pairing_count: pairings.len(),
            pairings,
        }
    }

    /// Whether every flight is covered.
    pub fn is_cover(&self, all: &AllPairs) -> bool {
        coverage_counts(all.num_flights(), self.pairings.iter().map(|&p| all.get(p)))
            .iter()
            .all(|&n| n > 0)
    }
}
