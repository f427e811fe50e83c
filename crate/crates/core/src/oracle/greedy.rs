//! Quality-index greedy cover.

use crate::allpairs::AllPairs;
use crate::error::Result;
use crate::model::{Cents, PairingId};

use super::Solution;
use crate::ga::best_by_quality_index;

/// Adds the minimum quality-index pairing until every flight is covered,
/// then drops redundant pairings in the order they were added.
pub fn solve_greedy(all: &AllPairs, penalty: Cents) -> Result<Solution> {
    all.ensure_coverable()?;
    let mut counts = vec![0u32; all.num_flights()];
    let mut chosen: Vec<PairingId> = Vec::new();
    while let Some(p) = best_by_quality_index(all, &counts, None) {
        all.get(p).flights().for_each(|f| counts[f] += 1);
        chosen.push(p);
    }
    chosen.retain(|&p| {
        let pairing = all.get(p);
        if pairing.flights().all(|f| counts[f] >= 2) {
            pairing.flights().for_each(|f| counts[f] -= 1);
            false
        } else {
            true
        }
    });
    Ok(Solution::from_selection(all, penalty, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::toy_allpairs;

    #[test]
    fn partition_only_input() {
        let all = toy_allpairs(4, &[(&[2, 3], 300), (&[0, 1], 300)]);
        let s = solve_greedy(&all, 0).unwrap();
        assert_eq!(s.pairings, vec![0, 1]);
        assert_eq!(s.objective_cents, 600);
    }

    #[test]
    fn redundant_first_choice_is_dropped() {
        // {1,2} (QI 50) goes first, then {0,1} and {2,3} make it redundant
        let all = toy_allpairs(4, &[(&[1, 2], 100), (&[0, 1], 120), (&[2, 3], 120)]);
        let s = solve_greedy(&all, 0).unwrap();
        assert_eq!(s.pairings, vec![1, 2]);
    }
}
