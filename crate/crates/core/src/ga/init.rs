//! Population initialization.

use std::collections::HashSet;

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::allpairs::AllPairs;
use crate::error::Result;
use crate::model::PairingId;

use super::chromosome::{Chromosome, Gene};
use super::repair::repair;

/// Genes added on top of the longest initial expressed part to size the
/// (fixed) chromosome length.
pub const UNEXPRESSED_MARGIN: usize = 100;

/// Pairings chosen by the deadhead-minimizing construction.
#[derive(Debug, Clone)]
pub(crate) struct Construction {
    pub pairings: Vec<PairingId>,
    /// The first `zero_deadhead_len` pairings are pairwise disjoint.
    pub zero_deadhead_len: usize,
    pub covers_all: bool,
}

/// Builds a cover from `pool` with as few deadheads as possible.
///
/// Pairings that only touch uncovered flights are taken in uniformly random
/// order until none is left. Then the pairing adding the fewest deadheads
/// (ties: lower cost, lower id) is taken repeatedly until every flight is
/// covered or the pool has nothing more to offer.
pub(crate) fn construct_min_deadhead<R: Rng + ?Sized>(
    all: &AllPairs,
    pool: &[PairingId],
    rng: &mut R,
) -> Construction {
    let mut counts = vec![0u32; all.num_flights()];
    let mut chosen = Vec::new();

    // Scanning a random permutation once accepts, at each step, a uniformly
    // random pairing among those still disjoint from the partial solution.
    let mut order = pool.to_vec();
    order.shuffle(rng);
    for p in order {
        let pairing = all.get(p);
        if pairing.flights().all(|f| counts[f] == 0) {
            pairing.flights().for_each(|f| counts[f] += 1);
            chosen.push(p);
        }
    }
    let zero_deadhead_len = chosen.len();

    let mut remaining: Vec<PairingId> = pool.to_vec();
    if !pool.windows(2).all(|w| w[0] < w[1]) {
        remaining.sort_unstable();
        remaining.dedup();
    }
    loop {
        remaining.retain(|&p| all.get(p).flights().any(|f| counts[f] == 0));
        let best = remaining.iter().copied().min_by_key(|&p| {
            let added = all.get(p).flights().filter(|&f| counts[f] > 0).count();
            (added, all.cost(p), p)
        });
        let Some(best) = best else {
            break;
        };
        all.get(best).flights().for_each(|f| counts[f] += 1);
        chosen.push(best);
    }

    Construction {
        pairings: chosen,
        zero_deadhead_len,
        covers_all: counts.iter().all(|&c| c > 0),
    }
}

/// Appends random pairings (without replacement, and distinct from those
/// already present) until `genes` reaches `length`. When `AllPairs` runs out
/// of fresh pairings a new round of sampling starts.
pub(crate) fn fill_random<R: Rng + ?Sized>(
    all: &AllPairs,
    genes: &mut Vec<Gene>,
    length: usize,
    random_bits: bool,
    rng: &mut R,
) {
    if all.is_empty() {
        return;
    }
    let mut used: HashSet<PairingId> = genes.iter().map(|g| g.pairing).collect();
    while genes.len() < length {
        if used.len() >= all.len() {
            used.clear();
        }
        let p = rng.gen_range(0..all.len());
        if used.insert(p) {
            let selected = random_bits && rng.gen_bool(0.5);
            genes.push(Gene::new(selected, p));
        }
    }
}

/// Deadhead-minimizing initialization. Every chromosome is feasible.
pub fn dhd_min_initialize<R: Rng + ?Sized>(
    all: &AllPairs,
    pop_size: usize,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    all.ensure_coverable()?;
    let pool: Vec<PairingId> = (0..all.len()).collect();
    let expressed: Vec<Vec<PairingId>> = (0..pop_size)
        .map(|_| construct_min_deadhead(all, &pool, rng).pairings)
        .collect();
    let length = UNEXPRESSED_MARGIN + expressed.iter().map(Vec::len).max().unwrap_or(0);
    Ok(expressed
        .into_iter()
        .map(|ids| {
            let e = ids.len();
            let mut genes: Vec<Gene> = ids.into_iter().map(|p| Gene::new(true, p)).collect();
            fill_random(all, &mut genes, length, false, rng);
            Chromosome::new(genes, e)
        })
        .collect())
}

/// Random chromosomes before repair: `min(P, F)` distinct random pairings in
/// the expressed part, the usual margin of random pairings after it, and a
/// fair coin for every first bit.
pub fn random_population<R: Rng + ?Sized>(
    all: &AllPairs,
    pop_size: usize,
    rng: &mut R,
) -> Vec<Chromosome> {
    let expressed = all.len().min(all.num_flights());
    let length = UNEXPRESSED_MARGIN + expressed;
    (0..pop_size)
        .map(|_| {
            let mut genes: Vec<Gene> = index::sample(rng, all.len(), expressed)
                .into_iter()
                .map(|p| Gene::new(false, p))
                .collect();
            for g in genes.iter_mut() {
                g.selected = rng.gen_bool(0.5);
            }
            fill_random(all, &mut genes, length, true, rng);
            Chromosome::new(genes, expressed)
        })
        .collect()
}

/// Random initialization followed by repair.
pub fn random_initialize<R: Rng + ?Sized>(
    all: &AllPairs,
    pop_size: usize,
    rng: &mut R,
) -> Result<Vec<Chromosome>> {
    all.ensure_coverable()?;
    let mut pop = random_population(all, pop_size, rng);
    for c in pop.iter_mut() {
        repair(c, all)?;
    }
    Ok(pop)
}
