//! Selection, crossover and mutation.

use rand::seq::index;
use rand::Rng;

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::PairingId;

use super::chromosome::{Chromosome, Gene};
use super::init::{construct_min_deadhead, fill_random};
use super::repair::repair_coverage;

fn fitness_of(c: &Chromosome) -> i64 {
    c.fitness()
        .expect("selection and crossover need evaluated chromosomes")
}

/// Index of the winner of one binary tournament between two distinct random
/// members. Lower fitness wins; ties go to the lower index.
fn tournament<R: Rng + ?Sized>(pop: &[Chromosome], rng: &mut R) -> usize {
    if pop.len() < 2 {
        return 0;
    }
    let pick = index::sample(rng, pop.len(), 2);
    let (a, b) = (pick.index(0), pick.index(1));
    let key = |i: usize| (fitness_of(&pop[i]), i);
    if key(a) <= key(b) {
        a
    } else {
        b
    }
}

/// Two binary tournaments; returns the population indices of both parents.
pub fn tournament_select<R: Rng + ?Sized>(pop: &[Chromosome], rng: &mut R) -> (usize, usize) {
    let first = tournament(pop, rng);
    let second = tournament(pop, rng);
    (first, second)
}

/// Fusion crossover. At each position where the parents differ, a child
/// inherits the first parent's gene with probability `f2 / (f1 + f2)`, so
/// the fitter (lower) parent is favored. Each child is drawn independently.
pub fn crossover_fusion<R: Rng + ?Sized>(
    p1: &Chromosome,
    p2: &Chromosome,
    rng: &mut R,
) -> (Chromosome, Chromosome) {
    assert_eq!(p1.len(), p2.len(), "parents must have equal length");
    let (f1, f2) = (fitness_of(p1) as f64, fitness_of(p2) as f64);
    let take_first = if f1 + f2 > 0.0 { f2 / (f1 + f2) } else { 0.5 };
    let child1 = fuse(p1, p2, take_first, rng);
    let child2 = fuse(p1, p2, take_first, rng);
    (child1, child2)
}

fn fuse<R: Rng + ?Sized>(
    p1: &Chromosome,
    p2: &Chromosome,
    take_first: f64,
    rng: &mut R,
) -> Chromosome {
    let horizon = p1.expressed_len().max(p2.expressed_len());
    let (mut from1, mut from2) = (0usize, 0usize);
    let genes = p1
        .genes()
        .iter()
        .zip(p2.genes())
        .enumerate()
        .map(|(k, (&a, &b))| {
            if a == b {
                return a;
            }
            let first = rng.gen::<f64>() < take_first;
            if k < horizon {
                if first {
                    from1 += 1;
                } else {
                    from2 += 1;
                }
            }
            if first {
                a
            } else {
                b
            }
        })
        .collect();
    let expressed = if from2 > from1 {
        p2.expressed_len()
    } else {
        p1.expressed_len()
    };
    Chromosome::new(genes, expressed)
}

/// Deadhead-minimizing crossover.
///
/// Both parents' pairings are pooled. Each child's expressed part is built
/// from the pool by the deadhead-minimizing construction (random disjoint
/// pairings, then fewest added deadheads), with quality-index repair over
/// all pairings if the pool cannot cover every flight. The unexpressed part
/// takes the remaining pooled pairings most dissimilar to the disjoint core
/// of the expressed part: those covering the most flights the core leaves
/// uncovered, lower id first on ties.
pub fn crossover_dhd_min<R: Rng + ?Sized>(
    p1: &Chromosome,
    p2: &Chromosome,
    all: &AllPairs,
    rng: &mut R,
) -> Result<(Chromosome, Chromosome)> {
    assert_eq!(p1.len(), p2.len(), "parents must have equal length");
    let mut combined: Vec<PairingId> = p1
        .genes()
        .iter()
        .chain(p2.genes())
        .map(|g| g.pairing)
        .collect();
    combined.sort_unstable();
    combined.dedup();

    let child1 = build_dhd_min_child(&combined, p1.len(), all, rng)?;
    let child2 = build_dhd_min_child(&combined, p1.len(), all, rng)?;
    Ok((child1, child2))
}

fn build_dhd_min_child<R: Rng + ?Sized>(
    combined: &[PairingId],
    length: usize,
    all: &AllPairs,
    rng: &mut R,
) -> Result<Chromosome> {
    let built = construct_min_deadhead(all, combined, rng);
    if built.pairings.len() > length {
        return Err(Error::ChromosomeFull { length });
    }

    let mut core_covered = vec![false; all.num_flights()];
    for &p in &built.pairings[..built.zero_deadhead_len] {
        all.get(p).flights().for_each(|f| core_covered[f] = true);
    }
    let mut used = vec![false; all.len()];
    built.pairings.iter().for_each(|&p| used[p] = true);
    let mut rest: Vec<(usize, PairingId)> = combined
        .iter()
        .filter(|&&p| !used[p])
        .map(|&p| {
            let dissimilarity = all.get(p).flights().filter(|&f| !core_covered[f]).count();
            (dissimilarity, p)
        })
        .collect();
    rest.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));

    let expressed = built.pairings.len();
    let mut genes: Vec<Gene> = built.pairings.iter().map(|&p| Gene::new(true, p)).collect();
    genes.extend(
        rest.into_iter()
            .take(length - expressed)
            .map(|(_, p)| Gene::new(false, p)),
    );
    fill_random(all, &mut genes, length, false, rng);

    let mut child = Chromosome::new(genes, expressed);
    if !built.covers_all {
        repair_coverage(&mut child, all)?;
    }
    Ok(child)
}

/// Bit-flip mutation: each gene is selected with probability `rate` and its
/// first bit flipped. Pairing references are never touched.
pub fn mutate_bitflip<R: Rng + ?Sized>(c: &mut Chromosome, rate: f64, rng: &mut R) {
    for i in 0..c.len() {
        if rng.gen::<f64>() < rate {
            let g = c.gene(i);
            c.set_selected(i, !g.selected);
        }
    }
}

/// Density mutation. With `d` the share of set first bits in `fittest`, a
/// selected gene holding 0 becomes 1 with probability `d`, and one holding 1
/// becomes 0 with probability `1 - d`.
pub fn mutate_density<R: Rng + ?Sized>(
    c: &mut Chromosome,
    rate: f64,
    fittest: &Chromosome,
    rng: &mut R,
) {
    let density = fittest.density();
    for i in 0..c.len() {
        if rng.gen::<f64>() < rate {
            let set = rng.gen::<f64>() < density;
            c.set_selected(i, set);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::chromosome::{evaluate, FitnessConfig};
    use crate::testutil::toy_allpairs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn evaluated(genes: &[(bool, PairingId)], expressed: usize, all: &AllPairs) -> Chromosome {
        let mut c = Chromosome::new(
            genes.iter().map(|&(s, p)| Gene::new(s, p)).collect(),
            expressed,
        );
        evaluate(&mut c, all, &FitnessConfig { dhd_penalty: 0 }).unwrap();
        c
    }

    fn costs_allpairs() -> AllPairs {
        toy_allpairs(2, &[(&[0, 1], 100), (&[0, 1], 200), (&[0], 50), (&[1], 50)])
    }

    #[test]
    fn tournament_prefers_lower_fitness_and_lower_index() {
        let all = costs_allpairs();
        let good = evaluated(&[(true, 0)], 1, &all);
        let bad = evaluated(&[(true, 1)], 1, &all);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pop = vec![bad.clone(), good.clone()];
        for _ in 0..20 {
            assert_eq!(tournament(&pop, &mut rng), 1);
        }
        let tie = vec![good.clone(), good];
        for _ in 0..20 {
            assert_eq!(tournament(&tie, &mut rng), 0);
        }
    }

    #[test]
    fn fusion_of_identical_parents_is_identity() {
        let all = costs_allpairs();
        let p = evaluated(&[(true, 0), (false, 2), (true, 3)], 2, &all);
        let (a, b) = crossover_fusion(&p, &p, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a.genes(), p.genes());
        assert_eq!(b.genes(), p.genes());
        assert_eq!(a.expressed_len(), 2);
    }

    #[test]
    fn mutation_rate_extremes() {
        let all = costs_allpairs();
        let p = evaluated(&[(true, 0), (false, 2), (true, 3)], 3, &all);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut c = p.clone();
        mutate_bitflip(&mut c, 0.0, &mut rng);
        assert_eq!(c.genes(), p.genes());
        mutate_bitflip(&mut c, 1.0, &mut rng);
        for (m, o) in c.genes().iter().zip(p.genes()) {
            assert_eq!(m.selected, !o.selected);
            assert_eq!(m.pairing, o.pairing);
        }
    }

    #[test]
    fn density_one_sets_every_selected_gene() {
        let all = costs_allpairs();
        let fittest = evaluated(&[(true, 0), (true, 2), (true, 3)], 3, &all);
        let mut c = Chromosome::new(vec![Gene::new(false, 1); 10], 10);
        mutate_density(&mut c, 1.0, &fittest, &mut ChaCha8Rng::seed_from_u64(2));
        assert!(c.genes().iter().all(|g| g.selected));
    }

    #[test]
    fn dhd_min_crossover_finds_partition_in_parents() {
        // pairings 2 and 3 partition the flights; each parent holds one
        let all = costs_allpairs();
        let p1 = evaluated(&[(true, 1), (false, 2)], 1, &all);
        let p2 = evaluated(&[(true, 0), (false, 3)], 1, &all);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let (a, b) = crossover_dhd_min(&p1, &p2, &all, &mut rng).unwrap();
            for child in [a, b] {
                assert_eq!(child.len(), 2);
                let counts = child.coverage_counts(&all);
                assert!(counts.iter().all(|&n| n >= 1));
                assert_eq!(crate::model::deadhead_count(&counts), 0);
            }
        }
    }

    #[test]
    fn dhd_min_crossover_falls_back_to_repair() {
        // pool {2} cannot cover flight 1; repair pulls in pairing 3 or 0
        let all = costs_allpairs();
        let p = Chromosome::new(vec![Gene::new(true, 2); 3], 1);
        let (a, b) = crossover_dhd_min(&p, &p, &all, &mut ChaCha8Rng::seed_from_u64(0)).unwrap();
        assert!(a.is_feasible(&all));
        assert!(b.is_feasible(&all));
        assert_eq!(a.len(), 3);
    }
}
