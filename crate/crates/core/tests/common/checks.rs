use std::collections::BTreeSet;

use crewpair::ga::{
    evaluate, mutate_bitflip, redundant_pairing_removal, repair, repair_coverage, replace_generational,
    run_with_workers, Chromosome, FitnessConfig, GaConfig, Gene, Seed, Termination, Variant,
};
use crewpair::network::{enumerate_pairings_lenient, ConnectionGraph};
use crewpair::oracle::{solve_exact, solve_greedy};
use crewpair::{AllPairs, Error};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

/// Enumeration against the brute-force oracle on `cases` random instances.
/// Returns how many instances had at least one legal pairing.
pub fn enumeration_matches_brute_force(seed: u64, cases: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonempty = 0;
    for case in 0..cases {
        let inst = random_small_instance(&mut rng, 12);
        let all = enumerate_pairings_lenient(&inst, &ConnectionGraph::for_instance(&inst), Some(1))
            .map_err(|e| format!("case {case}: {e}"))?;
        let expected = brute_force_pairings(&inst);
        if keyed(&all) != expected {
            return Err(format!("case {case}: pairings differ on {inst:?}"));
        }
        if !expected.is_empty() {
            nonempty += 1;
        }
        let covered: BTreeSet<_> = expected.keys().flat_map(|(_, f)| f.iter().copied()).collect();
        let uncoverable: Vec<_> = (0..inst.num_flights()).filter(|f| !covered.contains(f)).collect();
        if all.uncoverable() != uncoverable {
            return Err(format!("case {case}: uncoverable flights differ"));
        }
    }
    Ok(nonempty)
}

/// `solve_exact` against exhaustive search on enumerated random instances.
/// Returns how many instances were coverable.
pub fn exact_matches_exhaustive_on_enumerated(seed: u64, cases: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut solved = 0;
    for case in 0..cases {
        let inst = random_small_instance(&mut rng, 12);
        let all = enumerate_pairings_lenient(&inst, &ConnectionGraph::for_instance(&inst), Some(1))
            .map_err(|e| format!("case {case}: {e}"))?;
        let penalty = [0, 10_000, 25_000, rng.gen_range(0..100_000)][rng.gen_range(0..4)];
        match (exhaustive_optimum(&all, penalty), solve_exact(&all, penalty)) {
            (None, Err(Error::Uncoverable(_))) => {}
            (Some(opt), Ok(s)) => {
                if s.objective_cents != opt || objective(&all, penalty, &s.pairings) != Some(opt) {
                    return Err(format!("case {case}: optimum {opt}, solver {}", s.objective_cents));
                }
                solved += 1;
            }
            (want, got) => return Err(format!("case {case}: oracle {want:?}, solver {got:?}")),
        }
    }
    Ok(solved)
}

/// `solve_exact` against exhaustive search on random set systems, with the
/// greedy heuristic never beating it.
pub fn exact_matches_exhaustive_on_random_covers(seed: u64, cases: usize) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for case in 0..cases {
        let f = rng.gen_range(1..=10);
        let n = rng.gen_range(1..=30);
        let all = random_coverable(&mut rng, f, n);
        let penalty = rng.gen_range(0..2000);
        let s = solve_exact(&all, penalty).map_err(|e| format!("case {case}: {e}"))?;
        if Some(s.objective_cents) != exhaustive_optimum(&all, penalty) {
            return Err(format!("case {case}: solver {} is not optimal", s.objective_cents));
        }
        let greedy = solve_greedy(&all, penalty).map_err(|e| format!("case {case}: {e}"))?;
        if !greedy.is_cover(&all) || greedy.objective_cents < s.objective_cents {
            return Err(format!("case {case}: greedy {} vs exact {}", greedy.objective_cents, s.objective_cents));
        }
    }
    Ok(())
}

/// A random coverable AllPairs plus a random chromosome over it whose
/// unexpressed reservoir holds at least one gene per flight.
pub fn instance_and_chromosome(seed: u64) -> (AllPairs, Chromosome) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = rng.gen_range(1..=8);
    let n = rng.gen_range(1..=12);
    let all = random_coverable(&mut rng, f, n);
    let expressed = rng.gen_range(0..=all.len());
    let len = expressed + f + rng.gen_range(0..4);
    let genes = (0..len)
        .map(|_| Gene::new(rng.gen_bool(0.4), rng.gen_range(0..all.len())))
        .collect();
    (all, Chromosome::new(genes, expressed))
}

fn fitness(c: &Chromosome, all: &AllPairs, penalty: i64) -> i64 {
    let mut c = c.clone();
    evaluate(&mut c, all, &FitnessConfig { dhd_penalty: penalty }).unwrap().fitness
}

pub fn repair_restores_coverage(seed: u64) -> Result<(), TestCaseError> {
    let (all, mut c) = instance_and_chromosome(seed);
    let len = c.len();
    repair(&mut c, &all).unwrap();
    prop_assert!(c.is_feasible(&all));
    prop_assert_eq!(c.len(), len);
    Ok(())
}

pub fn redundant_removal_is_one_minimal(seed: u64, penalty: i64) -> Result<(), TestCaseError> {
    let (all, mut c) = instance_and_chromosome(seed);
    repair_coverage(&mut c, &all).unwrap();
    let before = fitness(&c, &all, penalty);
    redundant_pairing_removal(&mut c, &all);
    prop_assert!(c.is_feasible(&all));
    prop_assert!(fitness(&c, &all, penalty) <= before);
    // dropping any single active gene must uncover a flight
    for i in 0..c.expressed_len() {
        if c.gene(i).selected {
            let mut fewer = c.clone();
            fewer.set_selected(i, false);
            prop_assert!(!fewer.is_feasible(&all), "gene {} is redundant", i);
        }
    }
    Ok(())
}

pub fn repair_is_idempotent(seed: u64) -> Result<(), TestCaseError> {
    let (all, mut c) = instance_and_chromosome(seed);
    repair(&mut c, &all).unwrap();
    let once = c.clone();
    repair(&mut c, &all).unwrap();
    prop_assert_eq!(c, once);
    Ok(())
}

pub fn bitflip_keeps_pairing_references(seed: u64, rate: f64) -> Result<(), TestCaseError> {
    let (_, mut c) = instance_and_chromosome(seed);
    let before = c.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
    mutate_bitflip(&mut c, rate, &mut rng);
    prop_assert_eq!(c.len(), before.len());
    prop_assert_eq!(c.expressed_len(), before.expressed_len());
    for (a, b) in c.genes().iter().zip(before.genes()) {
        prop_assert_eq!(a.pairing, b.pairing);
    }
    Ok(())
}

pub fn elitist_replacement_keeps_the_best(seed: u64, generations: usize) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = rng.gen_range(1..=6);
    let all = random_coverable(&mut rng, f, 8);
    let fit = FitnessConfig { dhd_penalty: rng.gen_range(0..500) };
    let pop_size = rng.gen_range(2..=6);
    let random_pop = |rng: &mut ChaCha8Rng| -> Vec<Chromosome> {
        (0..pop_size)
            .map(|_| {
                let genes = (0..all.len()).map(|p| Gene::new(rng.gen_bool(0.5), p)).collect();
                let mut c = Chromosome::new(genes, all.len());
                repair(&mut c, &all).unwrap();
                evaluate(&mut c, &all, &fit).unwrap();
                c
            })
            .collect()
    };
    let mut pop = random_pop(&mut rng);
    let mut best = pop.iter().map(|c| c.fitness().unwrap()).min().unwrap();
    for _ in 0..generations {
        let children = random_pop(&mut rng);
        let child_best = children.iter().map(|c| c.fitness().unwrap()).min().unwrap();
        pop = replace_generational(pop, children);
        prop_assert_eq!(pop.len(), pop_size);
        let now = pop.iter().map(|c| c.fitness().unwrap()).min().unwrap();
        prop_assert!(now <= best);
        prop_assert_eq!(now, best.min(child_best));
        best = now;
    }
    Ok(())
}

pub fn worker_count_does_not_change_runs(
    seed: u64,
    variant: usize,
    generations: u64,
    pop: usize,
) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (f, n) = (rng.gen_range(1..=6), rng.gen_range(1..=8));
    let all = random_coverable(&mut rng, f, n);
    let cfg = GaConfig {
        config: Variant::ALL[variant],
        population_size: pop,
        termination: Termination::Generations(generations),
        seed: Seed(seed),
        dhd_penalty_cents: rng.gen_range(0..1000),
        ..GaConfig::default()
    };
    let a = run_with_workers(&all, &cfg, Some(1)).unwrap();
    let b = run_with_workers(&all, &cfg, Some(3)).unwrap();
    prop_assert_eq!(a.without_timing(), b.without_timing());
    prop_assert!(a.trace.windows(2).all(|w| w[1].best_cost_cents <= w[0].best_cost_cents));
    Ok(())
}
