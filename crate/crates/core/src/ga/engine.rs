//! The generational loop.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::{Cents, PairingId};

use super::chromosome::{evaluate, Chromosome, FitnessConfig};
use super::config::{
    CrossoverKind, GaConfig, Initializer, MutationKind, Seed, Termination, Variant,
};
use super::init::{dhd_min_initialize, random_initialize};
use super::operators::{
    crossover_dhd_min, crossover_fusion, mutate_bitflip, mutate_density, tournament_select,
};
use super::repair::repair;

/// Best-of-population state after one generation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub elapsed_sec: f64,
    pub generation: u64,
    /// Fitness of the best chromosome (pairing costs plus deadhead penalties).
    pub best_cost_cents: Cents,
    pub best_deadheads: u64,
}

/// Result of one GA run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub config: Variant,
    pub seed: Seed,
    /// Fitness of the best solution.
    pub best_cost_cents: Cents,
    /// Sum of the best solution's pairing costs, without deadhead penalties.
    pub pairing_cost_cents: Cents,
    pub deadheads: u64,
    pub pairing_count: usize,
    /// Active pairings of the best solution, ascending.
    pub pairings: Vec<PairingId>,
    pub generations: u64,
    pub elapsed_sec: f64,
    /// Best of the initial population.
    pub early: TracePoint,
    pub trace: Vec<TracePoint>,
}

impl RunRecord {
    /// Copy with every wall-clock reading set to zero, for comparing runs.
    pub fn without_timing(&self) -> RunRecord {
        let mut r = self.clone();
        r.elapsed_sec = 0.0;
        r.early.elapsed_sec = 0.0;
        r.trace.iter_mut().for_each(|t| t.elapsed_sec = 0.0);
        r
    }

    /// Last trace point recorded at or before `elapsed_sec`.
    pub fn trace_at(&self, elapsed_sec: f64) -> Option<&TracePoint> {
        self.trace
            .iter()
            .take_while(|t| t.elapsed_sec <= elapsed_sec)
            .last()
    }
}

/// Keeps the `n` fittest of parents and children. Ties favor parents, then
/// the lower index.
pub fn replace_generational(
    parents: Vec<Chromosome>,
    children: Vec<Chromosome>,
) -> Vec<Chromosome> {
    let n = parents.len();
    let mut pool: Vec<(Cents, usize, usize, Chromosome)> = parents
        .into_iter()
        .enumerate()
        .map(|(i, c)| (fitness(&c), 0, i, c))
        .chain(
            children
                .into_iter()
                .enumerate()
                .map(|(i, c)| (fitness(&c), 1, i, c)),
        )
        .collect();
    pool.sort_by_key(|(f, origin, i, _)| (*f, *origin, *i));
    pool.truncate(n);
    pool.into_iter().map(|(_, _, _, c)| c).collect()
}

fn fitness(c: &Chromosome) -> Cents {
    c.fitness()
        .expect("replacement needs evaluated chromosomes")
}

fn best_index(pop: &[Chromosome]) -> usize {
    (0..pop.len())
        .min_by_key(|&i| (fitness(&pop[i]), i))
        .expect("empty population")
}

fn repair_and_evaluate(pop: &mut [Chromosome], all: &AllPairs, fit: &FitnessConfig) -> Result<()> {
    pop.par_iter_mut().try_for_each(|c| {
        repair(c, all)?;
        evaluate(c, all, fit).map(|_| ())
    })
}

/// Runs the GA on the ambient rayon pool.
pub fn run(all: &AllPairs, cfg: &GaConfig) -> Result<RunRecord> {
    run_with_workers(all, cfg, None)
}

/// Runs the GA, repairing and evaluating children on `workers` threads.
/// The outcome does not depend on the worker count.
pub fn run_with_workers(
    all: &AllPairs,
    cfg: &GaConfig,
    workers: Option<usize>,
) -> Result<RunRecord> {
    cfg.validate()?;
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(|| evolve(all, cfg)),
        None => evolve(all, cfg),
    }
}

fn evolve(all: &AllPairs, cfg: &GaConfig) -> Result<RunRecord> {
    let start = Instant::now();
    let fit = cfg.fitness();
    let variant = cfg.config;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.0);

    let mut pop = match variant.initializer() {
        Initializer::Random => random_initialize(all, cfg.population_size, &mut rng)?,
        Initializer::DeadheadMin => dhd_min_initialize(all, cfg.population_size, &mut rng)?,
    };
    repair_and_evaluate(&mut pop, all, &fit)?;

    let length = pop[0].len();
    let rate = if length == 0 {
        0.0
    } else {
        (cfg.mutation_rate_factor / length as f64).min(1.0)
    };

    let point = |pop: &[Chromosome], generation: u64| {
        let e = pop[best_index(pop)].evaluation().expect("evaluated");
        TracePoint {
            elapsed_sec: start.elapsed().as_secs_f64(),
            generation,
            best_cost_cents: e.fitness,
            best_deadheads: e.deadheads,
        }
    };
    let early = point(&pop, 0);
    let mut trace = vec![early];
    let mut generation = 0u64;

    loop {
        let done = match cfg.termination {
            Termination::Generations(cap) => generation >= cap,
            Termination::Seconds(s) => start.elapsed().as_secs_f64() >= s,
        };
        if done {
            break;
        }

        let fittest = pop[best_index(&pop)].clone();
        let mut children = Vec::with_capacity(pop.len() + 1);
        while children.len() < pop.len() {
            let (i, j) = tournament_select(&pop, &mut rng);
            let (a, b) = if rng.gen::<f64>() < cfg.crossover_rate {
                match variant.crossover() {
                    CrossoverKind::Fusion => crossover_fusion(&pop[i], &pop[j], &mut rng),
                    CrossoverKind::DeadheadMin => {
                        crossover_dhd_min(&pop[i], &pop[j], all, &mut rng)?
                    }
                }
            } else {
                (pop[i].clone(), pop[j].clone())
            };
            for mut child in [a, b] {
                match variant.mutation() {
                    MutationKind::BitFlip => mutate_bitflip(&mut child, rate, &mut rng),
                    MutationKind::Density => mutate_density(&mut child, rate, &fittest, &mut rng),
                }
                children.push(child);
            }
        }
        children.truncate(pop.len());
        repair_and_evaluate(&mut children, all, &fit)?;
        pop = replace_generational(pop, children);
        generation += 1;
        trace.push(point(&pop, generation));
    }

    let best = &pop[best_index(&pop)];
    let e = best.evaluation().expect("evaluated");
    let mut pairings: Vec<PairingId> = best.active_pairings().collect();
    pairings.sort_unstable();
    Ok(RunRecord {
        config: variant,
        seed: cfg.seed,
        best_cost_cents: e.fitness,
        pairing_cost_cents: e.cost,
        deadheads: e.deadheads,
        pairing_count: e.pairings,
        pairings,
        generations: generation,
        elapsed_sec: start.elapsed().as_secs_f64(),
        early,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ga::chromosome::Gene;
    use crate::testutil::toy_allpairs;

    fn scored(fitness_cost: Cents, all: &AllPairs, id: PairingId) -> Chromosome {
        let mut c = Chromosome::new(vec![Gene::new(true, id)], 1);
        let e = evaluate(&mut c, all, &FitnessConfig { dhd_penalty: 0 }).unwrap();
        assert_eq!(e.fitness, fitness_cost);
        c
    }

    fn ladder() -> AllPairs {
        toy_allpairs(1, &[(&[0], 100), (&[0], 200), (&[0], 300), (&[0], 400)])
    }

    #[test]
    fn worse_children_leave_parents_unchanged() {
        let all = ladder();
        let parents = vec![scored(100, &all, 0), scored(200, &all, 1)];
        let children = vec![scored(300, &all, 2), scored(400, &all, 3)];
        assert_eq!(replace_generational(parents.clone(), children), parents);
    }

    #[test]
    fn better_children_replace_everything() {
        let all = ladder();
        let parents = vec![scored(300, &all, 2), scored(400, &all, 3)];
        let children = vec![scored(200, &all, 1), scored(100, &all, 0)];
        let next = replace_generational(parents, children);
        assert_eq!(
            next.iter()
                .map(|c| c.fitness().unwrap())
                .collect::<Vec<_>>(),
            vec![100, 200]
        );
    }

    #[test]
    fn ties_keep_parents() {
        let all = toy_allpairs(1, &[(&[0], 100), (&[0], 100)]);
        let parents = vec![scored(100, &all, 0)];
        let children = vec![scored(100, &all, 1)];
        let next = replace_generational(parents.clone(), children);
        assert_eq!(next, parents);
    }

    fn small_allpairs() -> AllPairs {
        toy_allpairs(
            6,
            &[
                (&[0, 1], 300),
                (&[2, 3], 300),
                (&[4, 5], 300),
                (&[0, 1, 2], 350),
                (&[3, 4, 5], 350),
                (&[1, 2, 3], 200),
                (&[0], 150),
                (&[5], 150),
                (&[4], 120),
            ],
        )
    }

    #[test]
    fn zero_generations_returns_initial_best() {
        let all = small_allpairs();
        for variant in Variant::ALL {
            let cfg = GaConfig {
                termination: Termination::Generations(0),
                seed: Seed(4),
                ..GaConfig::with_variant(variant)
            };
            let r = run(&all, &cfg).unwrap();
            assert_eq!(r.generations, 0);
            assert_eq!(r.trace.len(), 1);
            assert_eq!(r.best_cost_cents, r.early.best_cost_cents);
        }
    }

    #[test]
    fn runs_are_reproducible_and_monotone() {
        let all = small_allpairs();
        for variant in Variant::ALL {
            let cfg = GaConfig {
                termination: Termination::Generations(15),
                seed: Seed(11),
                ..GaConfig::with_variant(variant)
            };
            let a = run_with_workers(&all, &cfg, Some(1)).unwrap();
            let b = run_with_workers(&all, &cfg, Some(3)).unwrap();
            assert_eq!(a.without_timing(), b.without_timing());
            assert_eq!(a.trace.len(), 16);
            assert!(a
                .trace
                .windows(2)
                .all(|w| w[1].best_cost_cents <= w[0].best_cost_cents));
            // cheapest cover: {1,2,3} + {0} + {4} + {5}
            assert!(a.best_cost_cents >= 620);
        }
    }

    #[test]
    fn trace_lookup() {
        let all = small_allpairs();
        let cfg = GaConfig {
            termination: Termination::Generations(3),
            ..GaConfig::default()
        };
        let r = run(&all, &cfg).unwrap();
        assert_eq!(r.trace_at(-1.0), None);
        assert_eq!(r.trace_at(f64::MAX).unwrap().generation, 3);
    }
}
