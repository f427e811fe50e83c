use serde::{Deserialize, Serialize};

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::{deadhead_count, Cents, PairingId};

/// Two-bit gene: whether the pairing takes part in the solution, and which
/// pairing of `AllPairs` the gene refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gene {
    pub selected: bool,
    pub pairing: PairingId,
}

impl Gene {
    pub fn new(selected: bool, pairing: PairingId) -> Self {
        Gene { selected, pairing }
    }
}

/// Cached result of [`evaluate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    /// Objective value: pairing costs plus deadhead penalties.
    pub fitness: Cents,
    /// Sum of the selected pairings' costs.
    pub cost: Cents,
    pub deadheads: u64,
    pub pairings: usize,
}

/// Fixed-length gene vector. The first `expressed_len` genes form the
/// expressed part; only selected genes there contribute to coverage and
/// fitness. The remaining genes are the unexpressed reservoir.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromosome {
    genes: Vec<Gene>,
    expressed_len: usize,
    eval: Option<Evaluation>,
}

impl Chromosome {
    pub fn new(genes: Vec<Gene>, expressed_len: usize) -> Self {
        assert!(
            expressed_len <= genes.len(),
            "expressed part longer than chromosome"
        );
        Chromosome {
            genes,
            expressed_len,
            eval: None,
        }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    pub fn genes(&self) -> &[Gene] {
        &self.genes
    }

    pub fn gene(&self, idx: usize) -> Gene {
        self.genes[idx]
    }

    pub fn expressed_len(&self) -> usize {
        self.expressed_len
    }

    pub fn expressed(&self) -> &[Gene] {
        &self.genes[..self.expressed_len]
    }

    pub fn unexpressed(&self) -> &[Gene] {
        &self.genes[self.expressed_len..]
    }

    pub fn set_selected(&mut self, idx: usize, selected: bool) {
        if self.genes[idx].selected != selected {
            self.genes[idx].selected = selected;
            self.eval = None;
        }
    }

    pub fn set_gene(&mut self, idx: usize, gene: Gene) {
        if self.genes[idx] != gene {
            self.genes[idx] = gene;
            self.eval = None;
        }
    }

    pub fn swap_genes(&mut self, a: usize, b: usize) {
        if a != b {
            self.genes.swap(a, b);
            self.eval = None;
        }
    }

    pub fn set_expressed_len(&mut self, len: usize) {
        assert!(len <= self.genes.len());
        if len != self.expressed_len {
            self.expressed_len = len;
            self.eval = None;
        }
    }

    /// Pairing ids of selected genes in the expressed part, in gene order.
    pub fn active_pairings(&self) -> impl Iterator<Item = PairingId> + '_ {
        self.expressed()
            .iter()
            .filter(|g| g.selected)
            .map(|g| g.pairing)
    }

    /// Fraction of genes (over the whole chromosome) whose first bit is set.
    pub fn density(&self) -> f64 {
        if self.genes.is_empty() {
            return 0.0;
        }
        self.genes.iter().filter(|g| g.selected).count() as f64 / self.genes.len() as f64
    }

    pub fn coverage_counts(&self, all: &AllPairs) -> Vec<u32> {
        let mut counts = vec![0u32; all.num_flights()];
        for p in self.active_pairings() {
            for f in all.get(p).flights() {
                counts[f] += 1;
            }
        }
        counts
    }

    pub fn is_feasible(&self, all: &AllPairs) -> bool {
        self.coverage_counts(all).iter().all(|&c| c > 0)
    }

    pub fn evaluation(&self) -> Option<Evaluation> {
        self.eval
    }

    pub fn fitness(&self) -> Option<Cents> {
        self.eval.map(|e| e.fitness)
    }
}

/// Fitness settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitnessConfig {
    /// Penalty charged per deadhead, in cents.
    pub dhd_penalty: Cents,
}

/// Computes and caches the fitness of a feasible chromosome.
pub fn evaluate(c: &mut Chromosome, all: &AllPairs, cfg: &FitnessConfig) -> Result<Evaluation> {
    if let Some(e) = c.eval {
        return Ok(e);
    }
    let counts = c.coverage_counts(all);
    let uncovered = counts.iter().filter(|&&n| n == 0).count();
    if uncovered > 0 {
        return Err(Error::InfeasibleChromosome { uncovered });
    }
    let (cost, pairings) = c
        .active_pairings()
        .fold((0, 0), |(sum, n), p| (sum + all.cost(p), n + 1));
    let deadheads = deadhead_count(&counts);
    let eval = Evaluation {
        fitness: cost + deadheads as Cents * cfg.dhd_penalty,
        cost,
        deadheads,
        pairings,
    };
    c.eval = Some(eval);
    Ok(eval)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::toy_allpairs;

    #[test]
    fn exact_cover_fitness_ignores_penalty() {
        // pairings 0 = {0,1} cost 400, 1 = {2,3} cost 600
        let all = toy_allpairs(4, &[(&[0, 1], 400), (&[2, 3], 600), (&[1, 2], 300)]);
        let mut c = Chromosome::new(vec![Gene::new(true, 0), Gene::new(true, 1)], 2);
        for penalty in [0, 100, 10_000] {
            c.set_expressed_len(2);
            c.eval = None;
            let e = evaluate(
                &mut c,
                &all,
                &FitnessConfig {
                    dhd_penalty: penalty,
                },
            )
            .unwrap();
            assert_eq!(e.fitness, 1000);
            assert_eq!(e.deadheads, 0);
        }
    }

    #[test]
    fn deadheads_are_penalized() {
        let all = toy_allpairs(4, &[(&[0, 1], 400), (&[2, 3], 600), (&[1, 2], 300)]);
        let mut c = Chromosome::new(
            vec![Gene::new(true, 0), Gene::new(true, 1), Gene::new(true, 2)],
            3,
        );
        let e = evaluate(&mut c, &all, &FitnessConfig { dhd_penalty: 100 }).unwrap();
        assert_eq!(e.deadheads, 2);
        assert_eq!(e.fitness, 1500);
        assert_eq!(c.fitness(), Some(1500));
    }

    #[test]
    fn infeasible_evaluation_is_an_error() {
        let all = toy_allpairs(4, &[(&[0, 1], 400), (&[2, 3], 600)]);
        let mut c = Chromosome::new(vec![Gene::new(true, 0), Gene::new(true, 1)], 1);
        assert!(matches!(
            evaluate(&mut c, &all, &FitnessConfig { dhd_penalty: 0 }),
            Err(Error::InfeasibleChromosome { uncovered: 2 })
        ));
    }

    #[test]
    fn unexpressed_genes_do_not_count() {
        let all = toy_allpairs(2, &[(&[0, 1], 400), (&[0, 1], 500)]);
        let mut c = Chromosome::new(vec![Gene::new(true, 0), Gene::new(true, 1)], 1);
        let e = evaluate(&mut c, &all, &FitnessConfig { dhd_penalty: 7 }).unwrap();
        assert_eq!(e.fitness, 400);
    }

    #[test]
    fn edits_invalidate_cache() {
        let all = toy_allpairs(2, &[(&[0, 1], 400), (&[0], 100), (&[1], 100)]);
        let mut c = Chromosome::new(
            vec![Gene::new(true, 0), Gene::new(false, 1), Gene::new(false, 2)],
            3,
        );
        evaluate(&mut c, &all, &FitnessConfig { dhd_penalty: 0 }).unwrap();
        c.set_selected(1, true);
        assert_eq!(c.fitness(), None);
    }
}
