//! Feasibility repair driven by the quality index, followed by
//! redundant-pairing removal.

use std::cmp::Ordering;

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::{Cents, PairingId};

use super::chromosome::{Chromosome, Gene};

/// Quality index `cost / newly_covered`, compared exactly by cross
/// multiplication. A pairing covering nothing new has an infinite index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QualityIndex {
    pub cost: Cents,
    pub newly_covered: usize,
}

impl QualityIndex {
    pub fn new(cost: Cents, newly_covered: usize) -> Self {
        QualityIndex {
            cost,
            newly_covered,
        }
    }

    pub fn value(&self) -> f64 {
        if self.newly_covered == 0 {
            f64::INFINITY
        } else {
            self.cost as f64 / self.newly_covered as f64
        }
    }
}

impl Ord for QualityIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.newly_covered, other.newly_covered) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Greater,
            (_, 0) => Ordering::Less,
            (a, b) => {
                (i128::from(self.cost) * b as i128).cmp(&(i128::from(other.cost) * a as i128))
            }
        }
    }
}

impl PartialOrd for QualityIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Among pairings covering at least one uncovered flight, the one with the
/// lowest quality index; ties go to the lower cost, then the lower id.
///
/// `counts` holds current per-flight coverage. `allowed`, when given,
/// restricts the candidates.
pub(crate) fn best_by_quality_index(
    all: &AllPairs,
    counts: &[u32],
    allowed: Option<&[bool]>,
) -> Option<PairingId> {
    let mut seen = vec![false; all.len()];
    let mut best: Option<(PairingId, usize)> = None;
    for f in (0..counts.len()).filter(|&f| counts[f] == 0) {
        for &p in all.covering(f) {
            if seen[p] || !allowed.map_or(true, |a| a[p]) {
                continue;
            }
            seen[p] = true;
            let newly = all.get(p).flights().filter(|&g| counts[g] == 0).count();
            let better = match best {
                None => true,
                Some((q, nq)) => QualityIndex::new(all.cost(p), newly)
                    .cmp(&QualityIndex::new(all.cost(q), nq))
                    .then(all.cost(p).cmp(&all.cost(q)))
                    .then(p.cmp(&q))
                    .is_lt(),
            };
            if better {
                best = Some((p, newly));
            }
        }
    }
    best.map(|(p, _)| p)
}

/// Makes `pairing` active inside the chromosome.
///
/// An inactive expressed gene holding the pairing is switched on. Otherwise
/// the expressed part grows by one: a gene holding the pairing in the
/// unexpressed part is swapped to the front of that part, or else the first
/// unexpressed gene is overwritten. With no unexpressed gene left, the
/// inactive expressed gene with the highest quality index is overwritten.
fn activate(c: &mut Chromosome, all: &AllPairs, counts: &[u32], pairing: PairingId) -> Result<()> {
    let e = c.expressed_len();
    if let Some(i) = c
        .expressed()
        .iter()
        .position(|g| g.pairing == pairing && !g.selected)
    {
        c.set_selected(i, true);
        return Ok(());
    }
    if e < c.len() {
        if let Some(off) = c.unexpressed().iter().position(|g| g.pairing == pairing) {
            c.swap_genes(e, e + off);
        }
        c.set_gene(e, Gene::new(true, pairing));
        c.set_expressed_len(e + 1);
        return Ok(());
    }
    let newly = |p: PairingId| all.get(p).flights().filter(|&f| counts[f] == 0).count();
    let victim = c
        .expressed()
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.selected)
        .max_by(|(i, a), (j, b)| {
            QualityIndex::new(all.cost(a.pairing), newly(a.pairing))
                .cmp(&QualityIndex::new(all.cost(b.pairing), newly(b.pairing)))
                // prefer the lowest index among equals
                .then(j.cmp(i))
        })
        .map(|(i, _)| i);
    match victim {
        Some(i) => {
            c.set_gene(i, Gene::new(true, pairing));
            Ok(())
        }
        None => Err(Error::ChromosomeFull { length: c.len() }),
    }
}

/// Activates minimum-quality-index pairings until every flight is covered.
/// No redundant-pairing removal.
pub fn repair_coverage(c: &mut Chromosome, all: &AllPairs) -> Result<()> {
    let mut counts = c.coverage_counts(all);
    if counts.iter().all(|&n| n > 0) {
        return Ok(());
    }
    all.ensure_coverable()?;
    while let Some(p) = best_by_quality_index(all, &counts, None) {
        activate(c, all, &counts, p)?;
        counts = c.coverage_counts(all);
    }
    Ok(())
}

/// Switches off, in gene order, every active expressed pairing whose flights
/// all remain covered without it. The result is 1-minimal.
pub fn redundant_pairing_removal(c: &mut Chromosome, all: &AllPairs) {
    let mut counts = c.coverage_counts(all);
    for i in 0..c.expressed_len() {
        let g = c.gene(i);
        if !g.selected {
            continue;
        }
        let pairing = all.get(g.pairing);
        if pairing.flights().all(|f| counts[f] >= 2) {
            for f in pairing.flights() {
                counts[f] -= 1;
            }
            c.set_selected(i, false);
        }
    }
}

/// Full repair: restore coverage, then drop redundant pairings.
pub fn repair(c: &mut Chromosome, all: &AllPairs) -> Result<()> {
    repair_coverage(c, all)?;
    redundant_pairing_removal(c, all);
    Ok(())
}
