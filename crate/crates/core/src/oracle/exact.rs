//! Branch-and-bound for the penalized set-covering objective.
//!
//! With `k_i` the number of selected pairings covering flight `i`, a cover
//! costs `sum c_j + p * sum (k_i - 1)`. Since `sum k_i = sum |S_j|`, this is
//! `sum (c_j + p |S_j|) - p F`: a weighted set cover with weights
//! `w_j = c_j + p |S_j|`, which is what the search minimizes.

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::{Cents, PairingId};

use super::greedy::solve_greedy;
use super::Solution;

/// Largest AllPairs accepted without an explicit override.
pub const DEFAULT_MAX_PAIRINGS: usize = 5000;

/// Exact optimum of the penalized objective, guarded by
/// [`DEFAULT_MAX_PAIRINGS`].
pub fn solve_exact(all: &AllPairs, penalty: Cents) -> Result<Solution> {
    solve_exact_with_limit(all, penalty, DEFAULT_MAX_PAIRINGS)
}

pub fn solve_exact_with_limit(
    all: &AllPairs,
    penalty: Cents,
    max_pairings: usize,
) -> Result<Solution> {
    if all.len() > max_pairings {
        return Err(Error::TooLarge {
            pairings: all.len(),
            limit: max_pairings,
        });
    }
    if penalty < 0 {
        return Err(Error::InvalidConfig("deadhead penalty must be >= 0".into()));
    }
    all.ensure_coverable()?;

    let weights: Vec<Cents> = all
        .pairings()
        .iter()
        .map(|p| p.cost + penalty * p.num_flights() as Cents)
        .collect();
    let incumbent = solve_greedy(all, penalty)?;
    let mut search = Search {
        all,
        weights: &weights,
        counts: vec![0; all.num_flights()],
        excluded: vec![false; all.len()],
        slack: vec![0.0; all.len()],
        chosen: Vec::new(),
        best_weight: incumbent.pairings.iter().map(|&p| weights[p]).sum(),
        best: incumbent.pairings.clone(),
    };
    search.branch(0, None);
    Ok(Solution::from_selection(all, penalty, search.best))
}

/// Subgradient iterations at the root and at every other node.
const ROOT_ITERATIONS: usize = 400;
const NODE_ITERATIONS: usize = 30;

/// Bound information at a search node.
struct Node {
    /// Uncovered flight with the fewest usable candidates.
    flight: usize,
    /// Lower bound on the weight needed to cover the uncovered flights.
    bound: f64,
    /// Flight prices achieving `bound`, for warm-starting children.
    prices: Vec<f64>,
}

struct Search<'a> {
    all: &'a AllPairs,
    weights: &'a [Cents],
    counts: Vec<u32>,
    excluded: Vec<bool>,
    /// Reduced weight of each usable pairing at the node's best prices.
    slack: Vec<f64>,
    chosen: Vec<PairingId>,
    best_weight: Cents,
    best: Vec<PairingId>,
}

impl Search<'_> {
    fn newly(&self, p: PairingId) -> usize {
        self.all
            .get(p)
            .flights()
            .filter(|&f| self.counts[f] == 0)
            .count()
    }

    fn usable<'s>(&'s self, f: usize) -> impl Iterator<Item = PairingId> + 's {
        self.all
            .covering(f)
            .iter()
            .copied()
            .filter(|&p| !self.excluded[p])
    }

    /// Lagrangian bound over the uncovered flights.
    ///
    /// With a price `u_i >= 0` per uncovered flight, any cover of them
    /// weighs at least `sum u_i + sum_j min(0, w_j - sum_{i in S_j} u_i)`.
    /// Prices start from `warm` (or, at the root, from each flight's
    /// cheapest per-flight share) and are improved by subgradient steps.
    /// Leaves the reduced weights of the best prices in `slack`.
    /// `Ok(None)` means every flight is covered; `Err` that some uncovered
    /// flight has no usable pairing.
    fn price(&mut self, warm: Option<&[f64]>, weight: Cents) -> Result<Option<Node>, ()> {
        let mut open: Vec<(usize, usize)> = Vec::new();
        for f in 0..self.counts.len() {
            if self.counts[f] == 0 {
                let n = self.usable(f).count();
                if n == 0 {
                    return Err(());
                }
                open.push((n, f));
            }
        }
        let Some(&(_, flight)) = open.iter().min() else {
            return Ok(None);
        };

        let mut columns: Vec<PairingId> = open.iter().flat_map(|&(_, f)| self.usable(f)).collect();
        columns.sort_unstable();
        columns.dedup();
        let rows: Vec<Vec<usize>> = columns
            .iter()
            .map(|&p| {
                self.all
                    .get(p)
                    .flights()
                    .filter(|&f| self.counts[f] == 0)
                    .collect()
            })
            .collect();

        let mut u = vec![0.0; self.counts.len()];
        match warm {
            Some(w) => open.iter().for_each(|&(_, f)| u[f] = w[f]),
            None => {
                for (k, &p) in columns.iter().enumerate() {
                    let share = self.weights[p] as f64 / rows[k].len() as f64;
                    for &f in &rows[k] {
                        u[f] = if u[f] == 0.0 { share } else { u[f].min(share) };
                    }
                }
            }
        }

        let iterations = if warm.is_some() {
            NODE_ITERATIONS
        } else {
            ROOT_ITERATIONS
        };
        let target = (self.best_weight - weight) as f64;
        let mut step_scale = 2.0;
        let mut stalled = 0;
        let mut best = (f64::NEG_INFINITY, u.clone());
        let mut reduced = vec![0.0; columns.len()];
        let mut gradient = vec![0.0; self.counts.len()];
        for _ in 0..=iterations {
            let mut value: f64 = open.iter().map(|&(_, f)| u[f]).sum();
            open.iter().for_each(|&(_, f)| gradient[f] = 1.0);
            for (k, &p) in columns.iter().enumerate() {
                let rc = self.weights[p] as f64 - rows[k].iter().map(|&f| u[f]).sum::<f64>();
                reduced[k] = rc;
                if rc < 0.0 {
                    value += rc;
                    rows[k].iter().for_each(|&f| gradient[f] -= 1.0);
                }
            }
            if value > best.0 + 1e-9 {
                best = (value, u.clone());
                for (k, &p) in columns.iter().enumerate() {
                    self.slack[p] = reduced[k];
                }
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= 5 {
                    step_scale /= 2.0;
                    stalled = 0;
                }
            }
            let norm: f64 = open.iter().map(|&(_, f)| gradient[f] * gradient[f]).sum();
            if norm == 0.0 || value >= target {
                break;
            }
            let step = step_scale * (target - value).max(1.0) / norm;
            for &(_, f) in &open {
                u[f] = (u[f] + step * gradient[f]).max(0.0);
            }
        }
        Ok(Some(Node {
            flight,
            bound: best.0,
            prices: best.1,
        }))
    }

    /// Whether a completion of estimated total `estimate` could still beat
    /// the incumbent by at least one cent.
    fn promising(&self, estimate: f64) -> bool {
        estimate <= self.best_weight as f64 - 1.0 + 1e-6
    }

    fn branch(&mut self, weight: Cents, warm: Option<&[f64]>) {
        let node = match self.price(warm, weight) {
            Err(()) => return,
            Ok(None) => {
                if weight < self.best_weight {
                    self.best_weight = weight;
                    self.best = self.chosen.clone();
                }
                return;
            }
            Ok(Some(node)) => node,
        };
        let base = weight as f64 + node.bound;
        if !self.promising(base) {
            return;
        }

        // a pairing forced into the cover adds at least its reduced weight
        let mut options: Vec<(PairingId, usize)> = self
            .usable(node.flight)
            .filter(|&p| self.promising(base + self.slack[p].max(0.0)))
            .map(|p| (p, self.newly(p)))
            .collect();
        options.sort_by(|&(a, na), &(b, nb)| {
            (i128::from(self.weights[a]) * nb as i128)
                .cmp(&(i128::from(self.weights[b]) * na as i128))
                .then(a.cmp(&b))
        });

        let mut barred = Vec::with_capacity(options.len());
        for (p, _) in options {
            self.all.get(p).flights().for_each(|f| self.counts[f] += 1);
            self.chosen.push(p);
            self.branch(weight + self.weights[p], Some(&node.prices));
            self.chosen.pop();
            self.all.get(p).flights().for_each(|f| self.counts[f] -= 1);
            // later siblings must cover the flight some other way
            self.excluded[p] = true;
            barred.push(p);
        }
        for p in barred {
            self.excluded[p] = false;
        }
    }
}
