//! Per-configuration statistics and gaps against a reference cost.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{RunRecord, Variant};
use crate::model::Cents;

/// Mean, sample standard deviation and extremes of a set of integers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub n: usize,
    pub mean: f64,
    /// Sample (n - 1) standard deviation; zero for a single value.
    pub std_dev: f64,
    pub best: i64,
    pub worst: i64,
}

impl Stats {
    /// Computed from exact integer sums, so the result does not depend on
    /// the order of `values`. Panics on an empty slice.
    pub fn of(values: &[i64]) -> Stats {
        assert!(!values.is_empty(), "statistics of no values");
        let n = values.len() as i128;
        let sum: i128 = values.iter().map(|&v| v as i128).sum();
        let squares: i128 = values.iter().map(|&v| (v as i128) * (v as i128)).sum();
        let std_dev = if n > 1 {
            // n * sum(x^2) - (sum x)^2 = n (n - 1) s^2
            let scaled = n * squares - sum * sum;
            (scaled as f64 / (n * (n - 1)) as f64).sqrt()
        } else {
            0.0
        };
        Stats {
            n: values.len(),
            mean: sum as f64 / n as f64,
            std_dev,
            best: *values.iter().min().unwrap(),
            worst: *values.iter().max().unwrap(),
        }
    }
}

/// Which point of a run a summary row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    /// Best of the initial population.
    Initial,
    /// Best at the end of the run.
    Final,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub config: Variant,
    pub phase: Phase,
    /// Fitness in cents: pairing costs plus deadhead penalties.
    pub cost: Stats,
    pub deadheads: Stats,
}

/// One initial and one final row per configuration, ordered by
/// configuration then phase.
pub fn summarize(records: &[RunRecord]) -> Vec<SummaryRow> {
    let mut configs: Vec<Variant> = records.iter().map(|r| r.config).collect();
    configs.sort();
    configs.dedup();
    let mut rows = Vec::with_capacity(2 * configs.len());
    for config in configs {
        let runs: Vec<&RunRecord> = records.iter().filter(|r| r.config == config).collect();
        let stat =
            |f: fn(&RunRecord) -> i64| Stats::of(&runs.iter().map(|r| f(r)).collect::<Vec<_>>());
        rows.push(SummaryRow {
            config,
            phase: Phase::Initial,
            cost: stat(|r| r.early.best_cost_cents),
            deadheads: stat(|r| r.early.best_deadheads as i64),
        });
        rows.push(SummaryRow {
            config,
            phase: Phase::Final,
            cost: stat(|r| r.best_cost_cents),
            deadheads: stat(|r| r.deadheads as i64),
        });
    }
    rows
}

/// `(best - reference) / reference * 100`, rounded half away from zero to
/// two decimals.
pub fn gap_percent(best: Cents, reference: Cents) -> Result<f64> {
    if reference <= 0 {
        return Err(Error::NonPositiveReference(reference));
    }
    let num = (best as i128 - reference as i128) * 10_000;
    let den = reference as i128;
    let hundredths = (2 * num.abs() + den) / (2 * den) * num.signum();
    Ok(hundredths as f64 / 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub config: Variant,
    pub best_cost_cents: Cents,
    pub reference_cents: Cents,
    pub gap_percent: f64,
}

/// Gap of each configuration's best run, ordered by configuration.
pub fn gap_report(records: &[RunRecord], reference: Cents) -> Result<Vec<GapRow>> {
    if reference <= 0 {
        return Err(Error::NonPositiveReference(reference));
    }
    let mut configs: Vec<Variant> = records.iter().map(|r| r.config).collect();
    configs.sort();
    configs.dedup();
    configs
        .into_iter()
        .map(|config| {
            let best = records
                .iter()
                .filter(|r| r.config == config)
                .map(|r| r.best_cost_cents)
                .min()
                .unwrap();
            Ok(GapRow {
                config,
                best_cost_cents: best,
                reference_cents: reference,
                gap_percent: gap_percent(best, reference)?,
            })
        })
        .collect()
}
