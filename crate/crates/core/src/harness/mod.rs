//! Multi-seed, multi-configuration experiments over one instance.

mod report;
mod stats;

pub use report::{gaps_csv, records_json, summary_csv, summary_text, trace_csv, trace_file_name};
pub use stats::{gap_percent, gap_report, summarize, GapRow, Phase, Stats, SummaryRow};

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::ga::{run, GaConfig, RunRecord, Seed, Termination, Variant};
use crate::io::{load_instance, read_allpairs, read_json};
use crate::model::Cents;
use crate::network::{enumerate_pairings, ConnectionGraph};
use crate::oracle::{generate_instance, solve_exact, solve_greedy, SyntheticSpec};

/// Where the instance of an experiment comes from. Relative paths are
/// resolved against the plan file's directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSource {
    /// A previously enumerated AllPairs file.
    Allpairs(PathBuf),
    /// A schedule CSV plus instance configuration, enumerated on load.
    Files {
        schedule: PathBuf,
        rules: PathBuf,
        #[serde(default)]
        cost_model: Option<PathBuf>,
    },
    Synthetic(SyntheticSpec),
}

/// Cost that gaps are measured against.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Exact optimum from the branch-and-bound oracle.
    Oracle,
    #[default]
    Greedy,
    /// A solution or run-record JSON file; its `objective_cents` or
    /// `best_cost_cents` field is used.
    External(PathBuf),
    /// A fixed cost in cents.
    Cents(Cents),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentPlan {
    pub instance: InstanceSource,
    pub configurations: Vec<Variant>,
    pub seeds: Vec<Seed>,
    pub budget: Termination,
    #[serde(default)]
    pub reference: Reference,
    /// Template for every run; `config`, `seed` and `termination` are
    /// replaced per run.
    #[serde(default)]
    pub ga: GaConfig,
    /// Cap on concurrent runs; `None` uses every core.
    #[serde(default)]
    pub workers: Option<usize>,
}

/// Outcome of one (configuration, seed) run.
#[derive(Debug)]
pub struct RunOutcome {
    pub config: Variant,
    pub seed: Seed,
    pub result: Result<RunRecord>,
}

impl ExperimentPlan {
    pub fn load(path: &Path) -> Result<Self> {
        let mut plan: ExperimentPlan = read_json(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        plan.resolve_paths(base);
        Ok(plan)
    }

    /// Makes relative paths relative to `base`.
    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        match &mut self.instance {
            InstanceSource::Allpairs(p) => fix(p),
            InstanceSource::Files {
                schedule,
                rules,
                cost_model,
            } => {
                fix(schedule);
                fix(rules);
                if let Some(c) = cost_model {
                    fix(c);
                }
            }
            InstanceSource::Synthetic(_) => {}
        }
        if let Reference::External(p) = &mut self.reference {
            fix(p);
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_runs()?;
        self.run_config(self.configurations[0], self.seeds[0])
            .validate()
    }

    /// Checks the run list and worker count but not the GA parameters,
    /// whose errors surface per run.
    pub fn validate_runs(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::InvalidConfig("plan needs at least one seed".into()));
        }
        if self.configurations.is_empty() {
            return Err(Error::InvalidConfig(
                "plan needs at least one configuration".into(),
            ));
        }
        let distinct: BTreeSet<_> = self.configurations.iter().collect();
        if distinct.len() != self.configurations.len() {
            return Err(Error::InvalidConfig(
                "duplicate configuration in plan".into(),
            ));
        }
        let seeds: BTreeSet<_> = self.seeds.iter().collect();
        if seeds.len() != self.seeds.len() {
            return Err(Error::InvalidConfig("duplicate seed in plan".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// GA parameters of one run.
    pub fn run_config(&self, config: Variant, seed: Seed) -> GaConfig {
        GaConfig {
            config,
            seed,
            termination: self.budget,
            ..self.ga.clone()
        }
    }

    /// Loads or generates the instance and enumerates its pairings.
    pub fn load_allpairs(&self) -> Result<AllPairs> {
        let inst = match &self.instance {
            InstanceSource::Allpairs(path) => {
                let (_, all) = read_allpairs(path)?;
                all.ensure_coverable()?;
                return Ok(all);
            }
            InstanceSource::Files {
                schedule,
                rules,
                cost_model,
            } => load_instance(schedule, rules, cost_model.as_deref())?,
            InstanceSource::Synthetic(spec) => generate_instance(spec)?,
        };
        enumerate_pairings(&inst, &ConnectionGraph::for_instance(&inst), self.workers)
    }

    /// The reference cost and a label naming where it came from.
    pub fn reference_cost(&self, all: &AllPairs) -> Result<(Cents, String)> {
        reference_cost(&self.reference, self.ga.dhd_penalty_cents, Some(all))
    }
}

/// Resolves a reference to a cost in cents plus a label. `Oracle` and
/// `Greedy` solve `all` with deadhead penalty `penalty`.
pub fn reference_cost(
    reference: &Reference,
    penalty: Cents,
    all: Option<&AllPairs>,
) -> Result<(Cents, String)> {
    let need = || {
        all.ok_or_else(|| Error::InvalidConfig("oracle and greedy references need pairings".into()))
    };
    match reference {
        Reference::Oracle => Ok((
            solve_exact(need()?, penalty)?.objective_cents,
            "oracle".into(),
        )),
        Reference::Greedy => Ok((
            solve_greedy(need()?, penalty)?.objective_cents,
            "greedy".into(),
        )),
        Reference::Cents(c) => Ok((*c, "fixed".into())),
        Reference::External(path) => {
            let value: serde_json::Value = read_json(path)?;
            let cents = ["objective_cents", "best_cost_cents"]
                .iter()
                .find_map(|k| value.get(*k).and_then(|v| v.as_i64()))
                .ok_or_else(|| {
                    Error::parse(path, 1, "no objective_cents or best_cost_cents field")
                })?;
            Ok((cents, format!("external:{}", path.display())))
        }
    }
}

/// Runs every (configuration, seed) pair of the plan, concurrently up to
/// `plan.workers`. A failing run does not stop the others. Outcomes are
/// sorted by (configuration, seed).
pub fn run_experiment(plan: &ExperimentPlan, all: &AllPairs) -> Result<Vec<RunOutcome>> {
    plan.validate_runs()?;
    let mut jobs: Vec<(Variant, Seed)> = plan
        .configurations
        .iter()
        .flat_map(|&c| plan.seeds.iter().map(move |&s| (c, s)))
        .collect();
    jobs.sort();

    let execute = || -> Vec<RunOutcome> {
        jobs.par_iter()
            .map(|&(config, seed)| {
                let result = run(all, &plan.run_config(config, seed));
                if let Err(e) = &result {
                    log::warn!("run {config} seed {seed} failed: {e}");
                }
                RunOutcome {
                    config,
                    seed,
                    result,
                }
            })
            .collect()
    };
    match plan.workers {
        Some(w) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(execute)),
        None => Ok(execute()),
    }
}
