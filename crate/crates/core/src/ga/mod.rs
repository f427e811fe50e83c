//! The customized genetic algorithm.

mod chromosome;
mod config;
mod engine;
mod init;
mod operators;
mod repair;

pub use chromosome::{evaluate, Chromosome, Evaluation, FitnessConfig, Gene};
pub use config::{CrossoverKind, GaConfig, Initializer, MutationKind, Seed, Termination, Variant};
pub use engine::{replace_generational, run, run_with_workers, RunRecord, TracePoint};
pub use init::{dhd_min_initialize, random_initialize, random_population, UNEXPRESSED_MARGIN};
pub use operators::{
    crossover_dhd_min, crossover_fusion, mutate_bitflip, mutate_density, tournament_select,
};
pub use repair::{redundant_pairing_removal, repair, repair_coverage, QualityIndex};

pub(crate) use repair::best_by_quality_index;
