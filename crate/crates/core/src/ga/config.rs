use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::Cents;

/// The four operator combinations compared in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Variant {
    /// Random initialization, bit-flip mutation, fusion crossover.
    GA1,
    /// Deadhead-minimizing initialization, bit-flip mutation, fusion crossover.
    GA2,
    /// Deadhead-minimizing initialization, density mutation, fusion crossover.
    GA3,
    /// Deadhead-minimizing initialization, density mutation, deadhead-minimizing crossover.
    GA4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initializer {
    Random,
    DeadheadMin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationKind {
    BitFlip,
    Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverKind {
    Fusion,
    DeadheadMin,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::GA1, Variant::GA2, Variant::GA3, Variant::GA4];

    pub fn initializer(self) -> Initializer {
        match self {
            Variant::GA1 => Initializer::Random,
            _ => Initializer::DeadheadMin,
        }
    }

    pub fn mutation(self) -> MutationKind {
        match self {
            Variant::GA1 | Variant::GA2 => MutationKind::BitFlip,
            Variant::GA3 | Variant::GA4 => MutationKind::Density,
        }
    }

    pub fn crossover(self) -> CrossoverKind {
        match self {
            Variant::GA4 => CrossoverKind::DeadheadMin,
            _ => CrossoverKind::Fusion,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "GA1" => Ok(Variant::GA1),
            "GA2" => Ok(Variant::GA2),
            "GA3" => Ok(Variant::GA3),
            "GA4" => Ok(Variant::GA4),
            _ => Err(Error::InvalidConfig(format!(
                "unknown GA configuration {s:?}"
            ))),
        }
    }
}

/// When a run stops. Checked only between generations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Termination {
    /// Wall-clock budget.
    Seconds(f64),
    /// Generation cap; runs terminated this way are reproducible bit for bit.
    Generations(u64),
}

/// A random seed. Integers are used as-is; a float in `[0, 1)` is scaled to
/// the full 64-bit range (`floor(x * 2^64)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Seed(pub u64);

impl Seed {
    pub fn from_unit(x: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&x) {
            return Err(Error::InvalidConfig(format!(
                "float seed {x} outside [0, 1)"
            )));
        }
        Ok(Seed((x * 18_446_744_073_709_551_616.0) as u64))
    }
}

impl FromStr for Seed {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(n) = s.parse::<u64>() {
            return Ok(Seed(n));
        }
        match s.parse::<f64>() {
            Ok(x) => Seed::from_unit(x),
            Err(_) => Err(Error::InvalidConfig(format!("bad seed {s:?}"))),
        }
    }
}

impl Serialize for Seed {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0)
    }
}

impl<'de> Deserialize<'de> for Seed {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        if let Some(v) = n.as_u64() {
            Ok(Seed(v))
        } else {
            let x = n.as_f64().unwrap_or(f64::NAN);
            Seed::from_unit(x).map_err(serde::de::Error::custom)
        }
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parameters of one GA run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaConfig {
    pub config: Variant,
    pub population_size: usize,
    pub termination: Termination,
    pub crossover_rate: f64,
    /// Mutation probability per gene is this factor divided by the chromosome length.
    pub mutation_rate_factor: f64,
    pub dhd_penalty_cents: Cents,
    pub seed: Seed,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            config: Variant::GA4,
            population_size: 24,
            termination: Termination::Seconds(5000.0),
            crossover_rate: 0.9,
            mutation_rate_factor: 3.0,
            dhd_penalty_cents: 25_000,
            seed: Seed(0),
        }
    }
}

impl GaConfig {
    pub fn with_variant(variant: Variant) -> Self {
        GaConfig {
            config: variant,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 {
            return Err(Error::InvalidConfig(
                "population_size must be at least 2".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::InvalidConfig(format!(
                "crossover_rate {} outside [0, 1]",
                self.crossover_rate
            )));
        }
        if !(self.mutation_rate_factor >= 0.0 && self.mutation_rate_factor.is_finite()) {
            return Err(Error::InvalidConfig(
                "mutation_rate_factor must be finite and >= 0".into(),
            ));
        }
        if self.dhd_penalty_cents < 0 {
            return Err(Error::InvalidConfig(
                "dhd_penalty_cents must be >= 0".into(),
            ));
        }
        if let Termination::Seconds(s) = self.termination {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::InvalidConfig(format!("bad time budget {s}")));
            }
        }
        Ok(())
    }

    pub fn fitness(&self) -> super::FitnessConfig {
        super::FitnessConfig {
            dhd_penalty: self.dhd_penalty_cents,
        }
    }
}
