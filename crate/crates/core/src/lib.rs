//! Crew pairing optimization toolkit.
//!
//! The pipeline is: load or synthesize an [`Instance`], enumerate every legal
//! pairing into an [`AllPairs`] set through a duty network, then search for a
//! minimum-cost cover with the deadhead-aware genetic algorithm in [`ga`].
//! [`oracle`] supplies exact and greedy references for small instances and
//! [`harness`] runs multi-seed experiments and reports statistics.

pub mod allpairs;
pub mod cli;
pub mod error;
pub mod ga;
pub mod harness;
pub mod io;
pub mod legality;
pub mod model;
pub mod network;
pub mod oracle;

#[cfg(test)]
mod testutil;

pub use allpairs::AllPairs;
pub use error::{Error, Result};
pub use model::{
    coverage_counts, deadhead_count, pairing_cost, Cents, CostModel, Duty, Flight, FlightId,
    Instance, LegalityRules, Minutes, Pairing, PairingId,
};
pub use network::{enumerate_duties, enumerate_pairings, ConnectionGraph};
