use crate::error::{Error, Result};
use crate::model::{FlightId, Pairing, PairingId};

/// The explicitly enumerated set of legal pairings for one instance, with an
/// index from each flight to the pairings covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AllPairs {
    num_flights: usize,
    pairings: Vec<Pairing>,
    by_flight: Vec<Vec<PairingId>>,
}

impl AllPairs {
    /// Pairing ids must be dense `0..len` in order, and every flight id below
    /// `num_flights`.
    pub fn new(num_flights: usize, pairings: Vec<Pairing>) -> Result<Self> {
        let mut by_flight = vec![Vec::new(); num_flights];
        for (idx, p) in pairings.iter().enumerate() {
            if p.id != idx {
                return Err(Error::InvalidInstance(format!(
                    "pairing ids must be dense; position {idx} holds id {}",
                    p.id
                )));
            }
            if p.duties.is_empty() || p.duties.iter().any(|d| d.flights.is_empty()) {
                return Err(Error::InvalidInstance(format!(
                    "pairing {idx} has an empty duty"
                )));
            }
            for f in p.flights() {
                if f >= num_flights {
                    return Err(Error::InvalidInstance(format!(
                        "pairing {idx} references flight {f} outside 0..{num_flights}"
                    )));
                }
                by_flight[f].push(idx);
            }
        }
        Ok(AllPairs {
            num_flights,
            pairings,
            by_flight,
        })
    }

    pub fn num_flights(&self) -> usize {
        self.num_flights
    }

    pub fn len(&self) -> usize {
        self.pairings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairings.is_empty()
    }

    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn get(&self, id: PairingId) -> &Pairing {
        &self.pairings[id]
    }

    pub fn cost(&self, id: PairingId) -> i64 {
        self.pairings[id].cost
    }

    /// Pairings covering `flight`, in ascending id order.
    pub fn covering(&self, flight: FlightId) -> &[PairingId] {
        &self.by_flight[flight]
    }

    /// Flights that no pairing covers.
    pub fn uncoverable(&self) -> Vec<FlightId> {
        (0..self.num_flights)
            .filter(|&f| self.by_flight[f].is_empty())
            .collect()
    }

    pub fn ensure_coverable(&self) -> Result<()> {
        let missing = self.uncoverable();
        if missing.is_empty() {
            Ok(())
        } else {
            Err(Error::Uncoverable(missing))
        }
    }

    /// Flight list of each pairing, as a vector of vectors. Handy for hot loops.
    pub fn flight_lists(&self) -> Vec<Vec<FlightId>> {
        self.pairings
            .iter()
            .map(|p| p.flights().collect())
            .collect()
    }
}
