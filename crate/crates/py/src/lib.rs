//! Python bindings: instances, pairing enumeration, the GA, the reference
//! solvers and the experiment statistics. Structured results cross the
//! boundary as plain dicts and lists.

use std::path::PathBuf;

use crewpair::ga::{self, GaConfig, RunRecord, Seed, Termination, Variant};
use crewpair::harness;
use crewpair::io;
use crewpair::oracle::{self, SyntheticSpec};
use crewpair::{ConnectionGraph, Error};
use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Converts any serializable value to Python objects through `json.loads`.
fn to_python<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    Ok(PyModule::import(py, "json")?.call_method1("loads", (text,))?.unbind())
}

/// A crew pairing problem: flights, bases, legality rules and cost model.
#[pyclass(name = "Instance", module = "pycrewpair", frozen)]
struct PyInstance {
    inner: crewpair::Instance,
}

#[pymethods]
impl PyInstance {
    /// Seeded synthetic instance.
    #[staticmethod]
    #[pyo3(signature = (num_flights, num_airports, num_bases, seed, days=3, hub_factor=0.2))]
    fn synthetic(
        num_flights: usize,
        num_airports: usize,
        num_bases: usize,
        seed: u64,
        days: u32,
        hub_factor: f64,
    ) -> PyResult<Self> {
        let spec = SyntheticSpec {
            time_horizon_days: days,
            hub_factor,
            ..SyntheticSpec::new(num_flights, num_airports, num_bases, seed)
        };
        let inner = oracle::generate_instance(&spec).map_err(to_py_err)?;
        Ok(PyInstance { inner })
    }

    /// Loads a schedule CSV plus a rules JSON file and an optional cost model.
    #[staticmethod]
    #[pyo3(signature = (schedule, rules, cost_model=None))]
    fn load(schedule: PathBuf, rules: PathBuf, cost_model: Option<PathBuf>) -> PyResult<Self> {
        let inner = io::load_instance(&schedule, &rules, cost_model.as_deref()).map_err(to_py_err)?;
        Ok(PyInstance { inner })
    }

    #[getter]
    fn num_flights(&self) -> usize {
        self.inner.num_flights()
    }

    #[getter]
    fn bases(&self) -> Vec<String> {
        self.inner.bases.clone()
    }

    fn schedule_csv(&self) -> String {
        io::schedule_to_csv(&self.inner.flights)
    }

    /// Every legal pairing. Raises ValueError if some flight cannot be covered
    /// unless `lenient` is set.
    #[pyo3(signature = (workers=None, lenient=false))]
    fn enumerate(&self, py: Python<'_>, workers: Option<usize>, lenient: bool) -> PyResult<PyAllPairs> {
        let inst = &self.inner;
        let all = py
            .detach(|| {
                let graph = ConnectionGraph::for_instance(inst);
                if lenient {
                    crewpair::network::enumerate_pairings_lenient(inst, &graph, workers)
                } else {
                    crewpair::enumerate_pairings(inst, &graph, workers)
                }
            })
            .map_err(to_py_err)?;
        Ok(PyAllPairs { inner: all })
    }

    fn __repr__(&self) -> String {
        format!("Instance(flights={}, bases={:?})", self.inner.num_flights(), self.inner.bases)
    }
}

/// The enumerated set of legal pairings.
#[pyclass(name = "AllPairs", module = "pycrewpair", frozen)]
struct PyAllPairs {
    inner: crewpair::AllPairs,
}

#[pymethods]
impl PyAllPairs {
    /// Reads a pairings JSONL file written by the toolkit.
    #[staticmethod]
    fn load(path: PathBuf) -> PyResult<Self> {
        let (_, inner) = io::read_allpairs(&path).map_err(to_py_err)?;
        Ok(PyAllPairs { inner })
    }

    #[getter]
    fn num_flights(&self) -> usize {
        self.inner.num_flights()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn uncoverable(&self) -> Vec<usize> {
        self.inner.uncoverable()
    }

    /// Pairings as dicts with id, base, duties and cost_cents.
    fn pairings(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        let records: Vec<io::PairingRecord> =
            self.inner.pairings().iter().map(io::PairingRecord::from_pairing).collect();
        to_python(py, &records)
    }

    fn to_jsonl(&self) -> String {
        io::allpairs_to_jsonl(&self.inner, "")
    }

    fn __repr__(&self) -> String {
        format!("AllPairs(flights={}, pairings={})", self.inner.num_flights(), self.inner.len())
    }
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    Variant::ALL
        .iter()
        .copied()
        .find(|v| v.to_string().eq_ignore_ascii_case(name))
        .ok_or_else(|| PyValueError::new_err(format!("unknown configuration {name:?}")))
}

/// Runs the GA and returns its run record. Give exactly one of `seconds` or
/// `generations`; `config_json` supplies any other GaConfig fields.
#[pyfunction]
#[pyo3(signature = (all, config="GA4", seed=0, seconds=None, generations=None, penalty_cents=None, population_size=None, workers=None, config_json=None))]
#[allow(clippy::too_many_arguments)]
fn run_ga(
    py: Python<'_>,
    all: &PyAllPairs,
    config: &str,
    seed: u64,
    seconds: Option<f64>,
    generations: Option<u64>,
    penalty_cents: Option<i64>,
    population_size: Option<usize>,
    workers: Option<usize>,
    config_json: Option<&str>,
) -> PyResult<Py<PyAny>> {
    let mut cfg: GaConfig = match config_json {
        Some(text) => serde_json::from_str(text).map_err(json_err)?,
        None => GaConfig::default(),
    };
    cfg.config = parse_variant(config)?;
    cfg.seed = Seed(seed);
    cfg.termination = match (seconds, generations) {
        (Some(s), None) => Termination::Seconds(s),
        (None, Some(g)) => Termination::Generations(g),
        (None, None) if config_json.is_some() => cfg.termination,
        _ => return Err(PyValueError::new_err("give exactly one of seconds or generations")),
    };
    if let Some(p) = penalty_cents {
        cfg.dhd_penalty_cents = p;
    }
    if let Some(n) = population_size {
        cfg.population_size = n;
    }
    let all = &all.inner;
    let record = py.detach(|| ga::run_with_workers(all, &cfg, workers)).map_err(to_py_err)?;
    to_python(py, &record)
}

/// Exact minimum of pairing cost plus `penalty_cents` per deadhead.
#[pyfunction]
#[pyo3(signature = (all, penalty_cents=25_000, max_pairings=oracle::DEFAULT_MAX_PAIRINGS))]
fn solve_exact(py: Python<'_>, all: &PyAllPairs, penalty_cents: i64, max_pairings: usize) -> PyResult<Py<PyAny>> {
    let all = &all.inner;
    let s = py
        .detach(|| oracle::solve_exact_with_limit(all, penalty_cents, max_pairings))
        .map_err(to_py_err)?;
    to_python(py, &s)
}

/// Greedy quality-index cover followed by redundant-pairing removal.
#[pyfunction]
#[pyo3(signature = (all, penalty_cents=25_000))]
fn solve_greedy(py: Python<'_>, all: &PyAllPairs, penalty_cents: i64) -> PyResult<Py<PyAny>> {
    let s = oracle::solve_greedy(&all.inner, penalty_cents).map_err(to_py_err)?;
    to_python(py, &s)
}

/// Percentage gap of `cost` above `reference`, rounded to hundredths.
#[pyfunction]
fn gap_percent(cost: i64, reference: i64) -> PyResult<f64> {
    harness::gap_percent(cost, reference).map_err(to_py_err)
}

fn parse_records(records_json: &str) -> PyResult<Vec<RunRecord>> {
    serde_json::from_str(records_json).map_err(json_err)
}

/// Initial and final statistics per configuration for a JSON list of run records.
#[pyfunction]
fn summarize(py: Python<'_>, records_json: &str) -> PyResult<Py<PyAny>> {
    to_python(py, &harness::summarize(&parse_records(records_json)?))
}

/// Best cost and gap per configuration for a JSON list of run records.
#[pyfunction]
fn gap_report(py: Python<'_>, records_json: &str, reference: i64) -> PyResult<Py<PyAny>> {
    let rows = harness::gap_report(&parse_records(records_json)?, reference).map_err(to_py_err)?;
    to_python(py, &rows)
}

#[pymodule]
fn pycrewpair(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyInstance>()?;
    m.add_class::<PyAllPairs>()?;
    m.add_function(wrap_pyfunction!(run_ga, m)?)?;
    m.add_function(wrap_pyfunction!(solve_exact, m)?)?;
    m.add_function(wrap_pyfunction!(solve_greedy, m)?)?;
    m.add_function(wrap_pyfunction!(gap_percent, m)?)?;
    m.add_function(wrap_pyfunction!(summarize, m)?)?;
    m.add_function(wrap_pyfunction!(gap_report, m)?)?;
    Ok(())
}
