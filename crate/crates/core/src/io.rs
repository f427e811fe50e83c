//! File formats: flight schedules (CSV), instance configuration (JSON),
//! AllPairs artifacts (JSON lines plus a CSV export), and atomic writes.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::allpairs::AllPairs;
use crate::error::{Error, Result};
use crate::model::{
    Cents, CostModel, Duty, Flight, FlightId, Instance, LegalityRules, Minutes, Pairing,
};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const SCHEDULE_HEADER: [&str; 5] = [
    "flight_id",
    "origin",
    "destination",
    "departure_utc",
    "arrival_utc",
];

/// Parses an ISO-8601 UTC timestamp with minute resolution, e.g.
/// `2024-03-01T06:30Z`. A `:00` seconds field and a `+00:00` offset are
/// accepted; anything finer than a minute is rejected.
pub fn parse_timestamp(text: &str) -> std::result::Result<Minutes, String> {
    let trimmed = text.trim();
    let body = trimmed
        .strip_suffix('Z')
        .or_else(|| trimmed.strip_suffix("+00:00"))
        .unwrap_or(trimmed);
    let parsed = NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M")
        .or_else(|_| NaiveDateTime::parse_from_str(body, "%Y-%m-%dT%H:%M:%S"))
        .map_err(|e| format!("bad timestamp {text:?}: {e}"))?;
    let secs = parsed.and_utc().timestamp();
    if secs % 60 != 0 {
        return Err(format!("timestamp {text:?} is not on a whole minute"));
    }
    Ok(secs.div_euclid(60))
}

pub fn format_timestamp(minutes: Minutes) -> String {
    DateTime::from_timestamp(minutes * 60, 0)
        .map(|t| t.format("%Y-%m-%dT%H:%MZ").to_string())
        .unwrap_or_else(|| format!("@{minutes}"))
}

fn parse_schedule_from(reader: impl Read, label: &Path) -> Result<Vec<Flight>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::parse(label, 1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != SCHEDULE_HEADER {
        return Err(Error::parse(
            label,
            1,
            format!("expected header {}", SCHEDULE_HEADER.join(",")),
        ));
    }

    let mut flights = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            Error::parse(label, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let bad = |msg: String| Error::parse(label, line, msg);

        let id: FlightId = record[0]
            .parse()
            .map_err(|_| bad(format!("bad flight_id {:?}", &record[0])))?;
        let origin = record[1].to_string();
        let destination = record[2].to_string();
        for code in [&origin, &destination] {
            let ok = !code.is_empty()
                && code
                    .chars()
                    .all(|c| c.is_ascii_uppercase() || c.is_ascii_digit());
            if !ok {
                return Err(bad(format!("bad airport code {code:?}")));
            }
        }
        if origin == destination {
            return Err(bad(format!("origin equals destination ({origin})")));
        }
        let departure = parse_timestamp(&record[3]).map_err(bad)?;
        let arrival = parse_timestamp(&record[4]).map_err(bad)?;
        if arrival <= departure {
            return Err(bad("arrival must be after departure".into()));
        }
        flights.push((
            line,
            Flight {
                id,
                origin,
                destination,
                departure,
                arrival,
            },
        ));
    }

    flights.sort_by_key(|(_, f)| f.id);
    for (pos, (line, f)) in flights.iter().enumerate() {
        if f.id != pos {
            return Err(Error::parse(
                label,
                *line,
                format!(
                    "flight ids must be dense 0..{}; found {}",
                    flights.len(),
                    f.id
                ),
            ));
        }
    }
    Ok(flights.into_iter().map(|(_, f)| f).collect())
}

/// Reads a schedule CSV (`flight_id,origin,destination,departure_utc,arrival_utc`).
/// Rows may appear in any order; ids must be dense once sorted.
pub fn read_schedule(path: &Path) -> Result<Vec<Flight>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_schedule_from(file, path)
}

pub fn parse_schedule(text: &str) -> Result<Vec<Flight>> {
    parse_schedule_from(text.as_bytes(), Path::new("<schedule>"))
}

pub fn schedule_to_csv(flights: &[Flight]) -> String {
    let mut out = SCHEDULE_HEADER.join(",");
    out.push('\n');
    for f in flights {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            f.id,
            f.origin,
            f.destination,
            format_timestamp(f.departure),
            format_timestamp(f.arrival)
        ));
    }
    out
}

/// Everything about an instance except its flights. Every field must be
/// present in the file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub bases: Vec<String>,
    pub rules: LegalityRules,
    /// May be omitted only when a separate cost-model file is supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost_model: Option<CostModel>,
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::json(path, e))
}

/// Loads an instance from a schedule CSV and a configuration JSON. A
/// separate cost-model JSON, when given, replaces any embedded cost model.
pub fn load_instance(
    schedule: &Path,
    config: &Path,
    cost_model: Option<&Path>,
) -> Result<Instance> {
    let flights = read_schedule(schedule)?;
    let cfg: InstanceConfig = read_json(config)?;
    let model = match cost_model {
        Some(path) => read_json::<CostModel>(path)?,
        None => cfg.cost_model.ok_or_else(|| {
            Error::InvalidConfig(format!(
                "{}: no cost_model section and no --cost-model file",
                config.display()
            ))
        })?,
    };
    Instance::new(flights, cfg.bases, cfg.rules, model)
}

pub fn instance_config(inst: &Instance) -> InstanceConfig {
    InstanceConfig {
        bases: inst.bases.clone(),
        rules: inst.rules.clone(),
        cost_model: Some(inst.cost_model.clone()),
    }
}

/// SHA-256 of the JSON encoding of `value`, hex encoded.
pub fn config_hash<T: Serialize + ?Sized>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("config serializes");
    Sha256::digest(&bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

const ALLPAIRS_FORMAT: &str = "crewpair-allpairs";

/// First line of an AllPairs file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllPairsHeader {
    pub format: String,
    pub toolkit_version: String,
    pub config_hash: String,
    pub num_flights: usize,
    pub num_pairings: usize,
    pub briefing_minutes: Minutes,
    pub debriefing_minutes: Minutes,
}

/// One pairing line of an AllPairs file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingRecord {
    pub id: usize,
    pub base: String,
    pub flights: Vec<FlightId>,
    /// Flights per duty; sums to `flights.len()`.
    pub duty_lengths: Vec<usize>,
    pub cost_cents: Cents,
}

impl PairingRecord {
    pub fn from_pairing(p: &Pairing) -> Self {
        PairingRecord {
            id: p.id,
            base: p.base.clone(),
            flights: p.flights().collect(),
            duty_lengths: p.duties.iter().map(|d| d.flights.len()).collect(),
            cost_cents: p.cost,
        }
    }
}

/// Serializes AllPairs as JSON lines: a header followed by one pairing per line.
pub fn allpairs_to_jsonl(all: &AllPairs, config_hash: &str) -> String {
    let (briefing, debriefing) = all
        .pairings()
        .first()
        .map(|p| (p.duties[0].briefing_minutes, p.duties[0].debriefing_minutes))
        .unwrap_or((0, 0));
    let header = AllPairsHeader {
        format: ALLPAIRS_FORMAT.into(),
        toolkit_version: TOOLKIT_VERSION.into(),
        config_hash: config_hash.into(),
        num_flights: all.num_flights(),
        num_pairings: all.len(),
        briefing_minutes: briefing,
        debriefing_minutes: debriefing,
    };
    let mut out = serde_json::to_string(&header).unwrap();
    out.push('\n');
    for p in all.pairings() {
        out.push_str(&serde_json::to_string(&PairingRecord::from_pairing(p)).unwrap());
        out.push('\n');
    }
    out
}

pub fn read_allpairs(path: &Path) -> Result<(AllPairsHeader, AllPairs)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_allpairs_from(BufReader::new(file), path)
}

pub fn parse_allpairs(text: &str) -> Result<(AllPairsHeader, AllPairs)> {
    parse_allpairs_from(text.as_bytes(), Path::new("<allpairs>"))
}

fn parse_allpairs_from(reader: impl BufRead, label: &Path) -> Result<(AllPairsHeader, AllPairs)> {
    let mut lines = reader.lines().enumerate();
    let header: AllPairsHeader = match lines.next() {
        Some((_, line)) => {
            let line = line.map_err(|e| Error::io(label, e))?;
            serde_json::from_str(&line).map_err(|e| Error::parse(label, 1, e.to_string()))?
        }
        None => return Err(Error::parse(label, 1, "empty AllPairs file")),
    };
    if header.format != ALLPAIRS_FORMAT {
        return Err(Error::parse(
            label,
            1,
            format!("unknown format {:?}", header.format),
        ));
    }

    let mut pairings = Vec::with_capacity(header.num_pairings);
    for (idx, line) in lines {
        let line = line.map_err(|e| Error::io(label, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PairingRecord =
            serde_json::from_str(&line).map_err(|e| Error::parse(label, idx + 1, e.to_string()))?;
        if rec.duty_lengths.iter().sum::<usize>() != rec.flights.len()
            || rec.duty_lengths.iter().any(|&n| n == 0)
        {
            return Err(Error::parse(
                label,
                idx + 1,
                "duty_lengths do not partition flights",
            ));
        }
        if let Some(&f) = rec.flights.iter().find(|&&f| f >= header.num_flights) {
            return Err(Error::parse(
                label,
                idx + 1,
                format!("flight {f} out of range"),
            ));
        }
        let mut duties = Vec::with_capacity(rec.duty_lengths.len());
        let mut start = 0;
        for &len in &rec.duty_lengths {
            duties.push(Duty {
                flights: rec.flights[start..start + len].to_vec(),
                briefing_minutes: header.briefing_minutes,
                debriefing_minutes: header.debriefing_minutes,
            });
            start += len;
        }
        pairings.push(Pairing::from_parts(
            rec.id,
            rec.base,
            duties,
            rec.cost_cents,
            header.num_flights,
        ));
    }
    if pairings.len() != header.num_pairings {
        return Err(Error::parse(
            label,
            1,
            format!(
                "header announces {} pairings, file holds {}",
                header.num_pairings,
                pairings.len()
            ),
        ));
    }
    let all = AllPairs::new(header.num_flights, pairings)?;
    Ok((header, all))
}

/// Inspection export: `pairing_id,base,cost_cents,num_duties,flight_ids`.
pub fn allpairs_to_csv(all: &AllPairs) -> String {
    let mut out = String::from("pairing_id,base,cost_cents,num_duties,flight_ids\n");
    for p in all.pairings() {
        let ids: Vec<String> = p.flights().map(|f| f.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            p.id,
            p.base,
            p.cost,
            p.duties.len(),
            ids.join(";")
        ));
    }
    out
}

/// A set of files written all-or-nothing: contents go to temporary files in
/// the destination directories and are renamed into place only on commit.
#[derive(Default)]
pub struct AtomicBatch {
    staged: Vec<(tempfile::NamedTempFile, std::path::PathBuf)>,
}

impl AtomicBatch {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stage(&mut self, path: &Path, contents: &[u8]) -> Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
            _ => std::path::PathBuf::from("."),
        };
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| Error::io(&dir, e))?;
        {
            let mut w = BufWriter::new(tmp.as_file_mut());
            w.write_all(contents).map_err(|e| Error::io(path, e))?;
            w.flush().map_err(|e| Error::io(path, e))?;
        }
        self.staged.push((tmp, path.to_path_buf()));
        Ok(())
    }

    pub fn commit(self) -> Result<()> {
        for (tmp, path) in self.staged {
            tmp.persist(&path).map_err(|e| Error::io(&path, e.error))?;
        }
        Ok(())
    }
}

pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let mut batch = AtomicBatch::new();
    batch.stage(path, contents)?;
    batch.commit()
}
