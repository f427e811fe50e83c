//! Machine-readable (CSV, JSON) and human-readable renderings of results.

use serde::Serialize;

use crate::ga::{RunRecord, Seed, Variant};
use crate::io::TOOLKIT_VERSION;

use super::stats::{GapRow, Phase, SummaryRow};

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

fn phase_name(p: Phase) -> &'static str {
    match p {
        Phase::Initial => "initial",
        Phase::Final => "final",
    }
}

/// One row per (configuration, phase). Money is in whole cents; means and
/// deviations of cents are rounded to the nearest cent.
pub fn summary_csv(rows: &[SummaryRow], config_hash: &str) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "config",
        "phase",
        "runs",
        "cost_mean_cents",
        "cost_std_cents",
        "cost_best_cents",
        "cost_worst_cents",
        "deadheads_mean",
        "deadheads_std",
        "deadheads_best",
        "deadheads_worst",
        "toolkit_version",
        "config_hash",
    ])
    .unwrap();
    for r in rows {
        w.write_record([
            r.config.to_string(),
            phase_name(r.phase).into(),
            r.cost.n.to_string(),
            format!("{:.0}", r.cost.mean.round()),
            format!("{:.0}", r.cost.std_dev.round()),
            r.cost.best.to_string(),
            r.cost.worst.to_string(),
            format!("{:.2}", r.deadheads.mean),
            format!("{:.2}", r.deadheads.std_dev),
            r.deadheads.best.to_string(),
            r.deadheads.worst.to_string(),
            TOOLKIT_VERSION.into(),
            config_hash.into(),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn gaps_csv(rows: &[GapRow], reference_label: &str, config_hash: &str) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "config",
        "best_cost_cents",
        "reference_cents",
        "gap_percent",
        "reference",
        "toolkit_version",
        "config_hash",
    ])
    .unwrap();
    for r in rows {
        w.write_record([
            r.config.to_string(),
            r.best_cost_cents.to_string(),
            r.reference_cents.to_string(),
            format!("{:.2}", r.gap_percent),
            reference_label.into(),
            TOOLKIT_VERSION.into(),
            config_hash.into(),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn trace_file_name(config: Variant, seed: Seed) -> String {
    format!("trace_{config}_{seed}.csv")
}

/// `elapsed_sec,generation,best_cost_cents,best_deadheads`, one row per
/// generation.
pub fn trace_csv(record: &RunRecord) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for point in &record.trace {
        w.serialize(point).unwrap();
    }
    if record.trace.is_empty() {
        w.write_record([
            "elapsed_sec",
            "generation",
            "best_cost_cents",
            "best_deadheads",
        ])
        .unwrap();
    }
    finish(w)
}

#[derive(Serialize)]
struct RecordsFile<'a> {
    toolkit_version: &'a str,
    config_hash: &'a str,
    records: &'a [RunRecord],
}

pub fn records_json(records: &[RunRecord], config_hash: &str) -> String {
    let file = RecordsFile {
        toolkit_version: TOOLKIT_VERSION,
        config_hash,
        records,
    };
    serde_json::to_string_pretty(&file).unwrap() + "\n"
}

fn usd(cents: f64) -> String {
    format!("{:.2}", cents / 100.0)
}

/// Aligned table for terminals, money in USD.
pub fn summary_text(rows: &[SummaryRow], gaps: &[GapRow], reference_label: &str) -> String {
    let mut out = format!(
        "{:<6} {:<8} {:>4} {:>26} {:>14} {:>14} {:>16} {:>6} {:>6}\n",
        "config",
        "phase",
        "runs",
        "cost mean +- sd (USD)",
        "best",
        "worst",
        "dhd mean +- sd",
        "best",
        "worst"
    );
    for r in rows {
        let cost = format!("{} +- {}", usd(r.cost.mean), usd(r.cost.std_dev));
        let dhd = format!("{:.1} +- {:.1}", r.deadheads.mean, r.deadheads.std_dev);
        out.push_str(&format!(
            "{:<6} {:<8} {:>4} {:>26} {:>14} {:>14} {:>16} {:>6} {:>6}\n",
            r.config.to_string(),
            phase_name(r.phase),
            r.cost.n,
            cost,
            usd(r.cost.best as f64),
            usd(r.cost.worst as f64),
            dhd,
            r.deadheads.best,
            r.deadheads.worst
        ));
    }
    if !gaps.is_empty() {
        out.push_str(&format!("\ngap against {reference_label} reference\n"));
        out.push_str(&format!(
            "{:<6} {:>14} {:>14} {:>8}\n",
            "config", "best (USD)", "ref (USD)", "gap %"
        ));
        for g in gaps {
            out.push_str(&format!(
                "{:<6} {:>14} {:>14} {:>8.2}\n",
                g.config.to_string(),
                usd(g.best_cost_cents as f64),
                usd(g.reference_cents as f64),
                g.gap_percent
            ));
        }
    }
    out
}
