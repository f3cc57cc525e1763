//! Report writers: a fixed-schema CSV (one row per component or cell) and a
//! full nested JSON dump. Both are byte-deterministic for a given Metrics.

use std::io::Write;
use std::path::Path;

use super::metrics::{Counter, Metrics};

pub const CSV_HEADER: &str =
    "experiment,component,class,style,successes,trials,rate,ci_low,ci_high";

fn csv_row(experiment: &str, component: &str, class: &str, style: &str, c: &Counter) -> String {
    let (lo, hi) = c.wilson();
    format!(
        "{experiment},{component},{class},{style},{},{},{:.6},{lo:.6},{hi:.6}",
        c.successes,
        c.trials,
        c.rate()
    )
}

/// Render the CSV report. Zero-opportunity components are omitted; an empty
/// metrics block renders as the header alone.
pub fn metrics_to_csv(metrics: &Metrics) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for (name, counter) in metrics.components() {
        if counter.trials > 0 {
            out.push_str(&csv_row(&metrics.experiment, name, "", "", &counter));
            out.push('\n');
        }
    }
    for (key, counter) in &metrics.cut_cells {
        if counter.trials > 0 {
            let (class, style) = key.split_once('/').unwrap_or((key.as_str(), ""));
            out.push_str(&csv_row(&metrics.experiment, "cut_execution", class, style, counter));
            out.push('\n');
        }
    }
    for (label, counter) in &metrics.tasks {
        if counter.trials > 0 {
            out.push_str(&csv_row(&metrics.experiment, label, "", "", counter));
            out.push('\n');
        }
    }
    out
}

/// Full nested metrics as pretty JSON with sorted keys.
pub fn metrics_to_json(metrics: &Metrics) -> String {
    let value = serde_json::to_value(metrics).expect("metrics serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

pub fn metrics_from_json(json: &str) -> Result<Metrics, serde_json::Error> {
    serde_json::from_str(json)
}

pub fn write_csv(metrics: &Metrics, path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(metrics_to_csv(metrics).as_bytes())
}

pub fn write_json(metrics: &Metrics, path: &Path) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(metrics_to_json(metrics).as_bytes())
}
