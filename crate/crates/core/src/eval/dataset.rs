use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stats::{outlier_ratio, pearson, spearman};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 6] = ["excerpt_id", "condition", "is_anchor", "predicted", "mos", "ci95"];

/// One (prediction, listening-test score) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub excerpt_id: String,
    /// Codec and bitrate, or the anchor type.
    pub condition: String,
    pub is_anchor: bool,
    pub predicted: f64,
    /// Subjective score on a 0-100 scale.
    pub mos: f64,
    /// Half-width of the 95% confidence interval of `mos`.
    pub ci95: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnchorFilter {
    WithAnchors,
    WithoutAnchors,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub subset: AnchorFilter,
    pub n: usize,
    pub r_pearson: f64,
    pub r_spearman: f64,
    pub outlier_ratio: f64,
}

fn malformed(line: u64, message: impl Into<String>) -> Error {
    Error::MalformedRow {
        line,
        message: message.into(),
    }
}

fn parse_num(field: &str, name: &str, line: u64) -> Result<f64> {
    field
        .trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| malformed(line, format!("{name}: `{field}` is not a number")))
}

/// Reads the dataset CSV (header required, columns in [`CSV_HEADER`] order).
pub fn read_dataset<R: Read>(input: R) -> Result<Vec<EvaluationRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input);
    let header = rdr.headers().map_err(|e| malformed(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(malformed(1, format!("header must be `{}`", CSV_HEADER.join(","))));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != CSV_HEADER.len() {
            return Err(malformed(line, format!("expected 6 fields, found {}", row.len())));
        }
        let is_anchor = match &row[2] {
            "0" | "false" => false,
            "1" | "true" => true,
            other => return Err(malformed(line, format!("is_anchor: `{other}` is not 0/1"))),
        };
        let mos = parse_num(&row[4], "mos", line)?;
        if !(0.0..=100.0).contains(&mos) {
            return Err(malformed(line, format!("mos {mos} outside [0, 100]")));
        }
        let ci95 = match &row[5] {
            "" => None,
            s => {
                let v = parse_num(s, "ci95", line)?;
                if v < 0.0 {
                    return Err(malformed(line, format!("ci95 {v} is negative")));
                }
                Some(v)
            }
        };
        if row[0].is_empty() {
            return Err(malformed(line, "empty excerpt_id"));
        }
        out.push(EvaluationRecord {
            excerpt_id: row[0].to_string(),
            condition: row[1].to_string(),
            is_anchor,
            predicted: parse_num(&row[3], "predicted", line)?,
            mos,
            ci95,
        });
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<Vec<EvaluationRecord>> {
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    read_dataset(std::fs::File::open(path)?)
}

/// Rp, Rs and outlier ratio over the records kept by `filter`.
pub fn correlate(records: &[EvaluationRecord], filter: AnchorFilter) -> Result<CorrelationReport> {
    let kept: Vec<EvaluationRecord> = records
        .iter()
        .filter(|r| filter == AnchorFilter::WithAnchors || !r.is_anchor)
        .cloned()
        .collect();
    let pred: Vec<f64> = kept.iter().map(|r| r.predicted).collect();
    let mos: Vec<f64> = kept.iter().map(|r| r.mos).collect();
    Ok(CorrelationReport {
        subset: filter,
        n: kept.len(),
        r_pearson: pearson(&pred, &mos)?,
        r_spearman: spearman(&pred, &mos)?,
        outlier_ratio: outlier_ratio(&kept)?,
    })
}

pub fn evaluate_dataset(path: &Path, filter: AnchorFilter) -> Result<CorrelationReport> {
    correlate(&load_dataset(path)?, filter)
}
