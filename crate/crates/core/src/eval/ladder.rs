use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LadderVerdict {
    /// Means strictly increase with bitrate.
    Monotone,
    NotMonotone,
    /// Fewer than two rungs.
    InsufficientRungs,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderRung {
    pub bitrate_kbps: f64,
    pub mean_score: f64,
    /// Per-excerpt scores, in excerpt order.
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub excerpts: Vec<String>,
    /// Ascending bitrate.
    pub rungs: Vec<LadderRung>,
    pub verdict: LadderVerdict,
}

impl LadderReport {
    pub fn from_rungs(excerpts: Vec<String>, mut rungs: Vec<LadderRung>) -> Self {
        rungs.sort_by(|a, b| a.bitrate_kbps.total_cmp(&b.bitrate_kbps));
        let verdict = if rungs.len() < 2 {
            LadderVerdict::InsufficientRungs
        } else if rungs
            .windows(2)
            .all(|w| w[1].bitrate_kbps > w[0].bitrate_kbps && w[1].mean_score > w[0].mean_score)
        {
            LadderVerdict::Monotone
        } else {
            LadderVerdict::NotMonotone
        };
        Self {
            excerpts,
            rungs,
            verdict,
        }
    }

    /// Plot-ready table: one row per rung, then one column per excerpt.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("bitrate_kbps\tmean_score");
        for e in &self.excerpts {
            let _ = write!(s, "\t{e}");
        }
        s.push('\n');
        for r in &self.rungs {
            let _ = write!(s, "{}\t{}", r.bitrate_kbps, r.mean_score);
            for v in &r.scores {
                let _ = write!(s, "\t{v}");
            }
            s.push('\n');
        }
        s
    }
}

/// Regular files of `dir` keyed by file stem.
fn excerpt_files(dir: &Path) -> Result<BTreeMap<String, PathBuf>> {
    if !dir.is_dir() {
        return Err(Error::MissingFile(dir.to_path_buf()));
    }
    let mut out = BTreeMap::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if !path.is_file() {
            continue;
        }
        let Some(stem) = path.file_stem().map(|s| s.to_string_lossy().into_owned()) else {
            continue;
        };
        if stem.starts_with('.') {
            continue;
        }
        if let Some(prev) = out.insert(stem.clone(), path) {
            return Err(Error::ExcerptMismatch(format!(
                "two files for excerpt `{stem}` in {} ({})",
                dir.display(),
                prev.display()
            )));
        }
    }
    Ok(out)
}

/// Scores every coded excerpt against its reference (matched by file stem)
/// and averages per bitrate. `score` runs in parallel; results keep input
/// order.
pub fn ladder_report<F>(ref_dir: &Path, rungs: &[(f64, PathBuf)], score: F) -> Result<LadderReport>
where
    F: Fn(&Path, &Path) -> Result<f64> + Sync,
{
    if rungs.is_empty() {
        return Err(Error::InvalidConfig("ladder needs at least one bitrate".into()));
    }
    let refs = excerpt_files(ref_dir)?;
    if refs.is_empty() {
        return Err(Error::ExcerptMismatch(format!("no excerpts in {}", ref_dir.display())));
    }
    let names: Vec<String> = refs.keys().cloned().collect();
    let mut jobs = Vec::new();
    for (rung, (_, dir)) in rungs.iter().enumerate() {
        let coded = excerpt_files(dir)?;
        if coded.keys().ne(refs.keys()) {
            let missing: Vec<&String> = refs.keys().filter(|k| !coded.contains_key(*k)).collect();
            let extra: Vec<&String> = coded.keys().filter(|k| !refs.contains_key(*k)).collect();
            return Err(Error::ExcerptMismatch(format!(
                "{}: missing {missing:?}, unexpected {extra:?}",
                dir.display()
            )));
        }
        for (name, path) in coded {
            jobs.push((rung, refs[&name].clone(), path));
        }
    }
    let scores: Vec<f64> = jobs
        .par_iter()
        .map(|(_, r, c)| score(r, c))
        .collect::<Result<_>>()?;
    let per = names.len();
    let rungs = rungs
        .iter()
        .enumerate()
        .map(|(i, (bitrate, _))| {
            let s = scores[i * per..(i + 1) * per].to_vec();
            LadderRung {
                bitrate_kbps: *bitrate,
                mean_score: s.iter().sum::<f64>() / per as f64,
                scores: s,
            }
        })
        .collect();
    Ok(LadderReport::from_rungs(names, rungs))
}
