//! Trial-set archives: a directory with `manifest.json` and one CSV per
//! trial (columns are channels, µV).

use std::path::Path;

use motorsig_core::TrialSet;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::{fmt9, Outputs, Table};

pub const FORMAT: &str = "motorsig-trialset/1";
pub const MANIFEST: &str = "manifest.json";
pub const UNITS: &str = "µV";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialEntry {
    pub file: String,
    pub samples: usize,
    pub onset_sample: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub fs: f64,
    pub units: String,
    pub channel_labels: Vec<String>,
    pub trials: Vec<TrialEntry>,
    /// Where the data came from: source files, generator settings, ...
    pub provenance: serde_json::Value,
}

pub fn trial_file(i: usize) -> String {
    format!("trial_{i:03}.csv")
}

/// Adds the archive files for `ts` to `out`.
pub fn add_archive(out: &mut Outputs, ts: &TrialSet, provenance: serde_json::Value) {
    let header: Vec<String> = ts.channel_labels().iter().map(|l| format!("{l} ({UNITS})")).collect();
    let onsets = ts.onset_samples();
    let mut trials = Vec::with_capacity(ts.n_trials());
    for (i, trial) in ts.trials().iter().enumerate() {
        let mut t = Table::new(&header);
        for s in 0..trial[0].len() {
            let row: Vec<String> = trial.iter().map(|ch| fmt9(ch[s])).collect();
            t.row(&row);
        }
        out.add(trial_file(i), t.into_bytes());
        trials.push(TrialEntry { file: trial_file(i), samples: trial[0].len(), onset_sample: onsets.map(|o| o[i]) });
    }
    let m = Manifest {
        format: FORMAT.into(),
        fs: ts.fs(),
        units: UNITS.into(),
        channel_labels: ts.channel_labels().to_vec(),
        trials,
        provenance,
    };
    out.add(MANIFEST, json_bytes(&m));
}

pub fn json_bytes<T: Serialize>(v: &T) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(v).expect("serializable");
    b.push(b'\n');
    b
}

pub fn read_archive(dir: &Path) -> CliResult<(TrialSet, Manifest)> {
    let mpath = dir.join(MANIFEST);
    let text = std::fs::read_to_string(&mpath).map_err(|e| CliError::io(format!("{}: {e}", mpath.display())))?;
    let m: Manifest =
        serde_json::from_str(&text).map_err(|e| CliError::io(format!("{}: malformed manifest: {e}", mpath.display())))?;
    if m.format != FORMAT {
        return Err(CliError::io(format!("{}: unsupported archive format {:?}", mpath.display(), m.format)));
    }
    let n_ch = m.channel_labels.len();
    let mut trials = Vec::with_capacity(m.trials.len());
    for entry in &m.trials {
        let p = dir.join(&entry.file);
        let bad = |msg: String| CliError::io(format!("{}: {msg}", p.display()));
        let mut r = csv::Reader::from_path(&p).map_err(|e| bad(e.to_string()))?;
        let mut channels = vec![Vec::with_capacity(entry.samples); n_ch];
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            if rec.len() != n_ch {
                return Err(bad(format!("row {} has {} columns, expected {n_ch}", line + 2, rec.len())));
            }
            for (c, cell) in rec.iter().enumerate() {
                let v: f64 = cell.trim().parse().map_err(|_| bad(format!("row {}: bad number {cell:?}", line + 2)))?;
                channels[c].push(v);
            }
        }
        if channels.first().map_or(0, Vec::len) != entry.samples {
            return Err(bad(format!("expected {} samples", entry.samples)));
        }
        trials.push(channels);
    }
    let ts = TrialSet::new(trials, m.fs, m.channel_labels.clone()).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    let onsets: Option<Vec<usize>> = m.trials.iter().map(|t| t.onset_sample).collect();
    let ts = match onsets {
        Some(o) => ts.with_onsets(o).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?,
        None => ts,
    };
    Ok((ts, m))
}
