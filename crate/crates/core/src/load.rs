//! One BDF file per trial into EEG and EMG trial sets.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bdf;
use crate::emg::{self, OnsetParams, OnsetResult};
use crate::error::{Error, Result};
use crate::precondition;
use crate::types::TrialSet;

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub drift_reject: bool,
    /// Run onset detection on the EMG channel and attach the result.
    pub detect_onsets: Option<OnsetParams>,
}

#[derive(Debug, Clone)]
pub struct LoadedTrials {
    pub eeg: TrialSet,
    pub emg: TrialSet,
    pub onsets: Option<Vec<OnsetResult>>,
}

struct FileTrial {
    fs: f64,
    labels: Vec<String>,
    eeg: Vec<Vec<f64>>,
    emg: Vec<f64>,
    onset: Option<OnsetResult>,
}

fn load_one(path: &Path, eeg_channels: &[usize], emg_channel: usize, opts: &LoadOptions) -> Result<FileTrial> {
    let (header, data) = bdf::read_bdf_file(path)?;
    let available = header.num_channels();
    let wanted: Vec<usize> = eeg_channels.iter().copied().chain([emg_channel]).collect();
    if let Some(&bad) = wanted.iter().find(|&&c| c >= available) {
        return Err(Error::ChannelIndexOutOfRange { index: bad, available }.in_file(path));
    }
    let fs = header.fs(emg_channel);
    if let Some(&c) = wanted.iter().find(|&&c| header.fs(c) != fs) {
        return Err(Error::InconsistentTrials(format!(
            "channel {c} sampled at {} Hz, EMG channel at {fs} Hz",
            header.fs(c)
        ))
        .in_file(path));
    }
    let labels = eeg_channels.iter().map(|&c| header.channels[c].label.clone()).collect();
    let take = |c: usize| -> Result<Vec<f64>> {
        if opts.drift_reject {
            precondition::drift_reject_default(&data[c], fs)
        } else {
            Ok(data[c].clone())
        }
    };
    let emg_signal = take(emg_channel).map_err(|e| e.in_file(path))?;
    let eeg = eeg_channels
        .iter()
        .map(|&c| take(c))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| e.in_file(path))?;
    let onset = match &opts.detect_onsets {
        Some(p) => Some(emg::emg_onset(&emg_signal, fs, p).map_err(|e| e.in_file(path))?),
        None => None,
    };
    Ok(FileTrial { fs, labels, eeg, emg: emg_signal, onset })
}

/// Reads one trial per file, in file order. Files are parsed in parallel.
///
/// EEG channels keep their header labels; the EMG set has a single channel
/// labelled `EMG`. With onset detection on, both sets carry the onsets.
pub fn load_trial_set<P: AsRef<Path> + Sync>(
    files: &[P],
    eeg_channels: &[usize],
    emg_channel: usize,
    opts: &LoadOptions,
) -> Result<LoadedTrials> {
    if files.is_empty() {
        return Err(Error::EmptyTrialSet);
    }
    if eeg_channels.is_empty() {
        return Err(Error::InvalidParameter("no EEG channels selected".into()));
    }
    let parsed = files
        .par_iter()
        .map(|p| load_one(p.as_ref(), eeg_channels, emg_channel, opts))
        .collect::<Result<Vec<_>>>()?;

    let fs = parsed[0].fs;
    let labels = parsed[0].labels.clone();
    for (f, p) in parsed.iter().zip(files).skip(1) {
        if f.fs != fs {
            return Err(Error::InconsistentTrials(format!("sampling rate {} Hz differs from {fs} Hz", f.fs))
                .in_file(PathBuf::from(p.as_ref())));
        }
    }
    let mut eeg_trials = Vec::with_capacity(parsed.len());
    let mut emg_trials = Vec::with_capacity(parsed.len());
    let mut onsets = Vec::new();
    for f in parsed {
        eeg_trials.push(f.eeg);
        emg_trials.push(vec![f.emg]);
        onsets.extend(f.onset);
    }
    let mut eeg = TrialSet::new(eeg_trials, fs, labels)?;
    let mut emg = TrialSet::new(emg_trials, fs, vec!["EMG".to_string()])?;
    let onsets = if opts.detect_onsets.is_some() {
        let samples: Vec<usize> = onsets.iter().map(|o| o.onset_sample).collect();
        eeg = eeg.with_onsets(samples.clone())?;
        emg = emg.with_onsets(samples)?;
        Some(onsets)
    } else {
        None
    };
    Ok(LoadedTrials { eeg, emg, onsets })
}
