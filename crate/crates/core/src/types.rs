//! Shared domain types: sampled signals, frequency bands and multi-trial
//! recordings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single real-valued channel sampled at `fs` Hz (values in µV).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    fs: f64,
}

impl Signal {
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidParameter(format!("sampling rate must be positive, got {fs}")));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("sample {i} is not finite")));
        }
        Ok(Signal { samples, fs })
    }

    pub fn from_slice(samples: &[f64], fs: f64) -> Result<Self> {
        Self::new(samples.to_vec(), fs)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.fs
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Canonical EEG rhythm bands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedBand {
    Delta,
    Theta,
    Alpha,
    Beta,
    Gamma,
}

impl NamedBand {
    pub const ALL: [NamedBand; 5] = [
        NamedBand::Delta,
        NamedBand::Theta,
        NamedBand::Alpha,
        NamedBand::Beta,
        NamedBand::Gamma,
    ];

    /// Band edges in Hz.
    pub fn edges(self) -> (f64, f64) {
        match self {
            NamedBand::Delta => (1.0, 4.0),
            NamedBand::Theta => (4.0, 8.0),
            NamedBand::Alpha => (8.0, 12.0),
            NamedBand::Beta => (12.0, 32.0),
            NamedBand::Gamma => (32.0, 80.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NamedBand::Delta => "delta",
            NamedBand::Theta => "theta",
            NamedBand::Alpha => "alpha",
            NamedBand::Beta => "beta",
            NamedBand::Gamma => "gamma",
        }
    }
}

impl FromStr for NamedBand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedBand::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown band name {s:?}")))
    }
}

/// A pass band described by its center `f0` and width `bw` (both Hz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub f0: f64,
    pub bw: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub named: Option<NamedBand>,
}

impl BandSpec {
    pub fn from_center(f0: f64, bw: f64) -> Self {
        BandSpec { f0, bw, named: None }
    }

    pub fn from_edges(lo: f64, hi: f64) -> Self {
        BandSpec {
            f0: 0.5 * (lo + hi),
            bw: hi - lo,
            named: None,
        }
    }

    pub fn named(band: NamedBand) -> Self {
        let (lo, hi) = band.edges();
        BandSpec {
            named: Some(band),
            ..Self::from_edges(lo, hi)
        }
    }

    pub fn lo(&self) -> f64 {
        self.f0 - 0.5 * self.bw
    }

    pub fn hi(&self) -> f64 {
        self.f0 + 0.5 * self.bw
    }

    /// Checks `0 < lo < hi < fs/2`.
    pub fn validate(&self, fs: f64) -> Result<()> {
        let nyquist = 0.5 * fs;
        let (lo, hi) = (self.lo(), self.hi());
        if !(self.bw > 0.0) || !(lo > 0.0) || !(hi < nyquist) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::BandOutOfNyquist { lo, hi, nyquist });
        }
        Ok(())
    }
}

impl fmt::Display for BandSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.named {
            Some(n) => write!(f, "{} ({}-{} Hz)", n.name(), self.lo(), self.hi()),
            None => write!(f, "{}-{} Hz", self.lo(), self.hi()),
        }
    }
}

/// Parses `alpha`, `8-12`, `8:12` or `8,12` into a band.
impl FromStr for BandSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(named) = s.parse::<NamedBand>() {
            return Ok(BandSpec::named(named));
        }
        let parts: Vec<&str> = s.split(['-', ':', ',']).map(str::trim).collect();
        if let [lo, hi] = parts.as_slice() {
            let lo: f64 = lo.parse().map_err(|_| Error::InvalidParameter(format!("bad band {s:?}")))?;
            let hi: f64 = hi.parse().map_err(|_| Error::InvalidParameter(format!("bad band {s:?}")))?;
            if lo < hi {
                return Ok(BandSpec::from_edges(lo, hi));
            }
        }
        Err(Error::InvalidParameter(format!("bad band {s:?}")))
    }
}

/// Multi-trial, multi-channel recording. Trials are stored as
/// `trials[trial][channel][sample]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialSet {
    trials: Vec<Vec<Vec<f64>>>,
    fs: f64,
    channel_labels: Vec<String>,
    onset_samples: Option<Vec<usize>>,
}

impl TrialSet {
    pub fn new(trials: Vec<Vec<Vec<f64>>>, fs: f64, channel_labels: Vec<String>) -> Result<Self> {
        if !(fs > 0.0 && fs.is_finite()) {
            return Err(Error::InvalidParameter(format!("sampling rate must be positive, got {fs}")));
        }
        if trials.is_empty() {
            return Err(Error::EmptyTrialSet);
        }
        let n_ch = channel_labels.len();
        if n_ch == 0 {
            return Err(Error::InconsistentTrials("no channels".into()));
        }
        for (i, trial) in trials.iter().enumerate() {
            if trial.len() != n_ch {
                return Err(Error::InconsistentTrials(format!(
                    "trial {i} has {} channels, expected {n_ch}",
                    trial.len()
                )));
            }
            let len = trial[0].len();
            if len == 0 || trial.iter().any(|c| c.len() != len) {
                return Err(Error::InconsistentTrials(format!("trial {i} has ragged or empty channels")));
            }
        }
        Ok(TrialSet {
            trials,
            fs,
            channel_labels,
            onset_samples: None,
        })
    }

    /// Attaches per-trial movement onsets; each must lie strictly inside its trial.
    pub fn with_onsets(mut self, onsets: Vec<usize>) -> Result<Self> {
        if onsets.len() != self.trials.len() {
            return Err(Error::InconsistentTrials(format!(
                "{} onsets for {} trials",
                onsets.len(),
                self.trials.len()
            )));
        }
        for (i, (&o, trial)) in onsets.iter().zip(&self.trials).enumerate() {
            if o == 0 || o >= trial[0].len() {
                return Err(Error::InconsistentTrials(format!("onset {o} outside trial {i}")));
            }
        }
        self.onset_samples = Some(onsets);
        Ok(self)
    }

    pub fn trials(&self) -> &[Vec<Vec<f64>>] {
        &self.trials
    }

    pub fn trial(&self, i: usize) -> &[Vec<f64>] {
        &self.trials[i]
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn n_trials(&self) -> usize {
        self.trials.len()
    }

    pub fn n_channels(&self) -> usize {
        self.channel_labels.len()
    }

    pub fn trial_len(&self, i: usize) -> usize {
        self.trials[i][0].len()
    }

    pub fn channel_labels(&self) -> &[String] {
        &self.channel_labels
    }

    pub fn channel_index(&self, label: &str) -> Option<usize> {
        self.channel_labels.iter().position(|l| l.eq_ignore_ascii_case(label))
    }

    pub fn onset_samples(&self) -> Option<&[usize]> {
        self.onset_samples.as_deref()
    }

    /// Onsets in seconds, `onset_sample / fs`.
    pub fn onset_times(&self) -> Option<Vec<f64>> {
        self.onset_samples
            .as_ref()
            .map(|o| o.iter().map(|&s| s as f64 / self.fs).collect())
    }

    /// One channel across all trials.
    pub fn channel_view(&self, ch: usize) -> Result<Vec<&[f64]>> {
        self.check_channel(ch)?;
        Ok(self.trials.iter().map(|t| t[ch].as_slice()).collect())
    }

    /// New trial set restricted to `channels` (in the given order). Onsets are kept.
    pub fn select_channels(&self, channels: &[usize]) -> Result<TrialSet> {
        for &c in channels {
            self.check_channel(c)?;
        }
        let trials = self
            .trials
            .iter()
            .map(|t| channels.iter().map(|&c| t[c].clone()).collect())
            .collect();
        let labels = channels.iter().map(|&c| self.channel_labels[c].clone()).collect();
        Ok(TrialSet {
            trials,
            fs: self.fs,
            channel_labels: labels,
            onset_samples: self.onset_samples.clone(),
        })
    }

    /// Applies `f` to every channel of every trial.
    pub fn try_map_channels<F>(&self, f: F) -> Result<TrialSet>
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Sync,
    {
        use rayon::prelude::*;
        let trials = self
            .trials
            .par_iter()
            .map(|t| t.iter().map(|c| f(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(TrialSet {
            trials,
            fs: self.fs,
            channel_labels: self.channel_labels.clone(),
            onset_samples: self.onset_samples.clone(),
        })
    }

    pub fn into_trials(self) -> Vec<Vec<Vec<f64>>> {
        self.trials
    }

    fn check_channel(&self, ch: usize) -> Result<()> {
        if ch >= self.n_channels() {
            return Err(Error::ChannelIndexOutOfRange {
                index: ch,
                available: self.n_channels(),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_bands_resolve_to_edges() {
        let alpha = BandSpec::named(NamedBand::Alpha);
        assert_eq!((alpha.lo(), alpha.hi()), (8.0, 12.0));
        assert_eq!(alpha.f0, 10.0);
        assert_eq!(alpha.bw, 4.0);
        assert_eq!("GAMMA".parse::<NamedBand>().unwrap(), NamedBand::Gamma);
    }

    #[test]
    fn band_parsing() {
        let b: BandSpec = "12-32".parse().unwrap();
        assert_eq!((b.lo(), b.hi()), (12.0, 32.0));
        assert_eq!("beta".parse::<BandSpec>().unwrap().named, Some(NamedBand::Beta));
        assert!("32-12".parse::<BandSpec>().is_err());
        assert!("foo".parse::<BandSpec>().is_err());
    }

    #[test]
    fn band_validation_against_nyquist() {
        assert!(BandSpec::from_edges(8.0, 12.0).validate(256.0).is_ok());
        assert!(matches!(
            BandSpec::from_edges(100.0, 130.0).validate(256.0),
            Err(Error::BandOutOfNyquist { .. })
        ));
        assert!(BandSpec::from_edges(0.0, 4.0).validate(256.0).is_err());
    }

    #[test]
    fn trial_set_invariants() {
        let t = vec![vec![vec![0.0; 10]; 2]; 3];
        let ts = TrialSet::new(t.clone(), 100.0, vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(ts.n_trials(), 3);
        assert!(ts.clone().with_onsets(vec![0, 5, 5]).is_err());
        assert!(ts.clone().with_onsets(vec![10, 5, 5]).is_err());
        let ts = ts.with_onsets(vec![5, 6, 7]).unwrap();
        assert_eq!(ts.onset_times().unwrap(), vec![0.05, 0.06, 0.07]);
        assert!(matches!(
            ts.channel_view(2),
            Err(Error::ChannelIndexOutOfRange { index: 2, available: 2 })
        ));
        assert!(TrialSet::new(t, 100.0, vec!["a".into()]).is_err());
    }
}
