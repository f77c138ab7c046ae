//! Fixtures shared by the benchmarks.

use motorsig_core::synth::{CouplingSpec, EmgSpec, ErdSpec, NoiseKind, Oscillation};
use motorsig_core::{gen_trial_set, BandSpec, GroundTruth, SynthSpec, TrialSet};

/// A mid-sized recording: every generator feature on, 500 Hz, 6 s trials.
pub fn recording(n_trials: usize, n_channels: usize) -> (TrialSet, GroundTruth) {
    let spec = SynthSpec {
        n_trials,
        n_channels,
        fs: 500.0,
        trial_length_s: 6.0,
        rhythm: Some(Oscillation { freq_hz: 10.0, amplitude: 5.0, drift_hz: 0.5 }),
        erd: Some(ErdSpec { band: BandSpec::from_edges(8.0, 12.0), drop_fraction: 0.4, start_s: 0.0, end_s: 1.0 }),
        coupling: Some(CouplingSpec {
            pair: (0, n_channels - 1),
            band: BandSpec::from_edges(16.0, 24.0),
            amplitude: 5.0,
            pre_onset_plv: 0.2,
            post_onset_plv: 0.8,
        }),
        emg: Some(EmgSpec { amplitude: 40.0, rise_s: 0.05, quiet_std: 2.0, ecg: None }),
        noise_power: 1.0,
        noise: NoiseKind::Pink,
        seed: 7,
        ..Default::default()
    };
    gen_trial_set(&spec).expect("valid bench spec")
}

/// One EEG channel across trials.
pub fn channel(ts: &TrialSet, ch: usize) -> Vec<Vec<f64>> {
    ts.trials().iter().map(|t| t[ch].clone()).collect()
}

/// EEG channels only (the generator appends EMG last).
pub fn eeg(ts: &TrialSet) -> TrialSet {
    let n = ts.n_channels() - 1;
    ts.select_channels(&(0..n).collect::<Vec<_>>()).expect("channels exist")
}
