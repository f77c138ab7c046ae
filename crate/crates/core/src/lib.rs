//! Motor-cortex biosignal analysis: BDF ingestion, conditioning, ERP and
//! ERD/ERS quantification, phase and coherence connectivity, EMG analysis
//! and a seeded synthetic trial generator.

pub mod bdf;
pub mod connectivity;
pub mod defaults;
pub mod dsp;
pub mod elliptic;
pub mod emg;
pub mod erp;
pub mod error;
pub mod load;
pub mod precondition;
pub mod rng;
pub mod synth;
pub mod types;

pub use connectivity::{ConnectivityMap, ConnectivityOptions, Measure, PairSpec, TimeCourse};
pub use emg::{OnsetParams, OnsetResult, QuantifiedEmg};
pub use erp::{ErdErsReport, ErpCurve, SynchronizedTrials, TfMap, TfMethod};
pub use error::{Error, Result};
pub use load::{load_trial_set, LoadOptions, LoadedTrials};
pub use precondition::BaselineApproach;
pub use synth::{gen_trial_set, GroundTruth, SynthSpec};
pub use types::{BandSpec, NamedBand, Signal, TrialSet};
