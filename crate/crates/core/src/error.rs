use std::path::PathBuf;

use thiserror::Error;

/// Every failure the analysis pipeline can report.
///
/// Variant names follow the error vocabulary used throughout the crate docs
/// (`BadMagic`, `TrialTooShort`, `NoOnsetDetected`, ...) so callers can match
/// on them and the CLI can print them verbatim.
#[derive(Debug, Error)]
pub enum Error {
    // --- BDF container ---
    #[error("BadMagic: file does not start with 0xFF \"BIOSEMI\"")]
    BadMagic,
    #[error("TruncatedPayload: expected {expected} bytes, found {actual}")]
    TruncatedPayload { expected: usize, actual: usize },
    #[error("InvalidScaling: channel {channel} has a degenerate digital or physical range")]
    InvalidScaling { channel: usize },
    #[error("InvalidHeader: field `{field}` has unusable value {value:?}")]
    InvalidHeader { field: &'static str, value: String },
    #[error("UnknownRecordCount: header declares -1 data records")]
    UnknownRecordCount,
    #[error("HeaderFieldOverflow: `{field}` value {value:?} does not fit its fixed-width slot")]
    HeaderFieldOverflow { field: &'static str, value: String },
    #[error("ValueOutOfDigitalRange: channel {channel} sample {sample} maps to digital value {digital}")]
    ValueOutOfDigitalRange { channel: usize, sample: usize, digital: i64 },
    #[error("ShapeMismatch: {0}")]
    ShapeMismatch(String),
    #[error("ChannelIndexOutOfRange: channel {index} requested, {available} available")]
    ChannelIndexOutOfRange { index: usize, available: usize },
    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    // --- signal conditioning ---
    #[error("EmptySignal: operation needs at least one sample")]
    EmptySignal,
    #[error("WindowTooLarge: window of {window} samples exceeds signal length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("SignalTooShort: need at least {needed} samples, got {actual}")]
    SignalTooShort { needed: usize, actual: usize },
    #[error("OddOrder: filter order {0} must be even and at least 2")]
    OddOrder(usize),
    #[error("BandOutOfNyquist: band [{lo:.3}, {hi:.3}] Hz not inside (0, {nyquist:.3}) Hz")]
    BandOutOfNyquist { lo: f64, hi: f64, nyquist: f64 },
    #[error("SamplingTooLow: fs = {fs} Hz must exceed {min} Hz")]
    SamplingTooLow { fs: f64, min: f64 },

    // --- trial handling / ERP ---
    #[error("EmptyTrialSet: no trials supplied")]
    EmptyTrialSet,
    #[error("TrialTooShort: trial {trial} cannot supply the requested span")]
    TrialTooShort { trial: usize },
    #[error("InconsistentTrials: {0}")]
    InconsistentTrials(String),
    #[error("ReferenceOutsideSignal: reference period [{lo}, {hi}] s not inside the pre-trigger signal")]
    ReferenceOutsideSignal { lo: f64, hi: f64 },
    #[error("ZeroReference: reference period has zero mean power")]
    ZeroReference,
    #[error("UnknownMethod: {0:?} (expected STFT, CWT or NBCH)")]
    UnknownMethod(String),

    // --- connectivity ---
    #[error("LengthMismatch: phase sequences have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("EmptyPhase: phase sequence has no samples")]
    EmptyPhase,
    #[error("WindowOutsideTrials: window [{start}, {end}] s relative to trigger is not covered by every trial")]
    WindowOutsideTrials { start: f64, end: f64 },
    #[error("BadPair: {0}")]
    BadPair(String),
    #[error("WindowTooShortForSegments: {segments} segment(s) x {trials} trial(s) cannot form a coherence ensemble")]
    WindowTooShortForSegments { segments: usize, trials: usize },

    // --- EMG ---
    #[error("NoOnsetDetected: threshold {threshold} never persistently exceeded")]
    NoOnsetDetected { threshold: f64 },

    // --- generic ---
    #[error("InvalidParameter: {0}")]
    InvalidParameter(String),
    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
}

impl Error {
    /// Wraps an error with the path of the file that produced it.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        Error::InFile {
            path: path.into(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with file context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::InFile { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
