use std::fmt;

use motorsig_core::Error as CoreError;

/// Exit status classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Validation = 1,
    Io = 2,
    Compute = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { kind: Kind::Validation, message: message.into() }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError { kind: Kind::Io, message: message.into() }
    }

    pub fn with_context(self, ctx: &str) -> Self {
        CliError { kind: self.kind, message: format!("{ctx}: {}", self.message) }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind as i32
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let kind = match e.root() {
            CoreError::BadMagic
            | CoreError::TruncatedPayload { .. }
            | CoreError::InvalidScaling { .. }
            | CoreError::InvalidHeader { .. }
            | CoreError::UnknownRecordCount
            | CoreError::HeaderFieldOverflow { .. }
            | CoreError::ValueOutOfDigitalRange { .. }
            | CoreError::Io(_) => Kind::Io,
            CoreError::ChannelIndexOutOfRange { .. }
            | CoreError::OddOrder(_)
            | CoreError::BandOutOfNyquist { .. }
            | CoreError::SamplingTooLow { .. }
            | CoreError::ReferenceOutsideSignal { .. }
            | CoreError::UnknownMethod(_)
            | CoreError::BadPair(_)
            | CoreError::InvalidParameter(_)
            | CoreError::InvalidSpec(_) => Kind::Validation,
            _ => Kind::Compute,
        };
        CliError { kind, message: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::io(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
