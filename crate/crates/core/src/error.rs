use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("mesh has no triangles after cleanup")]
    EmptyMesh,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("mesh volume is not positive ({0})")]
    NonPositiveVolume(f64),
    #[error("degenerate placement frame: {0}")]
    DegenerateFrame(String),
    #[error("pose matches no enumerated planar placement")]
    NoMatchingPlacement,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("empty report: {0}")]
    EmptyReport(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used in structured error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::EmptyMesh => "empty_mesh",
            Error::DegenerateInput(_) => "degenerate_input",
            Error::NonPositiveVolume(_) => "non_positive_volume",
            Error::DegenerateFrame(_) => "degenerate_frame",
            Error::NoMatchingPlacement => "no_matching_placement",
            Error::Config(_) => "config",
            Error::EmptyReport(_) => "empty_report",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
