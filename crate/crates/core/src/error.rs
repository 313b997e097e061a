use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Where in the encode pipeline a failure surfaced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// Projecting the keys and folding in the primary key.
    KeySetup,
    /// Flushing the block that ends at the matched byte at `offset`.
    BlockFlush { offset: usize },
    /// Flushing the bytes left after the last identifier match.
    TrailingFlush,
    /// Folding the identifier projection into the tag one last time.
    Finalize,
    /// Mapping the final circle point back onto the line.
    BackProjection,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::KeySetup => f.write_str("key setup"),
            Step::BlockFlush { offset } => write!(f, "block flush at byte {offset}"),
            Step::TrailingFlush => f.write_str("trailing block flush"),
            Step::Finalize => f.write_str("finalization"),
            Step::BackProjection => f.write_str("back-projection"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("angle must be finite, got {0}")]
    InvalidAngle(f64),

    #[error("line coordinate must be finite, got {0}")]
    InvalidCoordinate(f64),

    #[error("reference point {pole} coincides with the tangent point; projection is undefined")]
    DegenerateReference { pole: f64 },

    #[error("circle point {theta} has no finite preimage for reference point {pole}")]
    PoleProjection { theta: f64, pole: f64 },

    #[error("invalid identifier: {0}")]
    InvalidIdentifier(&'static str),

    #[error("invalid key: {0}")]
    InvalidKey(&'static str),

    #[error("invalid heuristic: {0}")]
    InvalidHeuristic(&'static str),

    #[error("block of {len} bytes folded to a non-finite value")]
    BlockOverflow { len: usize },

    #[error("malformed tag: {0}")]
    Parse(String),

    #[error("{step}: {source}")]
    Encode {
        step: Step,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, step: Step) -> Error {
        Error::Encode {
            step,
            source: Box::new(self),
        }
    }

    /// The underlying error with any pipeline step context stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Encode { source, .. } => source.root(),
            e => e,
        }
    }

    /// The pipeline step that failed, if this error came out of encoding.
    pub fn step(&self) -> Option<Step> {
        match self {
            Error::Encode { step, .. } => Some(*step),
            _ => None,
        }
    }

    /// True for numeric dead ends of the pipeline (as opposed to bad input).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self.root(),
            Error::DegenerateReference { .. }
                | Error::PoleProjection { .. }
                | Error::BlockOverflow { .. }
        )
    }
}
