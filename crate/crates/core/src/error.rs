use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A size parameter was zero or otherwise out of its domain.
    InvalidSize(&'static str),
    InvalidArgument(String),
    /// A circulant connection set contained 0.
    SelfLoopRejected,
    Unsupported(String),
    NumericFailure(String),
    AmbiguousDegeneracy {
        eigenvalue: f64,
        diameter: f64,
    },
    NotConnected,
    NotSimple {
        gap: f64,
    },
    NonCommuting {
        residual: f64,
    },
    NotEquitable(String),
    VertexOutOfRange {
        index: usize,
        n: usize,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSize(what) => write!(f, "invalid size: {what}"),
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::SelfLoopRejected => write!(f, "circulant connection set must not contain 0"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::NumericFailure(msg) => write!(f, "numeric failure: {msg}"),
            Error::AmbiguousDegeneracy {
                eigenvalue,
                diameter,
            } => write!(
                f,
                "ambiguous degeneracy near eigenvalue {eigenvalue}: cluster diameter {diameter:e}"
            ),
            Error::NotConnected => write!(f, "graph is not connected"),
            Error::NotSimple { gap } => {
                write!(f, "top eigenvalue is not simple (gap {gap:e})")
            }
            Error::NonCommuting { residual } => {
                write!(f, "matrices do not commute (residual {residual:e})")
            }
            Error::NotEquitable(msg) => write!(f, "partition is not equitable: {msg}"),
            Error::VertexOutOfRange { index, n } => {
                write!(f, "vertex {index} out of range for graph on {n} vertices")
            }
        }
    }
}

impl core::error::Error for Error {}
