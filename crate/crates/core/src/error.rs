use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar parameter fell outside its allowed range.
    #[error("{name} = {value} is out of range: {expected}")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("unknown mode label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate mode label `{0}`")]
    DuplicateLabel(String),

    #[error("expected {expected} target modes, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("matrix shape {rows}x{cols} does not match {modes} modes")]
    Shape {
        rows: usize,
        cols: usize,
        modes: usize,
    },

    #[error("covariance matrix is not symmetric (max deviation {0:e})")]
    NotSymmetric(f64),

    #[error("state is unphysical: {0}")]
    Unphysical(String),

    #[error("matrix is not symplectic (max deviation {0:e})")]
    NotSymplectic(f64),

    #[error("partial trace must keep at least one mode")]
    EmptyKeep,

    #[error("cannot condition on `{0}`: no other mode would remain")]
    LastMode(String),

    #[error("channel (tau = {tau}, v = {v}) violates v >= |1 - tau|")]
    UnphysicalChannel { tau: f64, v: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("black box is not phase-insensitive: {0}")]
    NotPhaseInsensitive(String),

    /// Two independent computations of the same quantity disagree.
    #[error("inconsistent result: {0}")]
    Inconsistent(String),

    #[error("resource cannot realize gain lambda = {lambda}: noise {v_tel} < |1 - lambda|")]
    UnrealizableGain { lambda: f64, v_tel: f64 },
}

pub(crate) fn domain(name: &'static str, value: f64, expected: &'static str) -> Error {
    Error::Domain {
        name,
        value,
        expected,
    }
}
