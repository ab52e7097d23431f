use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("invalid height range: hmin {hmin} > hmax {hmax}")]
    InvalidHeightRange { hmin: f64, hmax: f64 },
    #[error("invalid TIN: {0}")]
    InvalidTin(&'static str),
    #[error("query point ({x}, {y}) is outside the terrain bounds")]
    OutOfBounds { x: f64, y: f64 },
    #[error("invalid view parameters: {0}")]
    InvalidViewParams(&'static str),
    #[error("altitude-too-low: flight altitude {h} must exceed terrain maximum {lmax}")]
    AltitudeTooLow { h: f64, lmax: f64 },
    #[error("precondition-m-ge-3: lower bound needs at least 3 disjoint disks, got {0}")]
    TooFewDisjointDisks(usize),
    #[error("exact TSP supports at most {max} points, got {got}")]
    TooManyPoints { max: usize, got: usize },
    #[error("instance-too-large: exact solver supports at most {max} sets, got {got}")]
    InstanceTooLarge { max: usize, got: usize },
    #[error("exact solver work limit of {0} relaxations exceeded")]
    WorkLimitExceeded(u64),
    #[error("invalid instance: {0}")]
    InvalidInstance(&'static str),
    #[error("not-degree-feasible: set {0} does not have exactly one outgoing edge")]
    NotDegreeFeasible(usize),
    #[error("empty input: {0}")]
    Empty(&'static str),
}
