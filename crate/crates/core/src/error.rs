use thiserror::Error;

use crate::lattice::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands belong to different semifield instances")]
    InstanceMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("value {0} is not a positive rational")]
    NotPositive(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("heights array does not match the domain: {0}")]
    ShapeMismatch(String),

    #[error("invalid section: {0}")]
    InvalidSection(Violation),

    #[error("sections disagree in parity at ({x},{y})")]
    ParityMismatch { x: i64, y: i64 },

    #[error("rule needs the {0} neighbour, which is missing")]
    MissingNeighbor(&'static str),

    #[error("site ({x},{y}) is not movable in that direction")]
    NotMovable { x: i64, y: i64 },

    #[error("target section is unreachable: {0}")]
    UnreachableTarget(String),

    #[error("point ({x},{y},{t}) is not a lattice point of the domain")]
    NotOnLattice { x: i64, y: i64, t: i64 },

    #[error("no value is available at ({x},{y},{t})")]
    MissingValue { x: i64, y: i64, t: i64 },

    #[error("point ({x},{y},{t}) is not on the section")]
    NotOnSection { x: i64, y: i64, t: i64 },

    #[error("apex ({x},{y},{t}) lies on the boundary of the domain")]
    ApexOnBoundary { x: i64, y: i64, t: i64 },

    #[error("apex ({x},{y},{t}) is not in the future of the section")]
    NotInFuture { x: i64, y: i64, t: i64 },

    #[error("light cone does not meet the section")]
    ConeMissesSection,

    #[error("exponent {value} at ({x},{y}) is not an integer")]
    NonIntegralExponent { x: i64, y: i64, value: String },

    #[error("complex admits no matching")]
    NoMatchings,

    #[error("formula paths disagree: {0} vs {1}")]
    PathMismatch(String, String),

    #[error("boundary path does not fit the state: {0}")]
    PathMismatchState(String),

    #[error("invalid boundary path: {0}")]
    InvalidPath(String),

    #[error("inconsistent cone geometry: {0}")]
    Geometry(String),

    #[error("map is not a lattice bijection for n = {0}")]
    NotBijective(i64),

    #[error("invalid prism point ({x},{y},{z})")]
    NotInPrism { x: i64, y: i64, z: i64 },
}
