use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid array configuration: {0}")]
    Config(String),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("{interferers} interferers need more than {interferers} antennas, have {antennas}")]
    TooManyInterferers { interferers: usize, antennas: usize },
    #[error("desired direction lies in the interference span")]
    DegenerateGeometry,
    #[error("steering vector has no response after combining")]
    DegenerateSteering,
    #[error("loaded covariance is numerically singular")]
    IllConditioned,
    #[error("no snapshots supplied")]
    EmptyData,
    #[error("beamformer is identically zero")]
    ZeroBeamformer,
}
