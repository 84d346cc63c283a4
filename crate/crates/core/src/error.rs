use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("not an involution: sigma * sigma != identity")]
    NotInvolution,
    #[error("twist mismatch: {0} vs {1}")]
    TwistMismatch(u8, u8),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("invalid real torus: {0}")]
    InvalidTorus(String),
    #[error("invalid polarization: {0}")]
    InvalidPolarization(String),
    #[error("polarization is not principal (degree {0})")]
    NotPrincipal(String),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("invalid type: {0}")]
    InvalidType(String),
    #[error("invalid period data: {0}")]
    InvalidPeriod(String),
    #[error("postcondition failed: {0}")]
    Postcondition(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("inhomogeneous element")]
    Inhomogeneous,
    #[error("incompatible isogeny: {0}")]
    IncompatibleIsogeny(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
