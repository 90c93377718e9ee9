//! Cubic Dirac operators, Dirac cohomology and Kostant (co)homology for
//! parabolic decompositions of gl(m|n), computed in exact arithmetic.

pub mod clifford;
pub mod dirac;
pub mod kostant;
pub mod parabolic;
pub mod qlinalg;
pub mod rootdata;
pub mod superalg;
pub mod supermodules;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    Dimensions(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("incompatible parabolic: {0}")]
    Incompatible(String),
    #[error("size cap exceeded: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
