use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no rule for generator {generator} under {derivation}")]
    MissingRule { generator: String, derivation: String },
    #[error("Pfaffian of odd size {0}")]
    OddSize(usize),
    #[error("size {size} exceeds limit {limit}")]
    SizeLimit { size: usize, limit: usize },
    #[error("invalid instance: {0}")]
    InvalidSpec(String),
    #[error("degree {degree} in component {comp} exceeds bound {bound}")]
    BoundExceeded { comp: u8, degree: u32, bound: u32 },
    #[error("tau index ({0},{1}) has odd total")]
    OddParity(u32, u32),
    #[error("form index ({0},{1}) has even total")]
    EvenParity(u32, u32),
    #[error("linear system is singular (index not normal)")]
    NotNormal,
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("unknown equation {0:?}")]
    UnknownEquation(String),
    #[error("operation needs a generic instance")]
    RequiresGeneric,
    #[error("configuration error: {0}")]
    Config(String),
}
