use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeckeError {
    #[error("invalid Cartan matrix entry ({row}, {col}) = {value}: {reason}")]
    InvalidCartan { row: usize, col: usize, value: i64, reason: &'static str },

    #[error("root system is not of finite type (more than {0} roots generated)")]
    NotFiniteType(usize),

    #[error("unknown root datum `{0}`")]
    UnknownDatum(String),

    #[error("Weyl group enumeration exceeded the cap of {cap} elements")]
    WeylCapExceeded { cap: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("bounds matrix is not closed under multiplication at (i, j, k) = ({i}, {j}, {k})")]
    ClosureViolation { i: usize, j: usize, k: usize },

    #[error("bounds matrix invalid: {0}")]
    InvalidBounds(String),

    #[error("subgroup is not contained in the reference group at entry ({0}, {1})")]
    NotContained(usize, usize),

    #[error("depth {0} is not supported (only depth 1 is implemented)")]
    UnsupportedDepth(u32),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("representation is reducible (<chi, chi> = {0})")]
    Reducible(String),

    #[error("quotient {0} is not abelian")]
    NonAbelianQuotient(String),

    #[error("invalid group model: {0}")]
    InvalidModel(String),

    #[error("not a single Weyl orbit: {0}")]
    NotAnOrbit(String),

    #[error("datum is not of type GL_n: {0}")]
    NotGl(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),
}

pub type Result<T> = std::result::Result<T, HeckeError>;
