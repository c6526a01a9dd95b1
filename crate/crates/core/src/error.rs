use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("malformed polynomial at byte {pos}: {msg}")]
    Malformed { pos: usize, msg: String },
    #[error("coefficient {0} is not defined in characteristic {1}")]
    NotReducible(String, u64),
    #[error("characteristic {0} is neither 0 nor a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("polynomials live in different rings")]
    RingMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArtinError {
    #[error("structure constants have inconsistent dimensions")]
    Shape,
    #[error("multiplication is not commutative on basis pair ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("the given unit is not a multiplicative identity")]
    NotUnital,
    #[error("the span of the non-unit basis elements is not nilpotent")]
    NotLocal,
    #[error("monomial ideal is not primary to the maximal ideal: variable {0} has no pure power")]
    NotPrimary(usize),
    #[error("algebras over different fields")]
    FieldMismatch,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("no point count supplied for generator {0}")]
    MissingCount(String),
    #[error("specialization is not integral: {0}")]
    NonIntegral(String),
    #[error("specialization needs q >= 2")]
    BadQ,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("branch vector tags coordinate {0}, which is already tagged")]
    TagConflict(usize),
    #[error("tuple length {0} does not match ambient dimension {1}")]
    Arity(usize, usize),
    #[error("zero polynomial has no twisted initial form")]
    ZeroPolynomial,
    #[error("tree has {0} stuck leaves")]
    Stuck(usize),
    #[error("recursion system is not triangular: {0}")]
    NonTriangular(String),
    #[error("unsupported tree root {0}; use the zero tuple or the all-ones tuple")]
    Root(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("only prime fields are supported, got q = {0}")]
    NotPrime(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Class(#[from] ClassError),
}
