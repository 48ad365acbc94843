//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an integer")]
    NotAnInteger(String),
    #[error("denominator is divisible by {0}")]
    DivisionByZeroModP(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("{0} is not divisible by {1}")]
    NotDivisible(String, String),
    #[error("cannot parse scalar {0:?}")]
    BadScalar(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("Smith reduction requires integer or prime-field entries; rationals use the rank-only field path")]
    FieldPathMismatch,
    #[error("map does not respect relations: {0}")]
    IllDefinedMap(String),
    #[error("composite of differentials is nonzero: {0}")]
    CompositionNonzero(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown morphism {0:?}")]
    UnknownMorphism(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("invalid site: {0}")]
    InvalidSite(String),
    #[error("presheaf is not functorial: {0}")]
    NotFunctorial(String),
    #[error("square does not commute: {0}")]
    NonCommutingSquare(String),
    #[error("simplicial identity violated: {0}")]
    SimplicialIdentity(String),
    #[error("missing fiber product: {0}")]
    MissingFiberProduct(String),
    #[error("not a hypercover: {0}")]
    NotHypercover(String),
    #[error("not semi-representable: {0}")]
    NotSemiRepresentable(String),
    #[error("resolution strategy infeasible: {0}")]
    StrategyInfeasible(String),
    #[error("degree {0} outside validity window [{1}, {2}]")]
    OutsideValidity(i64, i64, i64),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("colimit did not stabilize; best lower bound reported")]
    Unstabilized,
}
