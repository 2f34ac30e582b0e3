//! A rewriting engine over two exact carriers: finite sets and
//! finite-dimensional rational vector spaces.
//!
//! Rewriting systems are modelled as internal graphs -- an object of rewrite
//! steps with source and target maps into the object being rewritten.
//! Termination is expressed by a filtration of the base object indexed by a
//! terminating poset, together with a local strategy choosing one decreasing
//! step per non-normal element. Local strategies induce global strategies
//! (full reduction paths and a normal-form assignment), confluence becomes an
//! equation on the normal-form map, and confluent strategies yield split
//! coequalizer certificates identifying the quotient with the object of
//! normal forms. Local-confluence structures provide the generalized version
//! of Newman's lemma, checked stage by stage.
//!
//! Everything is exact: set maps are finite tables, linear maps are
//! arbitrary-precision rational matrices, and every theorem-shaped claim the
//! engine produces is re-verified by direct evaluation.

pub mod carrier;
pub mod confluence;
pub mod filtration;
pub mod graph;
pub mod instances;
pub mod linalg;
pub mod linear;
pub mod strategy;
pub mod termination;

use thiserror::Error as ThisError;

/// Errors shared by all layers of the engine.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("duplicate label '{0}'")]
    DuplicateLabel(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("objects of different kinds")]
    KindMismatch,
    #[error("domain does not match")]
    DomainMismatch,
    #[error("codomains do not match")]
    CodomainMismatch,
    #[error("maps are not parallel")]
    NotParallel,
    #[error("graphs are not over the same base object")]
    BaseMismatch,
    #[error("paths are not composable: {0}")]
    NotComposable(String),
    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("target graph lacks the required structure: {0}")]
    MissingStructure(String),
    #[error("relation is not terminating: {0}")]
    NotTerminating(String),
    #[error("rule is not strictly decreasing: {0}")]
    NotDecreasing(String),
    #[error("step decomposition does not match: {0}")]
    DecompositionMismatch(String),
    #[error("not a well-formed reduction step: {0}")]
    NotWellFormedStep(String),
    #[error("conversion search exhausted at step '{0}'")]
    Exhausted(String),
    #[error("invalid local-confluence structure: {0}")]
    InvalidLc(String),
    #[error("strategy is not confluent: {0}")]
    NotConfluent(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("internal invariant violated (engine bug): {0}")]
    InternalInvariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
