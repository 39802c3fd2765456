use thiserror::Error;

/// Crate-wide error type. Diagnostic variants carry the first witness
/// found so failures replay standalone.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("not a partial order: {reason}; witness elements {witness:?}")]
    NotAPartialOrder {
        reason: &'static str,
        witness: Vec<usize>,
    },

    #[error("not a bounded lattice: {reason}; witness elements {witness:?}")]
    NoBoundedLattice {
        reason: &'static str,
        witness: Vec<usize>,
    },

    #[error("not distributive: a={a}, b={b}, c={c} violate a∧(b∨c) = (a∧b)∨(a∧c)")]
    NotDistributive { a: usize, b: usize, c: usize },

    #[error("size limit exceeded in {context}: needed {needed}, cap {cap}")]
    SizeLimitExceeded {
        context: &'static str,
        needed: usize,
        cap: usize,
    },

    #[error("map is not injective: elements {a} and {b} share image {image}")]
    NotInjective { a: usize, b: usize, image: usize },

    #[error("map is not a frame homomorphism: {law} fails at {witness:?}")]
    NotAHom { law: &'static str, witness: Vec<usize> },

    #[error("biframe generation fails: element {element} is not a join of generator meets")]
    GenerationFails { element: usize },

    #[error("not a congruence: {reason}; witness elements {witness:?}")]
    NotACongruence {
        reason: &'static str,
        witness: Vec<usize>,
    },

    #[error("assembly map is not well defined: generator congruence {index} maps outside the target side")]
    NotWellDefined { index: usize },

    #[error("no mediating map: {reason}")]
    NoMediatingMap { reason: String },

    #[error("mediating map is not unique")]
    NonUniqueMediatingMap,

    #[error("missing bicomplement for generator {element} on the {side} side")]
    MissingBicomplement { element: usize, side: &'static str },

    #[error("unknown suite: {0}")]
    UnknownSuite(String),

    #[error("bad input: {0}")]
    BadInput(String),

    #[error("io error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
