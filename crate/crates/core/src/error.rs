use thiserror::Error;

use crate::finmap::Element;
use crate::immanence::Witness;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the map algebra, the analyses built on it and the
/// network rewriting layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element ids must be nonempty (set `{set}`)")]
    EmptyElementId { set: String },

    #[error("element `{element}` appears more than once in set `{set}`")]
    DuplicateElement { set: String, element: Element },

    #[error("a product space needs at least one factor")]
    EmptyProduct,

    #[error("domain element `{element}` of `{domain}` is {problem}")]
    NonTotal {
        domain: String,
        element: Element,
        problem: &'static str,
    },

    #[error("`{element}` is not an element of `{set}`")]
    DanglingElement { set: String, element: Element },

    #[error("`{element}` is not in the domain `{domain}`")]
    OutOfDomain { domain: String, element: Element },

    #[error("`{element}` is not in the codomain `{codomain}`")]
    OutOfCodomain { codomain: String, element: Element },

    #[error("space mismatch in {context}: expected `{expected}`, found `{found}`")]
    SpaceMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },

    #[error("relation is multivalued: {0}")]
    Multivalued(Box<Witness>),

    #[error("mapping is transcendent: {0}")]
    TranscendentInput(Box<Witness>),

    #[error("no total map into empty codomain `{codomain}` exists")]
    EmptyCodomain { codomain: String },

    #[error("map is not invertible")]
    NotInvertible,

    #[error("search space of {size} candidates exceeds the cap of {cap}")]
    SearchSpaceExceeded { size: u128, cap: u128 },

    #[error("network contains a directed cycle through node `{node}`")]
    CyclicNetwork { node: String },

    #[error("no value assigned to external input `{external}`")]
    PartialAssignment { external: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("unknown source `{0}`")]
    UnknownSource(String),

    #[error("pair ({primary}, {dependent}) is unsupported: {reason}")]
    UnsupportedTopology {
        primary: String,
        dependent: String,
        reason: String,
    },

    #[error("pair ({primary}, {dependent}) does not match the current network")]
    StalePair { primary: String, dependent: String },

    #[error("{size} external assignments exceed the enumeration cap of {cap}")]
    EnumerationCapExceeded { size: u128, cap: u128 },

    #[error("networks differ in external inputs: {0}")]
    SignatureMismatch(String),

    #[error("network is invalid: {0}")]
    InvalidNetwork(String),
}
