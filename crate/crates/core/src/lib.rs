//! Immanence analysis of counter-cascaded finite maps and nodal
//! rationalization of dataflow networks.
//!
//! The crate is layered bottom-up:
//!
//! - [`finmap`]: finite sets, total maps, composition, fibers and products.
//! - [`relation`]: the relation `N∘T∘M⁻¹`, single-valuedness and best-fit
//!   models.
//! - [`immanence`]: the immanence decision, faithful models, factor
//!   recovery, bidirectional classification and candidate solving.
//! - [`network`]: dataflow networks of finite-map nodes and the merge
//!   rewrites that remove nodes whose output is a function of another's.
//! - [`io`]: the network document format, DOT export and reports.

pub mod error;
pub mod finmap;
pub mod immanence;
pub mod io;
pub mod network;
pub mod relation;

pub use error::{Error, Result};
pub use finmap::{
    compose, fork, product_map, product_space, Element, FiniteMap, FiniteSet, Partition,
};
pub use immanence::{
    canonical_factor, check, check_definitional, check_relational, classify_bidirectional,
    corollary_audit, extract_model, solve_for_t, test_candidate_t, BiClassification, BiLabel,
    CorollaryReport, Status, Verdict, Witness,
};
pub use network::{
    behavior_equivalent, evaluate, find_pairs, rationalize, rationalize_step, resolve_exogenous,
    validate, CounterCascadedPair, Network, Node, ReductionReport, Source,
};
pub use relation::{
    approximate, relation_of, single_valuedness, to_map, ApproxModel, Criterion, Relation,
};
