//! Network documents, Graphviz export and JSON reports.

mod document;
mod dot;
pub mod report;
pub mod syntax;

pub use document::{
    document_from_network, network_from_document, parse_network, serialize_network, DocumentError,
    MapDocument, NetworkDocument, NodeDocument, ProvenanceDocument, FORMAT_VERSION,
};
pub use dot::export_dot;
