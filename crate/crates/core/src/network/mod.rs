//! Dataflow networks whose nodes are finite maps.
//!
//! A node reads an ordered list of sources (external inputs or components of
//! other nodes' outputs) and its map is defined on the product of their
//! spaces. Merging a node into another turns the survivor into a supernode
//! with a tuple output; consumers then read individual tuple components
//! through a component path such as `A+C.1`.

mod eval;
mod rewrite;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::finmap::{product_space, Element, FiniteMap, FiniteSet};

pub use eval::{
    assignments, behavior_equivalent, evaluate, read_source, sources_agree, topological_order,
    Assignment, DEFAULT_ENUMERATION_CAP,
};
pub use rewrite::{
    find_pairs, rationalize, rationalize_step, rationalize_with, resolve_exogenous,
    CounterCascadedPair, RationalizeOptions, ReductionReport, ReductionStep, StepOutcome,
};
pub use validate::{validate, Diagnostic};

/// Where a node input (or a designated network output) reads from.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    External(String),
    /// Component `path` of a node's output; an empty path is the whole output.
    Node {
        id: String,
        path: Vec<usize>,
    },
}

impl Source {
    pub fn external(name: impl Into<String>) -> Self {
        Source::External(name.into())
    }

    pub fn node(id: impl Into<String>) -> Self {
        Source::Node {
            id: id.into(),
            path: Vec::new(),
        }
    }

    pub fn component(id: impl Into<String>, path: impl Into<Vec<usize>>) -> Self {
        Source::Node {
            id: id.into(),
            path: path.into(),
        }
    }

    pub fn node_id(&self) -> Option<&str> {
        match self {
            Source::Node { id, .. } => Some(id),
            Source::External(_) => None,
        }
    }

    pub fn is_external(&self) -> bool {
        matches!(self, Source::External(_))
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::External(name) => f.write_str(name),
            Source::Node { id, path } => {
                f.write_str(id)?;
                for i in path {
                    write!(f, ".{i}")?;
                }
                Ok(())
            }
        }
    }
}

/// Record of how a supernode was formed: its map is
/// `fork(I, model) ∘ primary_map`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Composed form, e.g. `(I⊕C̄)∘A`.
    pub label: String,
    /// Ids of the original nodes folded into this one.
    pub merged: Vec<String>,
    pub primary_map: FiniteMap,
    pub model: FiniteMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub inputs: Vec<Source>,
    pub map: FiniteMap,
    pub provenance: Option<Provenance>,
}

impl Node {
    pub fn new(id: impl Into<String>, inputs: Vec<Source>, map: FiniteMap) -> Self {
        Node {
            id: id.into(),
            inputs,
            map,
            provenance: None,
        }
    }

    pub fn output_space(&self) -> &FiniteSet {
        self.map.codomain()
    }

    pub fn is_supernode(&self) -> bool {
        self.provenance.is_some()
    }

    /// `label` for supernodes, the id otherwise.
    pub fn display_label(&self) -> &str {
        self.provenance
            .as_ref()
            .map_or(self.id.as_str(), |p| p.label.as_str())
    }
}

/// A network of finite-map nodes. Collections are keyed by name so that
/// iteration order is canonical.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Network {
    /// Declared atomic spaces.
    pub spaces: BTreeMap<String, FiniteSet>,
    /// External input ports and their spaces.
    pub externals: BTreeMap<String, FiniteSet>,
    pub nodes: BTreeMap<String, Node>,
    /// Designated outputs by name.
    pub outputs: BTreeMap<String, Source>,
    /// Named standalone maps, e.g. output ancillary maps used in checks.
    pub maps: BTreeMap<String, FiniteMap>,
}

impl Network {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_space(&mut self, space: FiniteSet) -> &mut Self {
        self.spaces.insert(space.name().to_owned(), space);
        self
    }

    pub fn space(&self, name: &str) -> Result<&FiniteSet> {
        self.spaces
            .get(name)
            .ok_or_else(|| Error::InvalidNetwork(format!("unknown space `{name}`")))
    }

    pub fn add_external(&mut self, name: impl Into<String>, space: &str) -> Result<&mut Self> {
        let space = self.space(space)?.clone();
        self.externals.insert(name.into(), space);
        Ok(self)
    }

    /// Adds a node whose map is tabulated from `f`, called with the input
    /// values in port order.
    pub fn add_node_fn<F>(
        &mut self,
        id: &str,
        inputs: Vec<Source>,
        output: FiniteSet,
        mut f: F,
    ) -> Result<&mut Self>
    where
        F: FnMut(&[Element]) -> Element,
    {
        let spaces = inputs
            .iter()
            .map(|s| {
                self.source_space(s)
                    .ok_or_else(|| Error::UnknownSource(s.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let domain = product_space(&spaces)?;
        let map = FiniteMap::from_fn(domain, output, |u| match u {
            Element::Tuple(parts) => f(parts),
            atom => f(std::slice::from_ref(atom)),
        })?;
        self.nodes.insert(id.to_owned(), Node::new(id, inputs, map));
        Ok(self)
    }

    pub fn add_output(&mut self, name: impl Into<String>, source: Source) -> &mut Self {
        self.outputs.insert(name.into(), source);
        self
    }

    pub fn node(&self, id: &str) -> Result<&Node> {
        self.nodes
            .get(id)
            .ok_or_else(|| Error::UnknownNode(id.to_owned()))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Space carried by `source`, if it resolves.
    pub fn source_space(&self, source: &Source) -> Option<FiniteSet> {
        match source {
            Source::External(name) => self.externals.get(name).cloned(),
            Source::Node { id, path } => self.nodes.get(id)?.output_space().component_space(path),
        }
    }

    /// Resolves a textual source: an external name, a node id, or a node id
    /// followed by `.k` component indices.
    pub fn parse_source(&self, text: &str) -> Result<Source> {
        if self.externals.contains_key(text) {
            return Ok(Source::external(text));
        }
        let mut parts = text.split('.');
        let id = parts.next().unwrap_or_default();
        if !self.nodes.contains_key(id) {
            return Err(Error::UnknownSource(text.to_owned()));
        }
        let path = parts
            .map(|p| p.parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::UnknownSource(text.to_owned()))?;
        let source = Source::component(id, path);
        match self.source_space(&source) {
            Some(_) => Ok(source),
            None => Err(Error::UnknownSource(text.to_owned())),
        }
    }

    /// Node-to-node edges `(from, to, path)` in canonical order.
    pub fn edges(&self) -> Vec<(&str, &str, &[usize])> {
        let mut edges = Vec::new();
        for node in self.nodes.values() {
            for input in &node.inputs {
                if let Source::Node { id, path } = input {
                    edges.push((id.as_str(), node.id.as_str(), path.as_slice()));
                }
            }
        }
        edges
    }
}
