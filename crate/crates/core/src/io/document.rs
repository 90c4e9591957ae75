//! The versioned JSON network document.
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "spaces": { "Bit": ["0", "1"] },
//!   "externals": { "p": "Bit", "q": "Bit" },
//!   "nodes": {
//!     "A": { "inputs": ["p", "q"], "output": "Bit", "table": ["0 0 -> 0", "..."] }
//!   },
//!   "outputs": { "a": "A" }
//! }
//! ```
//!
//! Keys are sorted, tables list domain elements in canonical order, and the
//! pretty-printed form ends with a newline, so serializing a parsed canonical
//! document reproduces it byte for byte.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::syntax::{
    is_atom, map_row, node_row, parse_map_row, parse_node_row, parse_space, space_expr,
};
use crate::finmap::{product_space, FiniteMap, FiniteSet};
use crate::network::{validate, Network, Node, Provenance, Source};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {location}: {message}")]
    Schema { location: String, message: String },
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
}

fn invalid(path: impl Into<String>, message: impl ToString) -> DocumentError {
    DocumentError::Validation {
        path: path.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDocument {
    pub format_version: u32,
    pub spaces: BTreeMap<String, Vec<String>>,
    pub externals: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDocument>,
    pub nodes: BTreeMap<String, NodeDocument>,
    #[serde(default)]
    pub outputs: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDocument {
    pub inputs: Vec<String>,
    pub output: String,
    pub table: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<ProvenanceDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProvenanceDocument {
    pub label: String,
    pub merged: Vec<String>,
    pub primary_output: String,
    pub primary_table: Vec<String>,
    pub model_table: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDocument {
    pub domain: String,
    pub codomain: String,
    pub table: Vec<String>,
}

pub fn parse_network(text: &str) -> Result<Network, DocumentError> {
    let doc: NetworkDocument = serde_json::from_str(text).map_err(|e| {
        use serde_json::error::Category;
        match e.classify() {
            Category::Data => DocumentError::Schema {
                location: format!("line {}, column {}", e.line(), e.column()),
                message: e.to_string(),
            },
            _ => DocumentError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            },
        }
    })?;
    network_from_document(&doc)
}

pub fn network_from_document(doc: &NetworkDocument) -> Result<Network, DocumentError> {
    if doc.format_version != FORMAT_VERSION {
        return Err(DocumentError::Schema {
            location: "format_version".into(),
            message: format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                doc.format_version
            ),
        });
    }
    if doc.spaces.is_empty() {
        return Err(DocumentError::Schema {
            location: "spaces".into(),
            message: "at least one space must be declared".into(),
        });
    }

    let mut net = Network::new();
    for (name, elements) in &doc.spaces {
        let path = format!("spaces.{name}");
        if !is_atom(name) {
            return Err(invalid(path, "space names must be atoms"));
        }
        if let Some((i, bad)) = elements.iter().enumerate().find(|(_, e)| !is_atom(e)) {
            return Err(invalid(
                format!("{path}[{i}]"),
                format!("`{bad}` is not an atom"),
            ));
        }
        let set = FiniteSet::new(name.clone(), elements.iter().map(String::as_str))
            .map_err(|e| invalid(&path, e))?;
        net.add_space(set);
    }

    for (name, space) in &doc.externals {
        let path = format!("externals.{name}");
        let set = net
            .spaces
            .get(space)
            .ok_or_else(|| invalid(&path, format!("unknown space `{space}`")))?;
        net.externals.insert(name.clone(), set.clone());
    }

    for (name, m) in &doc.maps {
        let path = format!("maps.{name}");
        let domain = parse_space(&m.domain, &net.spaces)
            .map_err(|e| invalid(format!("{path}.domain"), e))?;
        let codomain = parse_space(&m.codomain, &net.spaces)
            .map_err(|e| invalid(format!("{path}.codomain"), e))?;
        let map = table_map(&path, domain, codomain, &m.table, parse_map_row)?;
        net.maps.insert(name.clone(), map);
    }

    // output spaces first, so inputs can refer to nodes in any order
    let mut outputs: BTreeMap<&str, FiniteSet> = BTreeMap::new();
    for (id, node) in &doc.nodes {
        let space = parse_space(&node.output, &net.spaces)
            .map_err(|e| invalid(format!("nodes.{id}.output"), e))?;
        outputs.insert(id, space);
    }
    let resolve = |text: &str, path: &str| -> Result<(Source, FiniteSet), DocumentError> {
        if let Some(space) = net.externals.get(text) {
            return Ok((Source::external(text), space.clone()));
        }
        let mut parts = text.split('.');
        let id = parts.next().unwrap_or_default();
        let base = outputs
            .get(id)
            .ok_or_else(|| invalid(path, format!("unknown source `{text}`")))?;
        let indices = parts
            .map(str::parse::<usize>)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| invalid(path, format!("malformed component path in `{text}`")))?;
        let space = base
            .component_space(&indices)
            .ok_or_else(|| invalid(path, format!("`{text}` names no component")))?;
        Ok((Source::component(id, indices), space))
    };

    for (id, node) in &doc.nodes {
        let path = format!("nodes.{id}");
        let mut inputs = Vec::with_capacity(node.inputs.len());
        let mut spaces = Vec::with_capacity(node.inputs.len());
        for (i, text) in node.inputs.iter().enumerate() {
            let (s, space) = resolve(text, &format!("{path}.inputs[{i}]"))?;
            inputs.push(s);
            spaces.push(space);
        }
        let domain = product_space(&spaces).map_err(|e| invalid(format!("{path}.inputs"), e))?;
        let output = outputs[id.as_str()].clone();
        let map = table_map(
            &path,
            domain.clone(),
            output.clone(),
            &node.table,
            parse_node_row,
        )?;
        let provenance = match &node.provenance {
            None => None,
            Some(p) => {
                let ppath = format!("{path}.provenance");
                let primary_out = parse_space(&p.primary_output, &net.spaces)
                    .map_err(|e| invalid(format!("{ppath}.primary_output"), e))?;
                let model_out = output
                    .factors()
                    .and_then(|f| f.get(1))
                    .cloned()
                    .ok_or_else(|| invalid(&ppath, "supernode output must be a pair"))?;
                let primary_map = table_map(
                    &format!("{ppath}.primary"),
                    domain.clone(),
                    primary_out.clone(),
                    &p.primary_table,
                    parse_node_row,
                )?;
                let model = table_map(
                    &format!("{ppath}.model"),
                    primary_out,
                    model_out,
                    &p.model_table,
                    parse_map_row,
                )?;
                Some(Provenance {
                    label: p.label.clone(),
                    merged: p.merged.clone(),
                    primary_map,
                    model,
                })
            }
        };
        net.nodes.insert(
            id.clone(),
            Node {
                id: id.clone(),
                inputs,
                map,
                provenance,
            },
        );
    }

    for (name, text) in &doc.outputs {
        let (s, _) = resolve(text, &format!("outputs.{name}"))?;
        net.outputs.insert(name.clone(), s);
    }

    if let Some(d) = validate(&net).into_iter().next() {
        return Err(invalid(d.location, d.message));
    }
    Ok(net)
}

fn table_map(
    path: &str,
    domain: FiniteSet,
    codomain: FiniteSet,
    rows: &[String],
    parse_row: fn(&str) -> Result<(crate::finmap::Element, crate::finmap::Element), String>,
) -> Result<FiniteMap, DocumentError> {
    let mut assignments = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}.table[{i}]");
        let (u, x) = parse_row(row).map_err(|e| invalid(&row_path, e))?;
        if !domain.contains(&u) {
            return Err(invalid(
                row_path,
                format!("`{u}` is not in `{}`", domain.name()),
            ));
        }
        if !codomain.contains(&x) {
            return Err(invalid(
                row_path,
                format!("`{x}` is not in `{}`", codomain.name()),
            ));
        }
        assignments.push((u, x));
    }
    FiniteMap::new(domain, codomain, assignments).map_err(|e| invalid(format!("{path}.table"), e))
}

pub fn document_from_network(net: &Network) -> NetworkDocument {
    let node_rows = |m: &FiniteMap| m.pairs().map(|(u, x)| node_row(u, x)).collect();
    let map_rows = |m: &FiniteMap| m.pairs().map(|(u, x)| map_row(u, x)).collect();
    NetworkDocument {
        format_version: FORMAT_VERSION,
        spaces: net
            .spaces
            .iter()
            .map(|(k, s)| (k.clone(), s.iter().map(ToString::to_string).collect()))
            .collect(),
        externals: net
            .externals
            .iter()
            .map(|(k, s)| (k.clone(), s.name().to_owned()))
            .collect(),
        maps: net
            .maps
            .iter()
            .map(|(k, m)| {
                (
                    k.clone(),
                    MapDocument {
                        domain: space_expr(m.domain()),
                        codomain: space_expr(m.codomain()),
                        table: map_rows(m),
                    },
                )
            })
            .collect(),
        nodes: net
            .nodes
            .iter()
            .map(|(k, n)| {
                (
                    k.clone(),
                    NodeDocument {
                        inputs: n.inputs.iter().map(ToString::to_string).collect(),
                        output: space_expr(n.output_space()),
                        table: node_rows(&n.map),
                        provenance: n.provenance.as_ref().map(|p| ProvenanceDocument {
                            label: p.label.clone(),
                            merged: p.merged.clone(),
                            primary_output: space_expr(p.primary_map.codomain()),
                            primary_table: node_rows(&p.primary_map),
                            model_table: map_rows(&p.model),
                        }),
                    },
                )
            })
            .collect(),
        outputs: net
            .outputs
            .iter()
            .map(|(k, s)| (k.clone(), s.to_string()))
            .collect(),
    }
}

/// Canonical text of `net`.
pub fn serialize_network(net: &Network) -> String {
    let mut text =
        serde_json::to_string_pretty(&document_from_network(net)).expect("document serializes");
    text.push('\n');
    text
}
