use std::fmt::Write;

use crate::network::{Network, Source};

fn quote(text: &str) -> String {
    format!("\"{}\"", text.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Renders `net` as a Graphviz digraph. External inputs are listed in each
/// node's label; node-to-node edges carry their component path.
pub fn export_dot(net: &Network) -> String {
    let mut out = String::from("digraph network {\n  rankdir=LR;\n  node [shape=box];\n");
    for node in net.nodes.values() {
        let externals: Vec<&str> = node
            .inputs
            .iter()
            .filter_map(|s| match s {
                Source::External(name) => Some(name.as_str()),
                Source::Node { .. } => None,
            })
            .collect();
        let mut label = node.id.clone();
        if let Some(p) = &node.provenance {
            label.push_str("\\n");
            label.push_str(&p.label);
        }
        if !externals.is_empty() {
            label.push_str("\\nin: ");
            label.push_str(&externals.join(", "));
        }
        let label = format!("\"{}\"", label.replace('"', "\\\""));
        let extra = if node.is_supernode() {
            ", peripheries=2"
        } else {
            ""
        };
        writeln!(out, "  {} [label={label}{extra}];", quote(&node.id)).unwrap();
    }
    for (from, to, path) in net.edges() {
        write!(out, "  {} -> {}", quote(from), quote(to)).unwrap();
        if !path.is_empty() {
            let path: Vec<String> = path.iter().map(ToString::to_string).collect();
            write!(out, " [label={}]", quote(&path.join("."))).unwrap();
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}
