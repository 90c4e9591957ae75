use std::fmt;

use super::Network;
use crate::finmap::{compose, fork, product_space, FiniteMap, FiniteSet};

/// One violated network invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Dotted path to the offending item, e.g. `nodes.A.inputs[1]`.
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

struct Collector(Vec<Diagnostic>);

impl Collector {
    fn push(&mut self, location: impl Into<String>, message: impl Into<String>) {
        self.0.push(Diagnostic {
            location: location.into(),
            message: message.into(),
        });
    }

    /// Every atomic factor of `space` must be a declared space.
    fn declared(&mut self, net: &Network, space: &FiniteSet, location: &str) {
        match space.factors() {
            Some(parts) => {
                for p in parts {
                    self.declared(net, p, location);
                }
            }
            None => match net.spaces.get(space.name()) {
                Some(decl) if decl == space => {}
                Some(_) => self.push(
                    location,
                    format!("space `{}` differs from its declaration", space.name()),
                ),
                None => self.push(
                    location,
                    format!("space `{}` is not declared", space.name()),
                ),
            },
        }
    }
}

/// Checks every structural invariant; an empty result means the network is
/// well formed.
pub fn validate(net: &Network) -> Vec<Diagnostic> {
    let mut diags = Collector(Vec::new());

    for (name, space) in &net.spaces {
        let loc = format!("spaces.{name}");
        if space.name() != name {
            diags.push(
                &loc,
                format!("declared under a different name `{}`", space.name()),
            );
        }
        if space.factors().is_some() {
            diags.push(&loc, "declared spaces must be atomic");
        }
    }

    for (name, space) in &net.externals {
        let loc = format!("externals.{name}");
        if name.is_empty() || name.contains('.') {
            diags.push(&loc, "external names must be nonempty and contain no `.`");
        }
        if net.nodes.contains_key(name) {
            diags.push(&loc, "name is shared with a node");
        }
        diags.declared(net, space, &loc);
    }

    for (key, node) in &net.nodes {
        let loc = format!("nodes.{key}");
        if node.id != *key {
            diags.push(
                &loc,
                format!("node id `{}` does not match its key", node.id),
            );
        }
        if key.is_empty() || key.contains('.') {
            diags.push(&loc, "node ids must be nonempty and contain no `.`");
        }
        diags.declared(net, node.output_space(), &format!("{loc}.output"));

        let mut port_spaces = Vec::with_capacity(node.inputs.len());
        for (i, input) in node.inputs.iter().enumerate() {
            match net.source_space(input) {
                Some(space) => port_spaces.push(space),
                None => diags.push(
                    format!("{loc}.inputs[{i}]"),
                    format!("source `{input}` does not resolve"),
                ),
            }
        }
        if port_spaces.len() == node.inputs.len() {
            let arity = node.map.domain().factors().map_or(1, <[FiniteSet]>::len);
            if arity != node.inputs.len() {
                diags.push(
                    format!("{loc}.table"),
                    format!(
                        "node has {} input ports but its map takes {arity} arguments",
                        node.inputs.len()
                    ),
                );
            } else {
                match product_space(&port_spaces) {
                    Ok(expected) if &expected == node.map.domain() => {}
                    Ok(expected) => diags.push(
                        format!("{loc}.table"),
                        format!(
                            "map domain `{}` does not match input ports `{}`",
                            node.map.domain().name(),
                            expected.name()
                        ),
                    ),
                    Err(_) => diags.push(format!("{loc}.inputs"), "node has no input ports"),
                }
            }
        }

        if let Some(prov) = &node.provenance {
            let rebuilt = fork(
                &FiniteMap::identity(prov.primary_map.codomain()),
                &prov.model,
            )
            .and_then(|f| compose(&f, &prov.primary_map));
            if rebuilt.as_ref() != Ok(&node.map) {
                diags.push(
                    format!("{loc}.provenance"),
                    "map is not fork(I, model) after the primary map",
                );
            }
        }
    }

    for (name, source) in &net.outputs {
        if net.source_space(source).is_none() {
            diags.push(
                format!("outputs.{name}"),
                format!("source `{source}` does not resolve"),
            );
        }
    }

    for (name, map) in &net.maps {
        let loc = format!("maps.{name}");
        diags.declared(net, map.domain(), &loc);
        diags.declared(net, map.codomain(), &loc);
    }

    diags.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmap::Element;
    use crate::network::{Provenance, Source};

    fn small() -> Network {
        let mut net = Network::new();
        net.add_space(FiniteSet::new("Bit", ["0", "1"]).unwrap());
        net.add_external("p", "Bit").unwrap();
        net.add_external("q", "Bit").unwrap();
        let bit = net.space("Bit").unwrap().clone();
        net.add_node_fn(
            "A",
            vec![Source::external("p"), Source::external("q")],
            bit.clone(),
            |v| v[0].clone(),
        )
        .unwrap();
        net.add_node_fn("B", vec![Source::node("A")], bit, |v| v[0].clone())
            .unwrap();
        net.add_output("b", Source::node("B"));
        net
    }

    #[test]
    fn well_formed_network_has_no_diagnostics() {
        assert_eq!(validate(&small()), []);
    }

    #[test]
    fn missing_space_is_reported() {
        let mut net = small();
        let tri = FiniteSet::new("Tri", ["a", "b", "c"]).unwrap();
        net.externals.insert("r".into(), tri);
        let diags = validate(&net);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert_eq!(diags[0].location, "externals.r");
    }

    #[test]
    fn port_arity_mismatch_is_reported() {
        let mut net = small();
        net.nodes
            .get_mut("B")
            .unwrap()
            .inputs
            .push(Source::external("p"));
        let diags = validate(&net);
        assert_eq!(diags.len(), 1, "{diags:?}");
        assert!(diags[0].message.contains("input ports"));
    }

    #[test]
    fn dangling_source_is_reported() {
        let mut net = small();
        net.add_output("z", Source::component("A", vec![0]));
        let diags = validate(&net);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].location, "outputs.z");
    }

    #[test]
    fn tampered_supernode_is_reported() {
        let mut net = small();
        let a = net.nodes["A"].map.clone();
        let bit = a.codomain().clone();
        let model = FiniteMap::identity(&bit);
        let good = compose(&fork(&FiniteMap::identity(&bit), &model).unwrap(), &a).unwrap();
        let node = net.nodes.get_mut("A").unwrap();
        node.map = good;
        node.provenance = Some(Provenance {
            label: "(I⊕Ā)∘A".into(),
            merged: vec!["A".into()],
            primary_map: a.clone(),
            model: FiniteMap::constant(bit.clone(), bit.clone(), &Element::atom("0")).unwrap(),
        });
        // B now reads a tuple-valued output, and provenance disagrees
        let diags = validate(&net);
        assert!(diags.iter().any(|d| d.location == "nodes.A.provenance"));
        assert!(diags.iter().any(|d| d.location == "nodes.B.table"));
    }
}
