use std::collections::{BTreeMap, HashMap};

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;

use super::{Network, Source};
use crate::error::{Error, Result};
use crate::finmap::{product_space, Element};

/// Values of the external inputs, by name.
pub type Assignment = BTreeMap<String, Element>;

/// Default bound on the number of external assignments enumerated by
/// equivalence checks.
pub const DEFAULT_ENUMERATION_CAP: u128 = 1 << 20;

/// Node ids in an order where every node follows the nodes it reads.
pub fn topological_order(net: &Network) -> Result<Vec<&str>> {
    let mut graph = DiGraph::<&str, ()>::new();
    let index: HashMap<&str, _> = net
        .nodes
        .keys()
        .map(|id| (id.as_str(), graph.add_node(id.as_str())))
        .collect();
    for node in net.nodes.values() {
        for input in &node.inputs {
            if let Some(src) = input.node_id() {
                let from = *index
                    .get(src)
                    .ok_or_else(|| Error::UnknownSource(input.to_string()))?;
                graph.add_edge(from, index[node.id.as_str()], ());
            }
        }
    }
    toposort(&graph, None)
        .map(|order| order.into_iter().map(|i| graph[i]).collect())
        .map_err(|cycle| Error::CyclicNetwork {
            node: graph[cycle.node_id()].to_owned(),
        })
}

/// Computes every node's output for one external assignment.
pub fn evaluate(net: &Network, assignment: &Assignment) -> Result<BTreeMap<String, Element>> {
    for (name, space) in &net.externals {
        let value = assignment
            .get(name)
            .ok_or_else(|| Error::PartialAssignment {
                external: name.clone(),
            })?;
        if !space.contains(value) {
            return Err(Error::OutOfDomain {
                domain: space.name().to_owned(),
                element: value.clone(),
            });
        }
    }
    if let Some(extra) = assignment.keys().find(|k| !net.externals.contains_key(*k)) {
        return Err(Error::UnknownSource(extra.clone()));
    }

    let mut values: BTreeMap<String, Element> = BTreeMap::new();
    for id in topological_order(net)? {
        let node = &net.nodes[id];
        let args = node
            .inputs
            .iter()
            .map(|s| read_source(&values, assignment, s))
            .collect::<Result<Vec<_>>>()?;
        let out = node.map.apply(&Element::Tuple(args))?.clone();
        values.insert(id.to_owned(), out);
    }
    Ok(values)
}

/// Value carried by `source` given node outputs and external values.
pub fn read_source(
    values: &BTreeMap<String, Element>,
    assignment: &Assignment,
    source: &Source,
) -> Result<Element> {
    let found = match source {
        Source::External(name) => assignment.get(name),
        Source::Node { id, path } => values.get(id).and_then(|v| v.project(path)),
    };
    found
        .cloned()
        .ok_or_else(|| Error::UnknownSource(source.to_string()))
}

/// All total external assignments, in lexicographic order of external names
/// and element order.
pub fn assignments(net: &Network, cap: u128) -> Result<Vec<Assignment>> {
    if net.externals.is_empty() {
        return Ok(vec![Assignment::new()]);
    }
    let size = net
        .externals
        .values()
        .try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128))
        .unwrap_or(u128::MAX);
    if size > cap {
        return Err(Error::EnumerationCapExceeded { size, cap });
    }
    let names: Vec<&String> = net.externals.keys().collect();
    let spaces: Vec<_> = net.externals.values().cloned().collect();
    let product = product_space(&spaces)?;
    Ok(product
        .iter()
        .map(|tuple| {
            names
                .iter()
                .enumerate()
                .map(|(i, n)| ((*n).clone(), tuple.component(i).expect("tuple").clone()))
                .collect()
        })
        .collect())
}

/// Whether each `(a_source, b_source)` pair carries the same value in both
/// networks for every external assignment.
pub fn sources_agree(
    a: &Network,
    b: &Network,
    pairs: &[(Source, Source)],
    cap: u128,
) -> Result<bool> {
    if a.externals != b.externals {
        let names = |n: &Network| n.externals.keys().cloned().collect::<Vec<_>>().join(",");
        return Err(Error::SignatureMismatch(format!(
            "[{}] vs [{}]",
            names(a),
            names(b)
        )));
    }
    topological_order(a)?;
    topological_order(b)?;
    for assignment in assignments(a, cap)? {
        let va = evaluate(a, &assignment)?;
        let vb = evaluate(b, &assignment)?;
        for (sa, sb) in pairs {
            if read_source(&va, &assignment, sa)? != read_source(&vb, &assignment, sb)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether corresponding designated outputs agree on every external
/// assignment. `correspondence` maps output names of `a` to output names of
/// `b`.
pub fn behavior_equivalent(
    a: &Network,
    b: &Network,
    correspondence: &BTreeMap<String, String>,
) -> Result<bool> {
    let pairs = correspondence
        .iter()
        .map(|(na, nb)| {
            let sa = a
                .outputs
                .get(na)
                .ok_or_else(|| Error::UnknownSource(na.clone()))?;
            let sb = b
                .outputs
                .get(nb)
                .ok_or_else(|| Error::UnknownSource(nb.clone()))?;
            Ok((sa.clone(), sb.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    sources_agree(a, b, &pairs, DEFAULT_ENUMERATION_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finmap::{FiniteMap, FiniteSet};

    fn xor(a: &Element, b: &Element) -> Element {
        Element::atom(if a == b { "0" } else { "1" })
    }

    fn chain() -> Network {
        let mut net = Network::new();
        net.add_space(FiniteSet::new("Bit", ["0", "1"]).unwrap());
        net.add_external("p", "Bit").unwrap();
        net.add_external("q", "Bit").unwrap();
        let bit = net.space("Bit").unwrap().clone();
        net.add_node_fn(
            "A",
            vec![Source::external("p"), Source::external("q")],
            bit.clone(),
            |v| xor(&v[0], &v[1]),
        )
        .unwrap();
        net.add_node_fn(
            "B",
            vec![Source::node("A"), Source::external("q")],
            bit,
            |v| xor(&v[0], &Element::atom("1")),
        )
        .unwrap();
        net.add_output("a", Source::node("A"));
        net.add_output("b", Source::node("B"));
        net
    }

    fn assign(p: &str, q: &str) -> Assignment {
        [("p".to_owned(), p.into()), ("q".to_owned(), q.into())].into()
    }

    #[test]
    fn evaluates_in_dependency_order() {
        let out = evaluate(&chain(), &assign("1", "0")).unwrap();
        assert_eq!(out["A"], Element::atom("1"));
        assert_eq!(out["B"], Element::atom("0"));
    }

    #[test]
    fn partial_assignment_is_rejected() {
        let mut a = assign("0", "0");
        a.remove("q");
        assert_eq!(
            evaluate(&chain(), &a),
            Err(Error::PartialAssignment {
                external: "q".into()
            })
        );
    }

    #[test]
    fn cycles_are_rejected() {
        let mut net = chain();
        let a = net.nodes.get_mut("A").unwrap();
        a.inputs[0] = Source::node("B");
        assert!(matches!(
            evaluate(&net, &assign("0", "0")),
            Err(Error::CyclicNetwork { .. })
        ));
    }

    #[test]
    fn assignments_enumerate_the_product() {
        let all = assignments(&chain(), 16).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[1], assign("0", "1"));
        assert!(matches!(
            assignments(&chain(), 3),
            Err(Error::EnumerationCapExceeded { size: 4, .. })
        ));
    }

    #[test]
    fn equivalence_detects_a_perturbed_entry() {
        let net = chain();
        let ids: BTreeMap<String, String> = [("a", "a"), ("b", "b")]
            .map(|(x, y)| (x.to_owned(), y.to_owned()))
            .into();
        assert!(behavior_equivalent(&net, &net, &ids).unwrap());

        let mut other = net.clone();
        let b = other.nodes.get_mut("B").unwrap();
        let mut table = b.map.table().to_vec();
        table[0] = 1 - table[0];
        b.map = FiniteMap::from_indices(b.map.domain().clone(), b.map.codomain().clone(), table)
            .unwrap();
        assert!(!behavior_equivalent(&net, &other, &ids).unwrap());
    }
}
