mod common;

use std::collections::BTreeMap;
use std::fs;

use common::{fixture_path, four_node, Variant, VARIANTS};
use nodal_core::io::{export_dot, parse_network, serialize_network};
use nodal_core::network::{assignments, sources_agree, StepOutcome, DEFAULT_ENUMERATION_CAP};
use nodal_core::{
    compose, evaluate, find_pairs, fork, rationalize, validate, Element, FiniteMap, Network, Source,
};

fn load(variant: Variant) -> (String, Network) {
    let path = fixture_path(variant.file_name());
    if std::env::var_os("NODAL_BLESS").is_some() {
        fs::write(&path, serialize_network(&four_node(variant))).unwrap();
    }
    let text =
        fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    let net = parse_network(&text).unwrap();
    (text, net)
}

fn bit(e: &Element) -> bool {
    e.as_atom() == Some("1")
}

#[test]
fn fixture_files_are_the_canonical_form_of_the_builders() {
    for v in VARIANTS {
        let (text, net) = load(v);
        assert_eq!(net, four_node(v), "{v:?}");
        assert_eq!(serialize_network(&net), text, "{v:?}");
        assert_eq!(net.node_count(), 4);
    }
}

#[test]
fn fixtures_compute_their_documented_functions() {
    for v in VARIANTS {
        let (_, net) = load(v);
        for a in assignments(&net, 8).unwrap() {
            let (p, q, r) = (bit(&a["p"]), bit(&a["q"]), bit(&a["r"]));
            let out = evaluate(&net, &a).unwrap();
            let (na, nc) = match v {
                Variant::Transcendent => (p & q, p ^ q),
                _ => (p ^ q, !(p ^ q)),
            };
            let nd = match v {
                Variant::Both => !(na & r),
                _ => nc ^ r,
            };
            assert_eq!(bit(&out["A"]), na);
            assert_eq!(bit(&out["C"]), nc);
            assert_eq!(bit(&out["B"]), na & r);
            assert_eq!(bit(&out["D"]), nd);
        }
    }
}

#[test]
fn serialization_is_deterministic_and_idempotent() {
    for v in VARIANTS {
        let (text, net) = load(v);
        let once = serialize_network(&net);
        assert_eq!(once, serialize_network(&net));
        let again = serialize_network(&parse_network(&once).unwrap());
        assert_eq!(again, text);
    }
}

#[test]
fn pairs_are_found_in_canonical_order() {
    let (_, net) = load(Variant::Both);
    let pairs: Vec<(String, String)> = find_pairs(&net)
        .into_iter()
        .map(|p| (p.primary, p.dependent))
        .collect();
    let expect =
        [("A", "C"), ("B", "D"), ("C", "A"), ("D", "B")].map(|(a, b)| (a.to_owned(), b.to_owned()));
    assert_eq!(pairs, expect);
}

#[test]
fn rationalization_reaches_the_expected_node_counts() {
    for v in VARIANTS {
        let (_, net) = load(v);
        let (reduced, report) = rationalize(&net);
        assert_eq!(report.node_count_before, 4);
        assert_eq!(reduced.node_count(), v.reduced_count(), "{v:?}");
        assert_eq!(report.node_count_after, v.reduced_count());
        assert_eq!(report.merges(), 4 - v.reduced_count());
        assert!(report.behavior_checked);
        assert_eq!(report.behavior_equivalent, Some(true), "{v:?}");
        assert!(validate(&reduced).is_empty());
        if v == Variant::Transcendent {
            assert_eq!(reduced, net);
            assert_eq!(report.steps.len(), 4);
        }
    }
}

#[test]
fn reduced_networks_match_the_original_node_by_node() {
    // independent of the report: evaluate both networks and compare every
    // original node with the source the correspondence names
    for v in VARIANTS {
        let (_, net) = load(v);
        let (reduced, report) = rationalize(&net);
        let pairs: Vec<(Source, Source)> = report
            .correspondence
            .iter()
            .map(|(id, s)| (Source::node(id.clone()), s.clone()))
            .collect();
        assert_eq!(pairs.len(), 4);
        assert!(sources_agree(&net, &reduced, &pairs, DEFAULT_ENUMERATION_CAP).unwrap());
        let names: BTreeMap<String, String> =
            net.outputs.keys().map(|k| (k.clone(), k.clone())).collect();
        assert!(nodal_core::behavior_equivalent(&net, &reduced, &names).unwrap());
    }
}

#[test]
fn both_variant_merges_a_with_c_then_b_with_d() {
    let (_, net) = load(Variant::Both);
    let (reduced, report) = rationalize(&net);
    let merged: Vec<_> = report
        .steps
        .iter()
        .filter_map(|s| match &s.outcome {
            StepOutcome::Merged { supernode, .. } => Some(supernode.as_str()),
            _ => None,
        })
        .collect();
    assert_eq!(merged, ["A+C", "B+D"]);
    assert_eq!(reduced.nodes.keys().collect::<Vec<_>>(), ["A+C", "B+D"]);
    assert_eq!(report.correspondence["C"], Source::component("A+C", [1]));
    assert_eq!(report.correspondence["D"], Source::component("B+D", [1]));
    assert_eq!(reduced.outputs["b"], Source::component("B+D", [0]));
    let bd = &reduced.nodes["B+D"];
    assert_eq!(
        bd.inputs,
        [
            Source::component("A+C", [0]),
            Source::component("A+C", [1]),
            Source::external("r")
        ]
    );
    assert_eq!(bd.provenance.as_ref().unwrap().label, "(I⊕D̄)∘B");
    assert_eq!(bd.provenance.as_ref().unwrap().merged, ["B", "D"]);
}

#[test]
fn c_only_variant_logs_both_transcendent_attempts() {
    let (_, net) = load(Variant::COnly);
    let (_, report) = rationalize(&net);
    let kinds: Vec<_> = report
        .steps
        .iter()
        .map(|s| {
            let kind = match &s.outcome {
                StepOutcome::Merged { .. } => "merged",
                StepOutcome::Transcendent { .. } => "transcendent",
                StepOutcome::Skipped { .. } => "skipped",
            };
            (s.primary.as_str(), s.dependent.as_str(), kind)
        })
        .collect();
    assert_eq!(
        kinds,
        [
            ("A", "C", "merged"),
            ("B", "D", "transcendent"),
            ("D", "B", "transcendent")
        ]
    );
}

#[test]
fn supernode_maps_are_rebuilt_from_provenance() {
    for v in VARIANTS {
        let (_, net) = load(v);
        let (reduced, _) = rationalize(&net);
        for node in reduced.nodes.values().filter(|n| n.is_supernode()) {
            let p = node.provenance.as_ref().unwrap();
            let id = FiniteMap::identity(p.primary_map.codomain());
            let rebuilt = compose(&fork(&id, &p.model).unwrap(), &p.primary_map).unwrap();
            assert_eq!(rebuilt, node.map);
        }
    }
}

#[test]
fn rationalization_is_deterministic() {
    for v in VARIANTS {
        let (_, net) = load(v);
        assert_eq!(rationalize(&net), rationalize(&net));
    }
}

#[test]
fn rationalized_networks_serialize_and_revalidate() {
    for v in VARIANTS {
        let (_, net) = load(v);
        let (reduced, _) = rationalize(&net);
        let text = serialize_network(&reduced);
        let back = parse_network(&text).unwrap();
        assert_eq!(back, reduced);
        assert_eq!(serialize_network(&back), text);
    }
}

fn dot_counts(dot: &str) -> (usize, usize) {
    let nodes = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    let edges = dot.lines().filter(|l| l.contains(" -> ")).count();
    (nodes, edges)
}

#[test]
fn dot_export_draws_nodes_and_edges() {
    let (_, net) = load(Variant::Both);
    let dot = export_dot(&net);
    assert!(dot.starts_with("digraph network {\n"));
    assert!(dot.ends_with("}\n"));
    assert_eq!(dot_counts(&dot), (4, net.edges().len()));
    assert_eq!(net.edges().len(), 4);

    let (reduced, _) = rationalize(&net);
    let dot = export_dot(&reduced);
    assert_eq!(dot_counts(&dot).0, 2);
    assert!(dot.contains("(I⊕C̄)∘A"));
    assert!(dot.contains("\"A+C\" -> \"B+D\" [label=\"0\"]"));
}
