#![allow(dead_code)]

use std::path::PathBuf;

use nodal_core::{Element, FiniteMap, FiniteSet, Network, Source};
use proptest::prelude::*;
use rand::Rng;

pub fn set(name: &str, n: usize) -> FiniteSet {
    let prefix = name.to_lowercase();
    FiniteSet::new(name, (0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

pub fn map_from(dom: &FiniteSet, cod: &FiniteSet, table: Vec<usize>) -> FiniteMap {
    FiniteMap::from_indices(dom.clone(), cod.clone(), table).unwrap()
}

pub fn random_map<R: Rng>(rng: &mut R, dom: &FiniteSet, cod: &FiniteSet) -> FiniteMap {
    let table = (0..dom.len())
        .map(|_| rng.random_range(0..cod.len()))
        .collect();
    map_from(dom, cod, table)
}

/// `(M, T, N)` with `M: U→W`, `T: U→V`, `N: V→X`.
#[derive(Debug, Clone)]
pub struct Triple {
    pub m: FiniteMap,
    pub t: FiniteMap,
    pub n: FiniteMap,
}

pub fn random_triple<R: Rng>(rng: &mut R, max_u: usize, max_other: usize) -> Triple {
    let u = set("U", rng.random_range(1..=max_u));
    let v = set("V", rng.random_range(1..=max_other));
    let w = set("W", rng.random_range(1..=max_other));
    let x = set("X", rng.random_range(1..=max_other));
    Triple {
        m: random_map(rng, &u, &w),
        t: random_map(rng, &u, &v),
        n: random_map(rng, &v, &x),
    }
}

pub fn map_strategy(dom: usize, cod: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..cod, dom)
}

/// Sizes `(|U|, |V|, |W|, |X|)` and the three tables.
pub fn triple_strategy(max_u: usize, max_other: usize) -> impl Strategy<Value = Triple> {
    (1..=max_u, 1..=max_other, 1..=max_other, 1..=max_other)
        .prop_flat_map(|(u, v, w, x)| {
            (
                Just((u, v, w, x)),
                map_strategy(u, w),
                map_strategy(u, v),
                map_strategy(v, x),
            )
        })
        .prop_map(|((u, v, w, x), m, t, n)| {
            let (u, v, w, x) = (set("U", u), set("V", v), set("W", w), set("X", x));
            Triple {
                m: map_from(&u, &w, m),
                t: map_from(&u, &v, t),
                n: map_from(&v, &x, n),
            }
        })
}

/// Every function `dom → cod`, as index tables.
pub fn all_tables(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dom {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..cod).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `C = not A` and `D = not B`.
    Both,
    /// `C = not A`; `D` is not a function of `B`.
    COnly,
    /// No node is a function of its partner.
    Transcendent,
}

pub const VARIANTS: [Variant; 3] = [Variant::Both, Variant::COnly, Variant::Transcendent];

impl Variant {
    pub fn file_name(self) -> &'static str {
        match self {
            Variant::Both => "four_node_both.json",
            Variant::COnly => "four_node_c_only.json",
            Variant::Transcendent => "four_node_transcendent.json",
        }
    }

    pub fn reduced_count(self) -> usize {
        match self {
            Variant::Both => 2,
            Variant::COnly => 3,
            Variant::Transcendent => 4,
        }
    }
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn bit(b: bool) -> Element {
    Element::atom(if b { "1" } else { "0" })
}

fn truth(e: &Element) -> bool {
    e.as_atom() == Some("1")
}

/// A and C read the externals p and q; B and D read A, C and r.
pub fn four_node(variant: Variant) -> Network {
    let mut net = Network::new();
    net.add_space(FiniteSet::new("Bit", ["0", "1"]).unwrap());
    for e in ["p", "q", "r"] {
        net.add_external(e, "Bit").unwrap();
    }
    let b = net.space("Bit").unwrap().clone();
    let pq = vec![Source::external("p"), Source::external("q")];
    let acr = vec![Source::node("A"), Source::node("C"), Source::external("r")];

    type Gate = fn(bool, bool) -> bool;
    let (a, c): (Gate, Gate) = match variant {
        Variant::Both | Variant::COnly => (|p, q| p ^ q, |p, q| !(p ^ q)),
        Variant::Transcendent => (|p, q| p & q, |p, q| p ^ q),
    };
    let d: fn(bool, bool, bool) -> bool = match variant {
        Variant::Both => |a, _, r| !(a & r),
        Variant::COnly | Variant::Transcendent => |_, c, r| c ^ r,
    };
    net.add_node_fn("A", pq.clone(), b.clone(), |v| {
        bit(a(truth(&v[0]), truth(&v[1])))
    })
    .unwrap();
    net.add_node_fn("C", pq, b.clone(), |v| bit(c(truth(&v[0]), truth(&v[1]))))
        .unwrap();
    net.add_node_fn("B", acr.clone(), b.clone(), |v| {
        bit(truth(&v[0]) & truth(&v[2]))
    })
    .unwrap();
    net.add_node_fn("D", acr, b.clone(), |v| {
        bit(d(truth(&v[0]), truth(&v[1]), truth(&v[2])))
    })
    .unwrap();
    for id in ["A", "B", "C", "D"] {
        net.add_output(id.to_lowercase(), Source::node(id));
    }
    if variant == Variant::Transcendent {
        let zero = Element::atom("0");
        net.maps.insert(
            "Collapse".into(),
            FiniteMap::constant(b.clone(), b, &zero).unwrap(),
        );
    }
    net
}

/// A small random acyclic network. Some nodes are built as a function of an
/// earlier node with the same inputs, so immanent pairs are common.
pub fn random_network<R: Rng>(rng: &mut R) -> Network {
    let mut net = Network::new();
    net.add_space(FiniteSet::new("Bit", ["0", "1"]).unwrap());
    net.add_space(FiniteSet::new("Tri", ["a", "b", "c"]).unwrap());
    let spaces = ["Bit", "Tri"];
    let externals = rng.random_range(1..=3);
    for i in 0..externals {
        net.add_external(format!("e{i}"), spaces[rng.random_range(0..2)])
            .unwrap();
    }
    let mut ids: Vec<String> = Vec::new();
    for k in 0..rng.random_range(2..=5) {
        let id = format!("N{k}");
        let out = net.space(spaces[rng.random_range(0..2)]).unwrap().clone();
        let copy = !ids.is_empty() && rng.random_bool(0.5);
        if copy {
            let base = net.nodes[&ids[rng.random_range(0..ids.len())]].clone();
            let g = random_map(rng, base.map.codomain(), &out);
            let map = nodal_core::compose(&g, &base.map).unwrap();
            net.nodes.insert(
                id.clone(),
                nodal_core::Node::new(id.clone(), base.inputs, map),
            );
        } else {
            let mut pool: Vec<Source> = net.externals.keys().map(Source::external).collect();
            pool.extend(ids.iter().map(Source::node));
            let arity = rng.random_range(1..=pool.len().min(3));
            let mut inputs = Vec::new();
            while inputs.len() < arity {
                let s = pool[rng.random_range(0..pool.len())].clone();
                if !inputs.contains(&s) {
                    inputs.push(s);
                }
            }
            let spaces: Vec<FiniteSet> = inputs
                .iter()
                .map(|s| net.source_space(s).unwrap())
                .collect();
            let domain = nodal_core::product_space(&spaces).unwrap();
            let map = random_map(rng, &domain, &out);
            net.nodes
                .insert(id.clone(), nodal_core::Node::new(id.clone(), inputs, map));
        }
        ids.push(id);
    }
    for id in &ids {
        net.add_output(id.to_lowercase(), Source::node(id.clone()));
    }
    net
}
