//! Workload generators shared by the benchmarks.

use nodal_core::{Element, FiniteMap, FiniteSet, Network, Source};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn set(name: &str, n: usize) -> FiniteSet {
    let prefix = name.to_lowercase();
    FiniteSet::new(name, (0..n).map(|i| format!("{prefix}{i}"))).expect("distinct ids")
}

fn random_map(rng: &mut ChaCha8Rng, dom: &FiniteSet, cod: &FiniteSet) -> FiniteMap {
    let table = (0..dom.len())
        .map(|_| rng.random_range(0..cod.len()))
        .collect();
    FiniteMap::from_indices(dom.clone(), cod.clone(), table).expect("indices in range")
}

/// Random `(M, T, N)` with `|U| = u` and `|V| = |W| = |X| = k`.
pub fn triple(seed: u64, u: usize, k: usize) -> (FiniteMap, FiniteMap, FiniteMap) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (su, sv, sw, sx) = (set("U", u), set("V", k), set("W", k), set("X", k));
    (
        random_map(&mut rng, &su, &sw),
        random_map(&mut rng, &su, &sv),
        random_map(&mut rng, &sv, &sx),
    )
}

/// A chain of `levels` node pairs over two binary externals. Pair `i` reads
/// the externals and the first node of pair `i - 1`; its second node is the
/// negation of its first, so every pair merges.
pub fn chained_pairs(levels: usize, seed: u64) -> Network {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Network::new();
    net.add_space(FiniteSet::new("Bit", ["0", "1"]).expect("bits"));
    net.add_external("e0", "Bit").expect("declared");
    net.add_external("e1", "Bit").expect("declared");
    let bit = net.space("Bit").expect("declared").clone();
    for i in 0..levels {
        let mut inputs = vec![Source::external("e0"), Source::external("e1")];
        if i > 0 {
            inputs.push(Source::node(format!("P{}", i - 1)));
        }
        let domain = nodal_core::product_space(&vec![bit.clone(); inputs.len()]).expect("ports");
        let p = random_map(&mut rng, &domain, &bit);
        let q = FiniteMap::from_fn(domain, bit.clone(), |u| {
            let v = p.apply(u).expect("total");
            Element::atom(if v.as_atom() == Some("0") { "1" } else { "0" })
        })
        .expect("total");
        net.nodes.insert(
            format!("P{i}"),
            nodal_core::Node::new(format!("P{i}"), inputs.clone(), p),
        );
        net.nodes.insert(
            format!("Q{i}"),
            nodal_core::Node::new(format!("Q{i}"), inputs, q),
        );
        net.add_output(format!("q{i}"), Source::node(format!("Q{i}")));
    }
    net
}
