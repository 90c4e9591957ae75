//! Nodal rationalization.
//!
//! Two nodes reading the same sources form a counter-cascaded pair: the
//! primary plays `M`, the dependent plays `T`, and the common input is the
//! product of every source either of them reads. If the dependent is
//! `(primary, I)`-immanent its output is `C̄(primary output)` for a model
//! `C̄`, so the pair collapses into one supernode `fork(I, C̄) ∘ primary`
//! whose tuple output replaces both.

use std::collections::BTreeMap;

use super::eval::{sources_agree, topological_order, DEFAULT_ENUMERATION_CAP};
use super::{Network, Node, Provenance, Source};
use crate::error::{Error, Result};
use crate::finmap::{compose, fork, product_space, Element, FiniteMap, FiniteSet};
use crate::immanence::{check, Verdict, Witness};

/// A primary/dependent node pair over their common input space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterCascadedPair {
    pub primary: String,
    pub dependent: String,
    /// Distinct sources read by either node: the primary's in port order,
    /// then any the dependent adds.
    pub sources: Vec<Source>,
    pub common_input: FiniteSet,
    /// Primary node map seen from the common input.
    pub induced_m: FiniteMap,
    /// Dependent node map seen from the common input.
    pub induced_t: FiniteMap,
}

/// Builds the counter-cascaded view of `(primary, dependent)`, augmenting
/// the input space with every source only one of them reads.
///
/// Both nodes may read any externals, but every node output either one reads
/// must be read by the other as well.
pub fn resolve_exogenous(
    net: &Network,
    primary: &str,
    dependent: &str,
) -> Result<CounterCascadedPair> {
    let unsupported = |reason: String| Error::UnsupportedTopology {
        primary: primary.to_owned(),
        dependent: dependent.to_owned(),
        reason,
    };
    if primary == dependent {
        return Err(unsupported("a node cannot be paired with itself".into()));
    }
    let p = net.node(primary)?;
    let d = net.node(dependent)?;
    for (reader, other) in [(p, d), (d, p)] {
        if let Some(s) = reader
            .inputs
            .iter()
            .find(|s| !s.is_external() && !other.inputs.contains(s))
        {
            return Err(unsupported(format!(
                "`{}` reads `{s}`, which `{}` does not",
                reader.id, other.id
            )));
        }
    }

    let mut sources: Vec<Source> = Vec::new();
    for s in p.inputs.iter().chain(&d.inputs) {
        if !sources.contains(s) {
            sources.push(s.clone());
        }
    }
    let spaces = sources
        .iter()
        .map(|s| {
            net.source_space(s)
                .ok_or_else(|| Error::UnknownSource(s.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    let common_input = product_space(&spaces)?;
    let induced_m = precompose_projection(&common_input, &sources, p)?;
    let induced_t = precompose_projection(&common_input, &sources, d)?;
    Ok(CounterCascadedPair {
        primary: primary.to_owned(),
        dependent: dependent.to_owned(),
        sources,
        common_input,
        induced_m,
        induced_t,
    })
}

// node.map after the projection picking its ports out of the common tuple
fn precompose_projection(common: &FiniteSet, sources: &[Source], node: &Node) -> Result<FiniteMap> {
    let picks: Vec<usize> = node
        .inputs
        .iter()
        .map(|s| {
            sources
                .iter()
                .position(|c| c == s)
                .expect("source collected")
        })
        .collect();
    let out = node.output_space();
    let table = common
        .iter()
        .map(|u| {
            let args = Element::tuple(
                picks
                    .iter()
                    .map(|&i| u.component(i).expect("tuple").clone()),
            );
            let x = node.map.apply(&args)?;
            Ok(out.index_of(x).expect("codomain element"))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteMap::from_indices(common.clone(), out.clone(), table)
}

/// Every ordered pair of distinct nodes that share at least one source and
/// satisfy the [`resolve_exogenous`] preconditions, ordered by
/// `(primary, dependent)` id.
pub fn find_pairs(net: &Network) -> Vec<CounterCascadedPair> {
    let mut pairs = Vec::new();
    for (p, pn) in &net.nodes {
        for (d, dn) in &net.nodes {
            if p == d || !pn.inputs.iter().any(|s| dn.inputs.contains(s)) {
                continue;
            }
            if let Ok(pair) = resolve_exogenous(net, p, d) {
                pairs.push(pair);
            }
        }
    }
    pairs
}

/// Merges the pair if the dependent is `(primary, I)`-immanent. Returns
/// `None`, leaving the network as is, when it is transcendent.
pub fn rationalize_step(net: &Network, pair: &CounterCascadedPair) -> Result<Option<Network>> {
    let verdict = verdict_for(net, pair)?;
    Ok(match verdict {
        Verdict::Immanent(model) => Some(merge(net, pair, model)?.0),
        Verdict::Transcendent(_) => None,
    })
}

fn verdict_for(net: &Network, pair: &CounterCascadedPair) -> Result<Verdict> {
    let stale = || Error::StalePair {
        primary: pair.primary.clone(),
        dependent: pair.dependent.clone(),
    };
    match resolve_exogenous(net, &pair.primary, &pair.dependent) {
        Ok(current) if current == *pair => {}
        _ => return Err(stale()),
    }
    check(
        &pair.induced_t,
        &pair.induced_m,
        &FiniteMap::identity(pair.induced_t.codomain()),
    )
}

fn merge(net: &Network, pair: &CounterCascadedPair, model: FiniteMap) -> Result<(Network, String)> {
    let primary = net.node(&pair.primary)?;
    let dependent = net.node(&pair.dependent)?;
    let map = compose(
        &fork(&FiniteMap::identity(primary.output_space()), &model)?,
        &primary.map,
    )?;

    let mut id = format!("{}+{}", pair.primary, pair.dependent);
    while net.nodes.contains_key(&id) || net.externals.contains_key(&id) {
        id.push('\'');
    }
    let primary_label = match &primary.provenance {
        Some(p) => format!("({})", p.label),
        None => primary.id.clone(),
    };
    let label = format!("(I⊕{}\u{0304})∘{}", dependent.id, primary_label);
    let merged = [primary, dependent]
        .iter()
        .flat_map(|n| match &n.provenance {
            Some(p) => p.merged.clone(),
            None => vec![n.id.clone()],
        })
        .collect();

    let supernode = Node {
        id: id.clone(),
        inputs: primary.inputs.clone(),
        map,
        provenance: Some(Provenance {
            label,
            merged,
            primary_map: primary.map.clone(),
            model,
        }),
    };

    let mut out = net.clone();
    out.nodes.remove(&pair.primary);
    out.nodes.remove(&pair.dependent);
    out.nodes.insert(id.clone(), supernode);
    let rewire = |s: &mut Source| rewire_source(s, &pair.primary, &pair.dependent, &id);
    for node in out.nodes.values_mut() {
        node.inputs.iter_mut().for_each(rewire);
    }
    out.outputs.values_mut().for_each(rewire);
    Ok((out, id))
}

// primary's output becomes component 0 of the supernode, dependent's component 1
fn rewire_source(source: &mut Source, primary: &str, dependent: &str, supernode: &str) {
    if let Source::Node { id, path } = source {
        let slot = if id == primary {
            0
        } else if id == dependent {
            1
        } else {
            return;
        };
        *id = supernode.to_owned();
        path.insert(0, slot);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    Merged {
        supernode: String,
        model: FiniteMap,
    },
    Transcendent {
        witness: Witness,
    },
    /// The check could not be carried out on this pair.
    Skipped {
        reason: String,
    },
}

/// One attempted pair, in the order tried.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub primary: String,
    pub dependent: String,
    pub outcome: StepOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionReport {
    pub steps: Vec<ReductionStep>,
    pub node_count_before: usize,
    pub node_count_after: usize,
    /// Where each original node's output lives in the reduced network.
    pub correspondence: BTreeMap<String, Source>,
    pub behavior_checked: bool,
    /// Result of the exhaustive equivalence check, when it ran.
    pub behavior_equivalent: Option<bool>,
    /// Why the equivalence check did not run.
    pub behavior_note: Option<String>,
}

impl ReductionReport {
    pub fn merges(&self) -> usize {
        self.steps
            .iter()
            .filter(|s| matches!(s.outcome, StepOutcome::Merged { .. }))
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalizeOptions {
    pub check_equivalence: bool,
    pub enumeration_cap: u128,
}

impl Default for RationalizeOptions {
    fn default() -> Self {
        RationalizeOptions {
            check_equivalence: true,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Greedy rationalization with default options.
pub fn rationalize(net: &Network) -> (Network, ReductionReport) {
    rationalize_with(net, &RationalizeOptions::default())
}

/// Repeatedly merges the first immanent pair in canonical order until no
/// pair is immanent, then checks the result against the original.
pub fn rationalize_with(net: &Network, opts: &RationalizeOptions) -> (Network, ReductionReport) {
    let mut current = net.clone();
    let mut steps = Vec::new();
    let mut correspondence: BTreeMap<String, Source> = net
        .nodes
        .keys()
        .map(|id| (id.clone(), Source::node(id.clone())))
        .collect();

    'pass: loop {
        for pair in find_pairs(&current) {
            let outcome = match verdict_for(&current, &pair) {
                Ok(Verdict::Immanent(model)) => match merge(&current, &pair, model.clone()) {
                    Ok((next, supernode)) => {
                        for s in correspondence.values_mut() {
                            rewire_source(s, &pair.primary, &pair.dependent, &supernode);
                        }
                        current = next;
                        steps.push(ReductionStep {
                            primary: pair.primary,
                            dependent: pair.dependent,
                            outcome: StepOutcome::Merged { supernode, model },
                        });
                        continue 'pass;
                    }
                    Err(e) => StepOutcome::Skipped {
                        reason: e.to_string(),
                    },
                },
                Ok(Verdict::Transcendent(witness)) => StepOutcome::Transcendent { witness },
                Err(e) => StepOutcome::Skipped {
                    reason: e.to_string(),
                },
            };
            steps.push(ReductionStep {
                primary: pair.primary,
                dependent: pair.dependent,
                outcome,
            });
        }
        break;
    }

    let mut report = ReductionReport {
        steps,
        node_count_before: net.node_count(),
        node_count_after: current.node_count(),
        correspondence,
        behavior_checked: false,
        behavior_equivalent: None,
        behavior_note: None,
    };
    if !opts.check_equivalence {
        report.behavior_note = Some("equivalence check disabled".into());
    } else if let Err(e) = topological_order(net) {
        report.behavior_note = Some(e.to_string());
    } else {
        let mut pairs: Vec<(Source, Source)> = report
            .correspondence
            .iter()
            .map(|(id, s)| (Source::node(id.clone()), s.clone()))
            .collect();
        for (name, s) in &net.outputs {
            if let Some(t) = current.outputs.get(name) {
                pairs.push((s.clone(), t.clone()));
            }
        }
        match sources_agree(net, &current, &pairs, opts.enumeration_cap) {
            Ok(eq) => {
                report.behavior_checked = true;
                report.behavior_equivalent = Some(eq);
            }
            Err(e) => report.behavior_note = Some(e.to_string()),
        }
    }
    (current, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::validate;

    fn bit(s: &str) -> Element {
        Element::atom(s)
    }
    fn xor(a: &Element, b: &Element) -> Element {
        bit(if a == b { "0" } else { "1" })
    }
    fn not(a: &Element) -> Element {
        bit(if a.as_atom() == Some("0") { "1" } else { "0" })
    }

    // A(p,q) = p xor q, C(q,p) = not(p xor q): C is a function of A
    fn pair_net() -> Network {
        let mut net = Network::new();
        net.add_space(FiniteSet::new("Bit", ["0", "1"]).unwrap());
        net.add_external("p", "Bit").unwrap();
        net.add_external("q", "Bit").unwrap();
        net.add_external("r", "Bit").unwrap();
        let b = net.space("Bit").unwrap().clone();
        net.add_node_fn(
            "A",
            vec![Source::external("p"), Source::external("q")],
            b.clone(),
            |v| xor(&v[0], &v[1]),
        )
        .unwrap();
        net.add_node_fn(
            "C",
            vec![Source::external("q"), Source::external("p")],
            b.clone(),
            |v| not(&xor(&v[0], &v[1])),
        )
        .unwrap();
        net.add_node_fn(
            "E",
            vec![Source::node("C"), Source::external("r")],
            b,
            |v| xor(&v[0], &v[1]),
        )
        .unwrap();
        net.add_output("e", Source::node("E"));
        net
    }

    #[test]
    fn resolve_uses_first_appearance_order() {
        let net = pair_net();
        let pair = resolve_exogenous(&net, "A", "C").unwrap();
        assert_eq!(pair.sources, [Source::external("p"), Source::external("q")]);
        // induced M is A's own table
        assert_eq!(pair.induced_m, net.nodes["A"].map);
        // induced T reads its ports swapped
        let u = Element::tuple([bit("1"), bit("0")]);
        assert_eq!(pair.induced_t.apply(&u).unwrap(), &bit("0"));
    }

    #[test]
    fn resolve_augments_with_unshared_externals() {
        let mut net = pair_net();
        let b = net.space("Bit").unwrap().clone();
        net.add_node_fn("D", vec![Source::external("p")], b, |v| v[0].clone())
            .unwrap();
        let pair = resolve_exogenous(&net, "A", "D").unwrap();
        assert_eq!(pair.common_input.len(), 4);
        // D ignores q
        for u in pair.common_input.iter() {
            assert_eq!(pair.induced_t.apply(u).unwrap(), u.component(0).unwrap());
        }
    }

    #[test]
    fn resolve_rejects_unshared_node_sources() {
        let net = pair_net();
        assert!(matches!(
            resolve_exogenous(&net, "A", "E"),
            Err(Error::UnsupportedTopology { .. })
        ));
        assert!(matches!(
            resolve_exogenous(&net, "A", "A"),
            Err(Error::UnsupportedTopology { .. })
        ));
    }

    #[test]
    fn find_pairs_lists_both_orders() {
        let ids: Vec<(String, String)> = find_pairs(&pair_net())
            .into_iter()
            .map(|p| (p.primary, p.dependent))
            .collect();
        assert_eq!(
            ids,
            [
                ("A".to_owned(), "C".to_owned()),
                ("C".to_owned(), "A".to_owned())
            ]
        );
    }

    #[test]
    fn step_merges_and_rewires() {
        let net = pair_net();
        let pair = resolve_exogenous(&net, "A", "C").unwrap();
        let merged = rationalize_step(&net, &pair).unwrap().unwrap();
        assert_eq!(merged.node_count(), 2);
        assert_eq!(validate(&merged), []);
        assert_eq!(
            merged.nodes["E"].inputs[0],
            Source::component("A+C", vec![1])
        );
        let sup = &merged.nodes["A+C"];
        assert_eq!(sup.display_label(), "(I⊕C\u{0304})∘A");
        assert_eq!(sup.provenance.as_ref().unwrap().merged, ["A", "C"]);
    }

    #[test]
    fn stale_pair_is_rejected() {
        let net = pair_net();
        let pair = resolve_exogenous(&net, "A", "C").unwrap();
        let merged = rationalize_step(&net, &pair).unwrap().unwrap();
        assert!(matches!(
            rationalize_step(&merged, &pair),
            Err(Error::StalePair { .. })
        ));
    }

    #[test]
    fn rationalize_reports_and_checks() {
        let net = pair_net();
        let (out, report) = rationalize(&net);
        assert_eq!(report.node_count_before, 3);
        assert_eq!(report.node_count_after, 2);
        assert_eq!(report.merges(), 1);
        assert_eq!(report.behavior_equivalent, Some(true));
        assert_eq!(
            report.correspondence["C"],
            Source::component("A+C", vec![1])
        );
        assert_eq!(
            report.correspondence["A"],
            Source::component("A+C", vec![0])
        );
        assert_eq!(out.outputs["e"], Source::node("E"));
    }
}
