//! The relation `S = N∘T∘M⁻¹` induced by a counter-cascaded triple, its
//! single-valuedness, and single-valued models (exact or best-fit).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::{Element, FiniteMap, FiniteSet};
use crate::immanence::Witness;

/// Pairs `(M(u), N(T(u)))` over all `u`, with multiplicities.
///
/// Each pair keeps the inputs that generated it, so a multivalued relation
/// can name the two inputs responsible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    source: FiniteSet,
    left: FiniteSet,
    right: FiniteSet,
    // keyed by (w index, x index); generators ascending
    pairs: BTreeMap<(usize, usize), Vec<usize>>,
}

/// One distinct pair of a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationPair<'a> {
    pub w: &'a Element,
    pub x: &'a Element,
    pub generators: Vec<&'a Element>,
}

impl RelationPair<'_> {
    pub fn multiplicity(&self) -> usize {
        self.generators.len()
    }
}

/// Builds `S = N∘T∘M⁻¹` from `M: U→W`, `T: U→V`, `N: V→X`.
pub fn relation_of(m: &FiniteMap, t: &FiniteMap, n: &FiniteMap) -> Result<Relation> {
    check_triple(m, t, n)?;
    let mut pairs: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for u in 0..m.domain().len() {
        let key = (m.apply_index(u), n.apply_index(t.apply_index(u)));
        pairs.entry(key).or_default().push(u);
    }
    Ok(Relation {
        source: m.domain().clone(),
        left: m.codomain().clone(),
        right: n.codomain().clone(),
        pairs,
    })
}

pub(crate) fn check_triple(m: &FiniteMap, t: &FiniteMap, n: &FiniteMap) -> Result<()> {
    if m.domain() != t.domain() {
        return Err(Error::SpaceMismatch {
            context: "common input of M and T",
            expected: m.domain().name().to_owned(),
            found: t.domain().name().to_owned(),
        });
    }
    if t.codomain() != n.domain() {
        return Err(Error::SpaceMismatch {
            context: "N after T",
            expected: n.domain().name().to_owned(),
            found: t.codomain().name().to_owned(),
        });
    }
    Ok(())
}

type LeftGroup<'a> = (usize, Vec<(usize, &'a [usize])>);

impl Relation {
    /// The common input space `U`.
    pub fn source(&self) -> &FiniteSet {
        &self.source
    }

    /// `W`.
    pub fn left(&self) -> &FiniteSet {
        &self.left
    }

    /// `X`.
    pub fn right(&self) -> &FiniteSet {
        &self.right
    }

    /// Distinct pairs in canonical `(w, x)` order.
    pub fn pairs(&self) -> impl Iterator<Item = RelationPair<'_>> + '_ {
        self.pairs.iter().map(|(&(w, x), gens)| RelationPair {
            w: self.left.element(w),
            x: self.right.element(x),
            generators: gens.iter().map(|&u| self.source.element(u)).collect(),
        })
    }

    pub fn distinct_pairs(&self) -> usize {
        self.pairs.len()
    }

    pub fn multiplicity(&self, w: &Element, x: &Element) -> usize {
        match (self.left.index_of(w), self.right.index_of(x)) {
            (Some(wi), Some(xi)) => self.pairs.get(&(wi, xi)).map_or(0, Vec::len),
            _ => 0,
        }
    }

    /// Sum of all multiplicities; equals `|U|`.
    pub fn total_multiplicity(&self) -> usize {
        self.pairs.values().map(Vec::len).sum()
    }

    /// `M(U)` in canonical order.
    pub fn reached(&self) -> Vec<&Element> {
        self.reached_indices()
            .into_iter()
            .map(|w| self.left.element(w))
            .collect()
    }

    /// Elements of `W` outside `M(U)`. The relation says nothing about them,
    /// so models send them to the first element of `X`.
    pub fn unconstrained(&self) -> Vec<&Element> {
        let reached = self.reached_indices();
        (0..self.left.len())
            .filter(|w| reached.binary_search(w).is_err())
            .map(|w| self.left.element(w))
            .collect()
    }

    fn reached_indices(&self) -> Vec<usize> {
        let mut ws: Vec<usize> = self.pairs.keys().map(|&(w, _)| w).collect();
        ws.dedup();
        ws
    }

    /// Pairs grouped by `w`: `(w, [(x, generators)])`, all ascending.
    fn by_left(&self) -> Vec<LeftGroup<'_>> {
        let mut groups: Vec<LeftGroup<'_>> = Vec::new();
        for (&(w, x), gens) in &self.pairs {
            match groups.last_mut() {
                Some((last, xs)) if *last == w => xs.push((x, gens)),
                _ => groups.push((w, vec![(x, gens)])),
            }
        }
        groups
    }

    fn default_right(&self) -> Result<usize> {
        if self.right.is_empty() {
            Err(Error::EmptyCodomain {
                codomain: self.right.name().to_owned(),
            })
        } else {
            Ok(0)
        }
    }

    fn model_from(&self, mut choice: impl FnMut(usize) -> Option<usize>) -> Result<FiniteMap> {
        let mut table = Vec::with_capacity(self.left.len());
        let mut fallback = None;
        for w in 0..self.left.len() {
            let x = match choice(w) {
                Some(x) => x,
                None => *fallback.get_or_insert(self.default_right()?),
            };
            table.push(x);
        }
        FiniteMap::from_indices(self.left.clone(), self.right.clone(), table)
    }
}

/// Outcome of the single-valuedness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleValuedVerdict {
    pub single_valued: bool,
    pub witness: Option<Witness>,
}

/// Decides whether no `w` is related to two distinct `x`. On failure the
/// witness uses the smallest offending `w`, then the smallest pair of inputs.
pub fn single_valuedness(rel: &Relation) -> SingleValuedVerdict {
    for (w, xs) in rel.by_left() {
        if xs.len() < 2 {
            continue;
        }
        // first input of the fiber, and the first input landing elsewhere
        let (x, u) = xs
            .iter()
            .map(|&(x, gens)| (x, gens[0]))
            .min_by_key(|&(_, u)| u)
            .expect("nonempty group");
        let (x_prime, u_prime) = xs
            .iter()
            .filter(|&&(other, _)| other != x)
            .map(|&(other, gens)| (other, gens[0]))
            .min_by_key(|&(_, u)| u)
            .expect("at least two targets");
        return SingleValuedVerdict {
            single_valued: false,
            witness: Some(Witness {
                w: rel.left.element(w).clone(),
                u: rel.source.element(u).clone(),
                u_prime: rel.source.element(u_prime).clone(),
                x: rel.right.element(x).clone(),
                x_prime: rel.right.element(x_prime).clone(),
            }),
        };
    }
    SingleValuedVerdict {
        single_valued: true,
        witness: None,
    }
}

/// The unique map `W → X` agreeing with a single-valued relation on `M(U)`.
pub fn to_map(rel: &Relation) -> Result<FiniteMap> {
    let verdict = single_valuedness(rel);
    if let Some(w) = verdict.witness {
        return Err(Error::Multivalued(Box::new(w)));
    }
    let mut choice = vec![None; rel.left.len()];
    for &(w, x) in rel.pairs.keys() {
        choice[w] = Some(x);
    }
    rel.model_from(|w| choice[w])
}

/// Loss used to pick a best single-valued model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    /// Minimise the number of inputs `u` whose `N(T(u))` the model misses.
    Majority,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::Majority => f.write_str("majority"),
        }
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "majority" => Ok(Criterion::Majority),
            other => Err(format!("unknown approximation criterion `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxModel {
    pub model: FiniteMap,
    /// Number of inputs `u` with `model(M(u)) != N(T(u))`.
    pub disagreement: usize,
    pub criterion: Criterion,
}

/// Best single-valued approximation of `rel` under `criterion`.
///
/// Majority picks, for each reached `w`, the most frequent partner `x`
/// (earliest in canonical order on ties). Since the loss decomposes over `w`
/// this is optimal among all maps `W → X`.
pub fn approximate(rel: &Relation, criterion: Criterion) -> Result<ApproxModel> {
    match criterion {
        Criterion::Majority => {
            let mut choice = vec![None; rel.left.len()];
            let mut disagreement = 0;
            for (w, xs) in rel.by_left() {
                let total: usize = xs.iter().map(|(_, g)| g.len()).sum();
                let mut best = xs[0];
                for &cand in &xs[1..] {
                    if cand.1.len() > best.1.len() {
                        best = cand;
                    }
                }
                choice[w] = Some(best.0);
                disagreement += total - best.1.len();
            }
            Ok(ApproxModel {
                model: rel.model_from(|w| choice[w])?,
                disagreement,
                criterion,
            })
        }
    }
}
