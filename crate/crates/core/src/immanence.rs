//! Immanence and transcendence of a mapping `T` relative to a pair `(M, N)`.
//!
//! `T: U→V` is `(M, N)`-immanent when `N∘T` is constant on every fiber of
//! `M: U→W`, where `N: V→X`. Equivalently the relation `N∘T∘M⁻¹` is a map,
//! which is then the unique faithful model `S` with `S∘M = N∘T`. When the
//! condition fails, a witness `(w, u, u′, x, x′)` names two inputs in the same
//! fiber of `M` that `N∘T` separates.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmap::{compose, Element, FiniteMap, FiniteSet};
use crate::relation::{check_triple, relation_of, single_valuedness, to_map};

/// Two inputs `u`, `u′` with `M(u) = M(u′) = w` but
/// `N(T(u)) = x ≠ x′ = N(T(u′))`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub w: Element,
    pub u: Element,
    pub u_prime: Element,
    pub x: Element,
    pub x_prime: Element,
}

impl Witness {
    /// Re-evaluates the defining equations through the given maps.
    pub fn validates(&self, t: &FiniteMap, m: &FiniteMap, n: &FiniteMap) -> bool {
        let nt = |u: &Element| t.apply(u).and_then(|v| n.apply(v)).ok().cloned();
        self.u != self.u_prime
            && self.x != self.x_prime
            && m.apply(&self.u).ok() == Some(&self.w)
            && m.apply(&self.u_prime).ok() == Some(&self.w)
            && nt(&self.u).as_ref() == Some(&self.x)
            && nt(&self.u_prime).as_ref() == Some(&self.x_prime)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "w={} u={} u'={} x={} x'={}",
            self.w, self.u, self.u_prime, self.x, self.x_prime
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Immanent,
    Transcendent,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Immanent => "immanent",
            Status::Transcendent => "transcendent",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Carries the faithful model `S: W→X`.
    Immanent(FiniteMap),
    Transcendent(Witness),
}

impl Verdict {
    pub fn status(&self) -> Status {
        match self {
            Verdict::Immanent(_) => Status::Immanent,
            Verdict::Transcendent(_) => Status::Transcendent,
        }
    }

    pub fn is_immanent(&self) -> bool {
        matches!(self, Verdict::Immanent(_))
    }

    pub fn model(&self) -> Option<&FiniteMap> {
        match self {
            Verdict::Immanent(model) => Some(model),
            Verdict::Transcendent(_) => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Transcendent(w) => Some(w),
            Verdict::Immanent(_) => None,
        }
    }

    pub fn into_model(self) -> Result<FiniteMap> {
        match self {
            Verdict::Immanent(model) => Ok(model),
            Verdict::Transcendent(w) => Err(Error::TranscendentInput(Box::new(w))),
        }
    }
}

/// Decides `(M, N)`-immanence of `T` directly from the definition: for every
/// `w ∈ M(U)` there must be an `x` with `T(M⁻¹(w)) ⊆ N⁻¹(x)`.
///
/// Elements of `W` outside `M(U)` are unconstrained; the model sends them to
/// the first element of `X`.
pub fn check_definitional(t: &FiniteMap, m: &FiniteMap, n: &FiniteMap) -> Result<Verdict> {
    check_triple(m, t, n)?;
    let n_fibers = n.fiber_indices();
    let mut table = Vec::with_capacity(m.codomain().len());
    for (w, fiber) in m.fiber_indices().into_iter().enumerate() {
        let Some(&first) = fiber.first() else {
            if n.codomain().is_empty() {
                return Err(Error::EmptyCodomain {
                    codomain: n.codomain().name().to_owned(),
                });
            }
            table.push(0);
            continue;
        };
        // candidate x is forced by any one member of the fiber
        let x = n.apply_index(t.apply_index(first));
        let allowed: BTreeSet<usize> = n_fibers[x].iter().copied().collect();
        match fiber
            .iter()
            .find(|&&u| !allowed.contains(&t.apply_index(u)))
        {
            None => table.push(x),
            Some(&u_prime) => {
                let x_prime = n.apply_index(t.apply_index(u_prime));
                return Ok(Verdict::Transcendent(Witness {
                    w: m.codomain().element(w).clone(),
                    u: m.domain().element(first).clone(),
                    u_prime: m.domain().element(u_prime).clone(),
                    x: n.codomain().element(x).clone(),
                    x_prime: n.codomain().element(x_prime).clone(),
                }));
            }
        }
    }
    Ok(Verdict::Immanent(FiniteMap::from_indices(
        m.codomain().clone(),
        n.codomain().clone(),
        table,
    )?))
}

/// Same contract as [`check_definitional`], decided by building the relation
/// `N∘T∘M⁻¹` and testing it for single-valuedness.
pub fn check_relational(t: &FiniteMap, m: &FiniteMap, n: &FiniteMap) -> Result<Verdict> {
    let rel = relation_of(m, t, n)?;
    match single_valuedness(&rel).witness {
        Some(w) => Ok(Verdict::Transcendent(w)),
        None => Ok(Verdict::Immanent(to_map(&rel)?)),
    }
}

/// Default decision procedure.
pub fn check(t: &FiniteMap, m: &FiniteMap, n: &FiniteMap) -> Result<Verdict> {
    check_definitional(t, m, n)
}

/// The faithful model `S` with `S∘M = N∘T`, or `TranscendentInput`.
pub fn extract_model(t: &FiniteMap, m: &FiniteMap, n: &FiniteMap) -> Result<FiniteMap> {
    check(t, m, n)?.into_model()
}

/// `F` with `T = F∘M` when `T` is `(M, I)`-immanent.
pub fn canonical_factor(t: &FiniteMap, m: &FiniteMap) -> Result<Option<FiniteMap>> {
    let id = FiniteMap::identity(t.codomain());
    Ok(check(t, m, &id)?.model().cloned())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BiLabel {
    #[serde(rename = "I-I")]
    ImmanentImmanent,
    #[serde(rename = "I-T")]
    ImmanentTranscendent,
    #[serde(rename = "T-I")]
    TranscendentImmanent,
    #[serde(rename = "T-T")]
    TranscendentTranscendent,
}

impl BiLabel {
    fn from_statuses(forward: Status, backward: Status) -> Self {
        match (forward, backward) {
            (Status::Immanent, Status::Immanent) => BiLabel::ImmanentImmanent,
            (Status::Immanent, Status::Transcendent) => BiLabel::ImmanentTranscendent,
            (Status::Transcendent, Status::Immanent) => BiLabel::TranscendentImmanent,
            (Status::Transcendent, Status::Transcendent) => BiLabel::TranscendentTranscendent,
        }
    }
}

impl fmt::Display for BiLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BiLabel::ImmanentImmanent => "I-I",
            BiLabel::ImmanentTranscendent => "I-T",
            BiLabel::TranscendentImmanent => "T-I",
            BiLabel::TranscendentTranscendent => "T-T",
        })
    }
}

/// Immanence of `T` and `M` relative to each other, with `N = I` both ways.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiClassification {
    /// `T` relative to `(M, I)`.
    pub forward: Status,
    /// `M` relative to `(T, I)`.
    pub backward: Status,
    pub label: BiLabel,
    /// `W → V` model, present when `forward` is immanent.
    pub forward_model: Option<FiniteMap>,
    /// `V → W` model, present when `backward` is immanent.
    pub backward_model: Option<FiniteMap>,
    /// In the I-I case, the bijection `M(U) → T(U)` with `b(M(u)) = T(u)`.
    pub bijection: Option<FiniteMap>,
}

pub fn classify_bidirectional(t: &FiniteMap, m: &FiniteMap) -> Result<BiClassification> {
    let forward = check(t, m, &FiniteMap::identity(t.codomain()))?;
    let backward = check(m, t, &FiniteMap::identity(m.codomain()))?;
    let label = BiLabel::from_statuses(forward.status(), backward.status());
    let bijection = match (&forward, label) {
        (Verdict::Immanent(model), BiLabel::ImmanentImmanent) => {
            Some(model.restrict(&image_set(m))?.corestrict(&image_set(t))?)
        }
        _ => None,
    };
    Ok(BiClassification {
        forward: forward.status(),
        backward: backward.status(),
        label,
        forward_model: forward.model().cloned(),
        backward_model: backward.model().cloned(),
        bijection,
    })
}

/// Hypothesis and conclusion of one structural corollary, evaluated on a
/// concrete triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub hypothesis_holds: bool,
    pub conclusion_holds: bool,
    pub consistent: bool,
    /// Whether a violation indicates a bug. Diagnostic clauses are reported
    /// but may legitimately fail.
    pub asserted: bool,
}

impl Clause {
    fn new(hypothesis_holds: bool, conclusion_holds: bool, asserted: bool) -> Self {
        Clause {
            hypothesis_holds,
            conclusion_holds,
            consistent: !hypothesis_holds || conclusion_holds,
            asserted,
        }
    }
}

/// The five structural clauses:
///
/// - `a`: `T = F∘M` for some `F` ⇒ immanent.
/// - `b`: `M` bijective ⇒ immanent.
/// - `c`: `M` many-to-one, `T` not of the form `F∘M`, `N` injective ⇒
///   transcendent.
/// - `d`: `M` injective, `N` many-to-one, `T` immanent ⇒ `S` many-to-one on
///   `M(U)`. Diagnostic only: fails whenever `N` is injective on `T(U)` and
///   `T` is injective.
/// - `e`: some `S` satisfies `N∘T = S∘M` ⇒ immanent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorollaryReport {
    pub a: Clause,
    pub b: Clause,
    pub c: Clause,
    pub d: Clause,
    pub e: Clause,
}

impl CorollaryReport {
    pub fn clauses(&self) -> [(char, Clause); 5] {
        [
            ('a', self.a),
            ('b', self.b),
            ('c', self.c),
            ('d', self.d),
            ('e', self.e),
        ]
    }

    /// Asserted clauses whose hypothesis held but conclusion failed.
    pub fn violations(&self) -> Vec<char> {
        self.clauses()
            .into_iter()
            .filter(|(_, c)| c.asserted && !c.consistent)
            .map(|(k, _)| k)
            .collect()
    }
}

pub fn corollary_audit(m: &FiniteMap, t: &FiniteMap, n: &FiniteMap) -> Result<CorollaryReport> {
    let verdict = check(t, m, n)?;
    let immanent = verdict.is_immanent();
    let canonical = canonical_factor(t, m)?.is_some();

    let a = Clause::new(canonical, immanent, true);
    let b = Clause::new(m.is_bijective(), immanent, true);
    let c = Clause::new(
        !m.is_injective() && !canonical && n.is_injective(),
        !immanent,
        true,
    );
    let d_hyp = m.is_injective() && !n.is_injective() && immanent;
    let d_concl = match verdict.model() {
        Some(s) => !s.restrict(&image_set(m))?.is_injective(),
        None => false,
    };
    let d = Clause::new(d_hyp, d_concl, false);
    let e = Clause::new(pointwise_solution_exists(m, t, n), immanent, true);
    Ok(CorollaryReport { a, b, c, d, e })
}

// Tries to fill in S(M(u)) := N(T(u)) one input at a time.
fn pointwise_solution_exists(m: &FiniteMap, t: &FiniteMap, n: &FiniteMap) -> bool {
    let mut s: Vec<Option<usize>> = vec![None; m.codomain().len()];
    (0..m.domain().len()).all(|u| {
        let x = n.apply_index(t.apply_index(u));
        *s[m.apply_index(u)].get_or_insert(x) == x
    })
}

/// Whether `N∘T = S∘M` holds pointwise on `U`.
pub fn test_candidate_t(
    t: &FiniteMap,
    s: &FiniteMap,
    m: &FiniteMap,
    n: &FiniteMap,
) -> Result<bool> {
    check_quadruple(s, m, n)?;
    if t.domain() != m.domain() || t.codomain() != n.domain() {
        return Err(Error::SpaceMismatch {
            context: "candidate T",
            expected: format!("{} -> {}", m.domain().name(), n.domain().name()),
            found: format!("{} -> {}", t.domain().name(), t.codomain().name()),
        });
    }
    Ok(compose(n, t)?.table() == compose(s, m)?.table())
}

fn check_quadruple(s: &FiniteMap, m: &FiniteMap, n: &FiniteMap) -> Result<()> {
    if s.domain() != m.codomain() {
        return Err(Error::SpaceMismatch {
            context: "S after M",
            expected: s.domain().name().to_owned(),
            found: m.codomain().name().to_owned(),
        });
    }
    if s.codomain() != n.codomain() {
        return Err(Error::SpaceMismatch {
            context: "codomains of S and N",
            expected: n.codomain().name().to_owned(),
            found: s.codomain().name().to_owned(),
        });
    }
    Ok(())
}

/// All `T: U→V` with `N∘T = S∘M`.
///
/// A bijective `N` gives the single solution `N⁻¹∘S∘M`. Otherwise the search
/// is exhaustive and refused when `|V|^|U|` exceeds `cap`. An empty list means
/// no solution exists.
pub fn solve_for_t(
    s: &FiniteMap,
    m: &FiniteMap,
    n: &FiniteMap,
    cap: u128,
) -> Result<Vec<FiniteMap>> {
    check_quadruple(s, m, n)?;
    let sm = compose(s, m)?;
    if n.is_bijective() {
        return Ok(vec![compose(&n.inverse()?, &sm)?]);
    }
    let (u_len, v_len) = (m.domain().len(), n.domain().len());
    let size = search_space(v_len, u_len);
    if size > cap {
        return Err(Error::SearchSpaceExceeded { size, cap });
    }
    // T(u) is free within N⁻¹(S(M(u))); enumerate the product of those choices
    let n_fibers = n.fiber_indices();
    let allowed: Vec<&[usize]> = sm.table().iter().map(|&x| n_fibers[x].as_slice()).collect();
    if allowed.iter().any(|a| a.is_empty()) {
        return Ok(Vec::new());
    }
    let mut solutions = Vec::new();
    let mut digits = vec![0usize; u_len];
    'search: loop {
        let table = digits.iter().zip(&allowed).map(|(&d, a)| a[d]).collect();
        solutions.push(FiniteMap::from_indices(
            m.domain().clone(),
            n.domain().clone(),
            table,
        )?);
        for k in (0..u_len).rev() {
            digits[k] += 1;
            if digits[k] < allowed[k].len() {
                continue 'search;
            }
            digits[k] = 0;
        }
        break;
    }
    Ok(solutions)
}

fn search_space(base: usize, exp: usize) -> u128 {
    u32::try_from(exp)
        .ok()
        .and_then(|e| (base as u128).checked_pow(e))
        .unwrap_or(u128::MAX)
}

/// The image of `f` as a subset of its codomain, named `im(<codomain>)`.
pub fn image_set(f: &FiniteMap) -> FiniteSet {
    f.codomain()
        .subset(format!("im({})", f.codomain().name()), &f.image_indices())
}
