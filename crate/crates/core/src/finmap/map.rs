use std::fmt;

use super::{product_space, Element, FiniteSet};
use crate::error::{Error, Result};

/// A total, single-valued map between two finite sets.
///
/// The table is stored by canonical index: `table[i]` is the codomain index
/// of the image of the `i`-th domain element.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMap {
    domain: FiniteSet,
    codomain: FiniteSet,
    table: Vec<usize>,
}

/// The fibers of a map: one block per element of its image, in codomain
/// order. Blocks list domain elements in domain order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub blocks: Vec<(Element, Vec<Element>)>,
}

impl Partition {
    pub fn block(&self, key: &Element) -> Option<&[Element]> {
        self.blocks
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, members)| members.as_slice())
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

impl FiniteMap {
    /// Builds a map from explicit `(u, f(u))` assignments.
    pub fn new<I, A, B>(domain: FiniteSet, codomain: FiniteSet, assignments: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Element>,
        B: Into<Element>,
    {
        let mut slots: Vec<Option<usize>> = vec![None; domain.len()];
        for (u, x) in assignments {
            let (u, x) = (u.into(), x.into());
            let ui = domain.index_of(&u).ok_or_else(|| Error::DanglingElement {
                set: domain.name().to_owned(),
                element: u.clone(),
            })?;
            let xi = codomain
                .index_of(&x)
                .ok_or_else(|| Error::DanglingElement {
                    set: codomain.name().to_owned(),
                    element: x.clone(),
                })?;
            if slots[ui].replace(xi).is_some() {
                return Err(Error::NonTotal {
                    domain: domain.name().to_owned(),
                    element: u,
                    problem: "assigned more than once",
                });
            }
        }
        let table = slots
            .iter()
            .enumerate()
            .map(|(i, slot)| {
                slot.ok_or_else(|| Error::NonTotal {
                    domain: domain.name().to_owned(),
                    element: domain.element(i).clone(),
                    problem: "unassigned",
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMap {
            domain,
            codomain,
            table,
        })
    }

    /// Builds a map from a table of codomain indices.
    pub fn from_indices(domain: FiniteSet, codomain: FiniteSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != domain.len() {
            return Err(Error::NonTotal {
                domain: domain.name().to_owned(),
                element: domain
                    .elements()
                    .get(table.len())
                    .cloned()
                    .unwrap_or_else(|| Element::atom("?")),
                problem: "not covered by the table",
            });
        }
        if let Some(&bad) = table.iter().find(|&&x| x >= codomain.len()) {
            return Err(Error::DanglingElement {
                set: codomain.name().to_owned(),
                element: Element::atom(format!("#{bad}")),
            });
        }
        Ok(FiniteMap {
            domain,
            codomain,
            table,
        })
    }

    /// Tabulates `f` over the domain.
    pub fn from_fn<F>(domain: FiniteSet, codomain: FiniteSet, mut f: F) -> Result<Self>
    where
        F: FnMut(&Element) -> Element,
    {
        let table = domain
            .iter()
            .map(|u| {
                let x = f(u);
                codomain.index_of(&x).ok_or_else(|| Error::DanglingElement {
                    set: codomain.name().to_owned(),
                    element: x,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMap {
            domain,
            codomain,
            table,
        })
    }

    pub fn identity(set: &FiniteSet) -> Self {
        FiniteMap {
            domain: set.clone(),
            codomain: set.clone(),
            table: (0..set.len()).collect(),
        }
    }

    pub fn constant(domain: FiniteSet, codomain: FiniteSet, value: &Element) -> Result<Self> {
        let xi = codomain
            .index_of(value)
            .ok_or_else(|| Error::DanglingElement {
                set: codomain.name().to_owned(),
                element: value.clone(),
            })?;
        let table = vec![xi; domain.len()];
        Ok(FiniteMap {
            domain,
            codomain,
            table,
        })
    }

    /// Projection of a product space onto its `index`-th factor.
    pub fn projection(product: &FiniteSet, index: usize) -> Result<Self> {
        let factor = product
            .factors()
            .and_then(|f| f.get(index))
            .cloned()
            .ok_or_else(|| Error::SpaceMismatch {
                context: "projection",
                expected: format!("product with a factor {index}"),
                found: product.name().to_owned(),
            })?;
        FiniteMap::from_fn(product.clone(), factor, |u| {
            u.component(index).expect("product element").clone()
        })
    }

    /// `u ↦ (u, u)`.
    pub fn diagonal(set: &FiniteSet) -> Self {
        let square = product_space(&[set.clone(), set.clone()]).expect("two factors");
        let n = set.len();
        FiniteMap {
            domain: set.clone(),
            codomain: square,
            table: (0..n).map(|i| i * n + i).collect(),
        }
    }

    pub fn domain(&self) -> &FiniteSet {
        &self.domain
    }

    pub fn codomain(&self) -> &FiniteSet {
        &self.codomain
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, u: &Element) -> Result<&Element> {
        let i = self.domain.index_of(u).ok_or_else(|| Error::OutOfDomain {
            domain: self.domain.name().to_owned(),
            element: u.clone(),
        })?;
        Ok(self.codomain.element(self.table[i]))
    }

    #[inline]
    pub fn apply_index(&self, i: usize) -> usize {
        self.table[i]
    }

    /// `(u, f(u))` pairs in domain order.
    pub fn pairs(&self) -> impl Iterator<Item = (&Element, &Element)> + '_ {
        self.domain
            .iter()
            .zip(&self.table)
            .map(|(u, &x)| (u, self.codomain.element(x)))
    }

    /// `self ∘ inner`, i.e. apply `inner` first.
    pub fn after(&self, inner: &FiniteMap) -> Result<FiniteMap> {
        compose(self, inner)
    }

    /// Indices of codomain elements hit by the map, ascending.
    pub fn image_indices(&self) -> Vec<usize> {
        let mut hit = vec![false; self.codomain.len()];
        for &x in &self.table {
            hit[x] = true;
        }
        hit.iter()
            .enumerate()
            .filter_map(|(i, &h)| h.then_some(i))
            .collect()
    }

    pub fn image(&self) -> Vec<&Element> {
        self.image_indices()
            .into_iter()
            .map(|i| self.codomain.element(i))
            .collect()
    }

    /// Fibers by codomain index: `result[x]` lists the domain indices mapped
    /// to `x`, ascending. Empty for elements outside the image.
    pub fn fiber_indices(&self) -> Vec<Vec<usize>> {
        let mut fibers = vec![Vec::new(); self.codomain.len()];
        for (u, &x) in self.table.iter().enumerate() {
            fibers[x].push(u);
        }
        fibers
    }

    pub fn preimage(&self, x: &Element) -> Result<FiniteSet> {
        let xi = self
            .codomain
            .index_of(x)
            .ok_or_else(|| Error::OutOfCodomain {
                codomain: self.codomain.name().to_owned(),
                element: x.clone(),
            })?;
        let members: Vec<usize> = (0..self.table.len())
            .filter(|&u| self.table[u] == xi)
            .collect();
        Ok(self
            .domain
            .subset(format!("{}⁻¹({x})", self.domain.name()), &members))
    }

    pub fn fibers(&self) -> Partition {
        let blocks = self
            .fiber_indices()
            .into_iter()
            .enumerate()
            .filter(|(_, members)| !members.is_empty())
            .map(|(x, members)| {
                (
                    self.codomain.element(x).clone(),
                    members
                        .into_iter()
                        .map(|u| self.domain.element(u).clone())
                        .collect(),
                )
            })
            .collect();
        Partition { blocks }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.len()];
        self.table
            .iter()
            .all(|&x| !std::mem::replace(&mut seen[x], true))
    }

    pub fn is_surjective(&self) -> bool {
        self.image_indices().len() == self.codomain.len()
    }

    pub fn is_bijective(&self) -> bool {
        self.domain.len() == self.codomain.len() && self.is_injective()
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Result<FiniteMap> {
        if !self.is_bijective() {
            return Err(Error::NotInvertible);
        }
        let mut table = vec![0; self.codomain.len()];
        for (u, &x) in self.table.iter().enumerate() {
            table[x] = u;
        }
        Ok(FiniteMap {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            table,
        })
    }

    /// Restricts the domain to `sub`, which must list elements of the domain.
    pub fn restrict(&self, sub: &FiniteSet) -> Result<FiniteMap> {
        let table = sub
            .iter()
            .map(|u| {
                self.domain
                    .index_of(u)
                    .map(|i| self.table[i])
                    .ok_or_else(|| Error::OutOfDomain {
                        domain: self.domain.name().to_owned(),
                        element: u.clone(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteMap {
            domain: sub.clone(),
            codomain: self.codomain.clone(),
            table,
        })
    }

    /// Same table, new codomain; every image element must belong to it.
    pub fn corestrict(&self, codomain: &FiniteSet) -> Result<FiniteMap> {
        FiniteMap::from_fn(self.domain.clone(), codomain.clone(), |u| {
            self.apply(u).expect("own domain").clone()
        })
    }
}

/// `outer ∘ inner`. The inner codomain must be the outer domain, as a set.
pub fn compose(outer: &FiniteMap, inner: &FiniteMap) -> Result<FiniteMap> {
    if inner.codomain != outer.domain {
        return Err(Error::SpaceMismatch {
            context: "compose",
            expected: outer.domain.name().to_owned(),
            found: inner.codomain.name().to_owned(),
        });
    }
    Ok(FiniteMap {
        domain: inner.domain.clone(),
        codomain: outer.codomain.clone(),
        table: inner.table.iter().map(|&v| outer.table[v]).collect(),
    })
}

/// Direct sum `f ⊕ g` acting componentwise on the product of the domains.
pub fn product_map(f: &FiniteMap, g: &FiniteMap) -> FiniteMap {
    let domain = product_space(&[f.domain.clone(), g.domain.clone()]).expect("two factors");
    let codomain = product_space(&[f.codomain.clone(), g.codomain.clone()]).expect("two factors");
    let (n, m) = (g.domain.len(), g.codomain.len());
    let table = (0..domain.len())
        .map(|i| f.table[i / n] * m + g.table[i % n])
        .collect();
    FiniteMap {
        domain,
        codomain,
        table,
    }
}

/// Pairing `u ↦ (f(u), g(u))` over a shared domain.
pub fn fork(f: &FiniteMap, g: &FiniteMap) -> Result<FiniteMap> {
    if f.domain != g.domain {
        return Err(Error::SpaceMismatch {
            context: "fork",
            expected: f.domain.name().to_owned(),
            found: g.domain.name().to_owned(),
        });
    }
    let codomain = product_space(&[f.codomain.clone(), g.codomain.clone()]).expect("two factors");
    let m = g.codomain.len();
    let table = f
        .table
        .iter()
        .zip(&g.table)
        .map(|(&a, &b)| a * m + b)
        .collect();
    Ok(FiniteMap {
        domain: f.domain.clone(),
        codomain,
        table,
    })
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [", self.domain.name(), self.codomain.name())?;
        for (i, (u, x)) in self.pairs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}↦{x}")?;
        }
        f.write_str("]")
    }
}
