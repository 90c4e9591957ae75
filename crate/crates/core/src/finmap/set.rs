use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::Element;
use crate::error::{Error, Result};

/// A named, ordered universe of distinct elements.
///
/// The element order is the canonical order used for every tie-break in the
/// crate. Product spaces remember their factors so that tuple components can
/// be typed. Two sets are the same set only when name, elements and factors
/// all agree; isomorphic sets with different names are distinct.
#[derive(Clone)]
pub struct FiniteSet(Arc<SetInner>);

struct SetInner {
    name: String,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    factors: Option<Vec<FiniteSet>>,
}

impl FiniteSet {
    pub fn new<I, E>(name: impl Into<String>, elements: I) -> Result<Self>
    where
        I: IntoIterator<Item = E>,
        E: Into<Element>,
    {
        Self::build(
            name.into(),
            elements.into_iter().map(Into::into).collect(),
            None,
        )
    }

    fn build(
        name: String,
        elements: Vec<Element>,
        factors: Option<Vec<FiniteSet>>,
    ) -> Result<Self> {
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if e.has_empty_id() {
                return Err(Error::EmptyElementId { set: name });
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::DuplicateElement {
                    set: name,
                    element: e.clone(),
                });
            }
        }
        Ok(FiniteSet(Arc::new(SetInner {
            name,
            elements,
            index,
            factors,
        })))
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn elements(&self) -> &[Element] {
        &self.0.elements
    }

    pub fn len(&self) -> usize {
        self.0.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.elements.is_empty()
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.0.index.contains_key(e)
    }

    /// Canonical position of `e`.
    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.0.index.get(e).copied()
    }

    pub fn element(&self, index: usize) -> &Element {
        &self.0.elements[index]
    }

    /// Factors of a product space, `None` for atomic spaces.
    pub fn factors(&self) -> Option<&[FiniteSet]> {
        self.0.factors.as_deref()
    }

    /// Space of the component reached by `path` through nested products.
    pub fn component_space(&self, path: &[usize]) -> Option<FiniteSet> {
        let mut space = self.clone();
        for &i in path {
            space = space.factors()?.get(i)?.clone();
        }
        Some(space)
    }

    /// The subset of `self` holding the elements at `indices`, kept in
    /// canonical order.
    pub fn subset(&self, name: impl Into<String>, indices: &[usize]) -> FiniteSet {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let elements = sorted.iter().map(|&i| self.element(i).clone()).collect();
        FiniteSet::build(name.into(), elements, None).expect("subset of a valid set is valid")
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Element> {
        self.0.elements.iter()
    }
}

/// Cartesian product of `parts`. Tuples are listed lexicographically with
/// respect to each factor's canonical order.
pub fn product_space(parts: &[FiniteSet]) -> Result<FiniteSet> {
    if parts.is_empty() {
        return Err(Error::EmptyProduct);
    }
    let name = format!(
        "({})",
        parts
            .iter()
            .map(FiniteSet::name)
            .collect::<Vec<_>>()
            .join("×")
    );
    let size: usize = parts.iter().map(FiniteSet::len).product();
    let mut elements = Vec::with_capacity(size);
    if size > 0 {
        let mut digits = vec![0usize; parts.len()];
        'tuples: loop {
            elements.push(Element::Tuple(
                digits
                    .iter()
                    .zip(parts)
                    .map(|(&d, p)| p.element(d).clone())
                    .collect(),
            ));
            // odometer step, last factor fastest
            for k in (0..parts.len()).rev() {
                digits[k] += 1;
                if digits[k] < parts[k].len() {
                    continue 'tuples;
                }
                digits[k] = 0;
            }
            break;
        }
    }
    FiniteSet::build(name, elements, Some(parts.to_vec()))
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.name == other.0.name
                && self.0.elements == other.0.elements
                && self.0.factors == other.0.factors)
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{{", self.name())?;
        for (i, e) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Element;
    type IntoIter = std::slice::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}
