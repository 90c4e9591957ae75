use std::fmt;

/// A value of a finite space: either a named atom or a tuple drawn from a
/// product space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Atom(String),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn atom(id: impl Into<String>) -> Self {
        Element::Atom(id.into())
    }

    pub fn tuple(parts: impl IntoIterator<Item = Element>) -> Self {
        Element::Tuple(parts.into_iter().collect())
    }

    /// Component `index` of a tuple; `None` for atoms or out-of-range indices.
    pub fn component(&self, index: usize) -> Option<&Element> {
        match self {
            Element::Tuple(parts) => parts.get(index),
            Element::Atom(_) => None,
        }
    }

    /// Follows a component path through nested tuples.
    pub fn project(&self, path: &[usize]) -> Option<&Element> {
        path.iter().try_fold(self, |e, &i| e.component(i))
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Element::Atom(id) => Some(id),
            Element::Tuple(_) => None,
        }
    }

    pub(crate) fn has_empty_id(&self) -> bool {
        match self {
            Element::Atom(id) => id.is_empty(),
            Element::Tuple(parts) => parts.iter().any(Element::has_empty_id),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(id) => f.write_str(id),
            Element::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl From<&str> for Element {
    fn from(id: &str) -> Self {
        Element::Atom(id.to_owned())
    }
}

impl From<String> for Element {
    fn from(id: String) -> Self {
        Element::Atom(id)
    }
}
