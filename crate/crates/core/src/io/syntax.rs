//! Text forms of elements, space expressions and table rows.
//!
//! Atoms are runs of characters other than whitespace, parentheses and
//! commas; tuples are written `(a,b)`. A table row is `lhs -> rhs`, where
//! the left side of a node row lists one element per input port separated by
//! whitespace.

use std::collections::BTreeMap;

use crate::finmap::{product_space, Element, FiniteSet};

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos == self.text.len()
    }

    fn element(&mut self) -> Result<Element, String> {
        self.skip_ws();
        if self.eat('(') {
            let mut parts = Vec::new();
            loop {
                parts.push(self.element()?);
                self.skip_ws();
                if self.eat(')') {
                    return Ok(Element::Tuple(parts));
                }
                if !self.eat(',') {
                    return Err(format!("expected `,` or `)` in `{}`", self.text));
                }
            }
        }
        let len = self
            .rest()
            .find(|c: char| c.is_whitespace() || matches!(c, '(' | ')' | ','))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(format!("expected an element in `{}`", self.text));
        }
        let atom = &self.rest()[..len];
        self.pos += len;
        Ok(Element::atom(atom))
    }
}

pub fn parse_element(text: &str) -> Result<Element, String> {
    let mut cur = Cursor::new(text);
    let e = cur.element()?;
    cur.skip_ws();
    if cur.at_end() {
        Ok(e)
    } else {
        Err(format!("trailing input in `{text}`"))
    }
}

/// Whether `text` is usable as an atom id.
pub fn is_atom(text: &str) -> bool {
    !text.is_empty()
        && text != "->"
        && !text
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ','))
}

/// Splits `lhs -> rhs`.
fn split_row(row: &str) -> Result<(&str, &str), String> {
    row.split_once("->")
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or_else(|| format!("row `{row}` has no `->`"))
}

/// A node row: whitespace-separated port values, then the output.
pub fn parse_node_row(row: &str) -> Result<(Element, Element), String> {
    let (lhs, rhs) = split_row(row)?;
    let mut cur = Cursor::new(lhs);
    let mut args = Vec::new();
    loop {
        cur.skip_ws();
        if cur.at_end() {
            break;
        }
        args.push(cur.element()?);
    }
    Ok((Element::Tuple(args), parse_element(rhs)?))
}

/// A map row: one element on each side.
pub fn parse_map_row(row: &str) -> Result<(Element, Element), String> {
    let (lhs, rhs) = split_row(row)?;
    Ok((parse_element(lhs)?, parse_element(rhs)?))
}

pub fn node_row(args: &Element, out: &Element) -> String {
    let lhs = match args {
        Element::Tuple(parts) => parts
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(" "),
        atom => atom.to_string(),
    };
    format!("{lhs} -> {out}")
}

pub fn map_row(u: &Element, x: &Element) -> String {
    format!("{u} -> {x}")
}

/// Space expressions use element syntax with space names as atoms:
/// `Bit`, `(Bit,Tri)`, `((Bit,Bit),Bit)`.
pub fn parse_space(text: &str, spaces: &BTreeMap<String, FiniteSet>) -> Result<FiniteSet, String> {
    fn resolve(e: &Element, spaces: &BTreeMap<String, FiniteSet>) -> Result<FiniteSet, String> {
        match e {
            Element::Atom(name) => spaces
                .get(name)
                .cloned()
                .ok_or_else(|| format!("unknown space `{name}`")),
            Element::Tuple(parts) => {
                let parts = parts
                    .iter()
                    .map(|p| resolve(p, spaces))
                    .collect::<Result<Vec<_>, _>>()?;
                product_space(&parts).map_err(|e| e.to_string())
            }
        }
    }
    resolve(&parse_element(text)?, spaces)
}

pub fn space_expr(space: &FiniteSet) -> String {
    match space.factors() {
        Some(parts) => format!(
            "({})",
            parts.iter().map(space_expr).collect::<Vec<_>>().join(",")
        ),
        None => space.name().to_owned(),
    }
}
