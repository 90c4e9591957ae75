//! Finite sets and total maps between them.
//!
//! Everything here is an immutable value: sets share their storage behind an
//! `Arc`, and every operation returns a fresh map.

mod element;
mod map;
mod set;

pub use element::Element;
pub use map::{compose, fork, product_map, FiniteMap, Partition};
pub use set::{product_space, FiniteSet};
