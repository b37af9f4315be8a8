//! Saturated fusion systems, their orbit categories and higher limits of
//! functors over finite fields.
//!
//! The crate is layered bottom up: [`group`] holds permutation groups,
//! [`homalg`] linear algebra and cohomology, [`fusion`] fusion systems,
//! [`orbit`] orbit categories and functors, [`repgraph`] representation
//! graphs of amalgams and [`verify`] the end-to-end checks.

pub mod group;
pub mod fusion;
pub mod homalg;
pub mod orbit;
pub mod repgraph;
pub mod verdict;
pub mod verify;
