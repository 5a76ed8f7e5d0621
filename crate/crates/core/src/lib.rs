//! A desk-scale combinatorics laboratory around poset and graph associahedra.
//!
//! The crate builds the face lattices of poset associahedra (via tubings) and
//! graph associahedra (via graph tubings and B-trees), enumerates stack-sorting
//! preimages through decreasing binary trees, encodes binary trees as Dyck
//! paths, and does all polynomial work (f/h/gamma-vectors, Narayana families,
//! real-root counting) in exact integer and rational arithmetic.
//!
//! The [`verify`] module wires these pieces into cross-checks: the same
//! h-polynomial computed from tubings, from B-tree descents, and from
//! stack-sorting descent statistics, plus bijection round trips and
//! real-rootedness certificates.

pub mod bijection;
pub mod dyck;
pub mod graph;
pub mod poly;
pub mod poset;
pub mod roots;
pub mod stacksort;
pub mod subset;
pub mod verify;

pub use subset::Subset;
