//! Combinatorial group testing where the tested elements see the answers to
//! the queries that contain them.
//!
//! The crate covers the classical family properties (separating, union-free,
//! cover-free and friends), exact knowledge semantics for elements and
//! coalitions, solvers for the knowledge models together with their
//! combinatorial characterizations, constructions of linear regular
//! hypergraphs of large Berge girth, and adaptive query sessions.
//!
//! Scans over scenarios, coalitions and families run on rayon when the
//! `parallel` feature is enabled (the default); see [`exec`].

pub mod adaptive;
pub mod bitset;
pub mod error;
pub mod exec;
pub mod family;
pub mod generators;
mod hitting;
pub mod hypergraph;
pub mod knowledge;
pub mod models;
pub mod separation;
pub mod sweep;

pub use bitset::ElementSet;
pub use error::{Error, Result};
pub use family::{PropertyReport, SetFamily, Witness};
