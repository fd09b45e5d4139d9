//! Compilers from CNF formulas to disjoint-paths instances, and witness
//! routings built from satisfying assignments.

pub mod directed;
pub mod templates;
pub mod undirected;
