//! Gadget reductions from satisfiability to edge-disjoint paths.
//!
//! The crate builds the planar undirected gadgets XCH and LIC, the directed
//! gadgets YES/NO/ON/IF/LL/TT/VV, assembles them into grids, compiles CNF
//! formulas into disjoint-paths instances, and checks the gadget-level
//! facts behind those reductions with an exhaustive disjoint-paths solver.

pub mod cnf;
pub mod crossing;
pub mod cuts;
pub mod error;
pub mod expand;
pub mod gadgets;
pub mod graph;
pub mod grid;
pub mod harness;
pub mod instance;
pub mod io;
pub mod reduction;
pub mod solver;

pub use error::{Error, Result};
pub use graph::{EdgeId, GraphBuilder, RotationGraph, VertexId};
pub use instance::{validate_routing, DemandClass, Instance, RoutedPath, Routing, ValidationReport, Violation};
