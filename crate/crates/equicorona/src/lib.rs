//! Construction and equitable coloring of l-corona products of cubic graphs.
//!
//! The crate provides:
//! - simple-graph plumbing with edge-list and graph6 I/O ([`graph`]),
//! - corona and l-corona products with a fixed vertex layout ([`corona`]),
//! - coloring predicates (equitable, strong equitable, semi-equitable)
//!   ([`coloring`]),
//! - an exact backtracking solver for constrained colorings ([`solver`]),
//! - constructive coloring routines for corona products together with a
//!   dispatcher that picks the applicable construction and reports the
//!   equitable chromatic number or a two-sided bound ([`engine`]),
//! - small-graph generators and enumeration ([`generate`]),
//! - the command-line front end ([`cli`]).

pub mod cli;
pub mod coloring;
pub mod corona;
pub mod engine;
pub mod generate;
pub mod graph;
pub mod solver;

pub use coloring::{ClassProfile, Coloring};
pub use corona::{CoronaAddress, CoronaSpec};
pub use graph::{CubicClass, CubicKind, Graph};
pub use solver::{ChiEqResult, ChiEqStatus, SearchBudget};
