//! Workbench for dynamic topological logic over finite preorder models.
//!
//! The crate evaluates the polyadic tangled language on finite dynamic
//! models, computes rank-stratified tangled bisimulations, generates the
//! witness model families used to separate the bounded-width continuity
//! systems, and checks Hilbert derivations in those systems.

pub mod bisim;
pub mod error;
pub mod eval;
pub mod experiments;
pub mod formula;
pub mod gallery;
pub mod model;
pub mod oracle;
pub mod parser;
pub mod proof;
pub mod random;
pub mod report;
pub mod schema;
pub mod selftest;
pub mod verify;

pub use error::{FormulaError, ModelError};
pub use formula::{mod_index, Formula, Substitution};
pub use model::{ClusterPartition, DynModel, ModelDocument, Orbit, PointSet};
pub use parser::parse;
