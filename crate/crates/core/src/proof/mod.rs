//! Hilbert-style derivations for the bounded continuity systems.

pub mod audit;
pub mod axiom;
pub mod builder;
pub mod json;
pub mod kernel;
pub mod taut;
pub mod trouble;

pub use axiom::{instantiate_axiom, random_instance, Axiom, AxiomError, AxiomInstance, SchemaId};
pub use kernel::{check_derivation, Derivation, Justification, Line, NecOp, RejectReason, SystemDescriptor, Verdict};
pub use taut::{is_tautology, TautError};
pub use json::{derivation_from_json, derivation_to_json, DerivationError};
pub use trouble::{derive_trouble, trouble_milestones};
pub use audit::audit_soundness;
