//! Exact engine for finite information dependency models (Witsenhausen's
//! intrinsic model specialized to finite sets).
//!
//! Every σ-field is represented by its atom partition over an explicitly
//! enumerated configuration space, and every probability is an exact
//! rational. The crate is organized bottom-up:
//!
//! - [`field`]: configuration spaces, coordinate masks, partitions, traces.
//! - [`model`]: W-models, SCM/DAG import, interventions, built-in examples.
//! - [`precedence`]: conditional precedence, closures, topological separation.
//! - [`solvability`]: policies, closed-loop solutions, causality, factorization.
//! - [`probability`]: pushforward laws, conditionals, do-calculus checks.
//! - [`dag`]: d-separation and the d-sep / t-sep equivalence harness.
//!
//! Data-parallel loops go through [`exec::Exec`]; with the default
//! `parallel` feature they run on rayon, otherwise sequentially. Results
//! never depend on the execution mode.

pub mod agents;
pub mod dag;
pub mod error;
pub mod exec;
pub mod field;
pub mod model;
pub mod precedence;
pub mod probability;
pub mod solvability;

pub use agents::AgentSet;
pub use error::{IdmError, Result};
pub use exec::Exec;
