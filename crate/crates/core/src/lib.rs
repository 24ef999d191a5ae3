//! Horn-fragment description-logic engine for forensic event classification.
//!
//! The crate bundles a knowledge-base model and text format, a semi-naive
//! materializing reasoner, the forensic event ontology with its media
//! annotation model, precision/recall evaluation, a refinement-based GCI
//! learner and a seeded scenario generator.

pub mod datagen;
pub mod error;
pub mod learner;
pub mod metrics;
pub mod model;
pub mod ontology;
pub mod reasoner;
pub mod text;

pub use error::{Error, Result};
