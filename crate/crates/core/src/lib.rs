//! Weakly supervised sarcasm and nastiness classification for online
//! dialogue.
//!
//! The pipeline mines lexical cues (from crowd annotations or chi-square
//! statistics), runs threshold-gated high-precision classifiers over them,
//! learns syntactic extraction patterns from those predictions, and
//! classifies with the patterns.

pub mod bootstrap;
pub mod corpus;
pub mod error;
pub mod hp;
pub mod indicators;
pub mod metrics;
pub mod pattern;
pub mod pipeline;
pub mod report;
pub mod synthetic;

pub use error::{Error, Result};
