//! Variability-aware selection of machine-learning algorithms with bias
//! auditing.
//!
//! The crate encodes feature models of ML techniques and modeling
//! assumptions ([`fm`], [`dsl`]), profiles tabular datasets
//! ([`data`]), turns a profile into a FIFO queue of candidate algorithms
//! ([`selector`]), trains desk-scale classifiers ([`learners`]), computes
//! performance and group-fairness metrics ([`metrics`]) and ties it all
//! together into an explainable selection report ([`pipeline`]).

pub mod data;
pub mod dsl;
pub mod fm;
pub mod learners;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod selector;

pub const TOOL_VERSION: &str = concat!("varsel ", env!("CARGO_PKG_VERSION"));
