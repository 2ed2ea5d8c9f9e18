//! Ranked retrieval with a query/document length-similarity feature.
//!
//! The crate indexes short free-text profiles, scores them with BM25 (where
//! the length normalizer can be swapped for a length-similarity curve) and
//! several classic baselines, evaluates runs with mean reciprocal rank, tunes
//! parameters by exhaustive grid search, and generates synthetic paired
//! corpora for experiments.

pub mod cli;
pub mod corpus;
pub mod eval;
pub mod feature_curve;
pub mod rankers;
pub mod synth;
pub mod tuner;
