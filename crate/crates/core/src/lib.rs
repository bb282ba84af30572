//! Node embeddings from approximate personalized PageRank neighborhoods.
//!
//! Each node gets a sparse APPR vector computed by local push; training pairs
//! `(seed, neighbor)` are drawn from those vectors with alias tables and fed
//! to skip-gram with negative sampling.

pub mod alias;
pub mod appr;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod eval;
pub mod generators;
pub mod graph;
pub mod matrix;
pub mod sgns;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{CsrGraph, LabelSet};
