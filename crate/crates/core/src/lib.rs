//! Build entity co-occurrence knowledge graphs from news corpora, measure
//! them, and compare two sources.
//!
//! The pipeline runs corpus → annotations → alias table → graph → metrics,
//! with [`contrast`] comparing two graphs and [`export`] writing interchange
//! formats.

pub mod annotate;
pub mod canon;
pub mod cli;
pub mod contrast;
pub mod corpus;
pub mod error;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod sentiment;
pub mod text;

pub use error::{Error, Result};
