//! Graph-level analytics: distances, modularity classes and edge sentiment.

pub mod distance;
pub mod louvain;
pub mod stats;

use serde::Serialize;

pub use distance::{component_census, eccentricity_stats, ComponentCensus, EccentricityStats};
pub use louvain::{louvain, modularity_of, LouvainResult, Partition, WeightSource};
pub use stats::{fractional_ranks, pearson, sentiment_stats, spearman, Histogram, SentimentStats};

use crate::error::{Error, Result};
use crate::graph::{BuildConfig, KnowledgeGraph, TOOL_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryMeta {
    pub source_label: String,
    pub seed: u64,
    pub weight_source: WeightSource,
    pub build_config: BuildConfig,
    pub tool_version: String,
}

/// Everything `metrics` reports for one graph. Fields that cannot be
/// computed are `None` and named in `flags`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub meta: SummaryMeta,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub components: ComponentCensus,
    pub radius: Option<u32>,
    pub diameter: Option<u32>,
    pub avg_path_length: Option<f64>,
    pub modularity: Option<f64>,
    pub community_count: Option<usize>,
    pub avg_polarity: Option<f64>,
    pub avg_subjectivity: Option<f64>,
    pub spearman_pol_subj: Option<f64>,
    pub polarity_histogram: Histogram,
    pub subjectivity_histogram: Histogram,
    pub flags: Vec<String>,
}

/// Summary plus the partition behind its modularity value.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub summary: GraphSummary,
    pub partition: Option<Partition>,
}

pub fn analyze(g: &KnowledgeGraph, weight_source: WeightSource, seed: u64) -> Result<Analysis> {
    let mut flags = Vec::new();
    let components = component_census(g);
    if components.count > 1 {
        flags.push("disconnected: distances use the largest component".to_string());
    }

    let (radius, diameter, avg_path_length) = match eccentricity_stats(g) {
        Ok(e) => {
            if !(e.radius <= e.diameter && e.diameter <= 2 * e.radius) {
                return Err(Error::Invariant(format!(
                    "radius {} / diameter {} violate r <= d <= 2r",
                    e.radius, e.diameter
                )));
            }
            if !e.path_length_defined {
                flags.push("path_length_undefined: single-vertex component".to_string());
            }
            (
                Some(e.radius),
                Some(e.diameter),
                e.path_length_defined.then_some(e.avg_path_length),
            )
        }
        Err(Error::EmptyGraph) => {
            flags.push("empty_graph".to_string());
            (None, None, None)
        }
        Err(e) => return Err(e),
    };

    let (modularity, partition) = match louvain(g, weight_source, seed) {
        Ok(r) => (Some(r.modularity), Some(r.partition)),
        Err(Error::EdgelessGraph) => {
            flags.push("edgeless_graph: modularity and sentiment statistics undefined".to_string());
            (None, None)
        }
        Err(e) => return Err(e),
    };

    let sentiment = match sentiment_stats(g) {
        Ok(s) => Some(s),
        Err(Error::EdgelessGraph) => None,
        Err(e) => return Err(e),
    };
    if sentiment.as_ref().is_some_and(|s| s.spearman_pol_subj.is_none()) {
        flags.push("spearman_undefined: fewer than two edges or constant values".to_string());
    }
    let (polarity_histogram, subjectivity_histogram) = match &sentiment {
        Some(s) => (s.polarity_histogram.clone(), s.subjectivity_histogram.clone()),
        None => (
            Histogram::new(-1.0, 1.0, stats::POLARITY_BINS),
            Histogram::new(0.0, 1.0, stats::SUBJECTIVITY_BINS),
        ),
    };
    if polarity_histogram.total() != g.edge_count() as u64 || subjectivity_histogram.total() != g.edge_count() as u64 {
        return Err(Error::Invariant("histogram totals differ from the edge count".into()));
    }

    let summary = GraphSummary {
        meta: SummaryMeta {
            source_label: g.source_label.clone(),
            seed,
            weight_source,
            build_config: g.build_config.clone(),
            tool_version: TOOL_VERSION.to_string(),
        },
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        components,
        radius,
        diameter,
        avg_path_length,
        community_count: partition.as_ref().map(Partition::community_count),
        modularity,
        avg_polarity: sentiment.as_ref().map(|s| s.avg_polarity),
        avg_subjectivity: sentiment.as_ref().map(|s| s.avg_subjectivity),
        spearman_pol_subj: sentiment.as_ref().and_then(|s| s.spearman_pol_subj),
        polarity_histogram,
        subjectivity_histogram,
        flags,
    };
    Ok(Analysis { summary, partition })
}

pub fn summarize(g: &KnowledgeGraph, weight_source: WeightSource, seed: u64) -> Result<GraphSummary> {
    analyze(g, weight_source, seed).map(|a| a.summary)
}
