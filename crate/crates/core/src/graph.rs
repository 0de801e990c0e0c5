//! The per-source entity graph and its native JSON file format.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::annotate::{admissible_entities, AdmissionMode, SentenceAnnotation};
use crate::canon::{AliasTable, CanonParams};
use crate::error::{Error, Result};
use crate::text;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum EdgeMode {
    /// Every pair of entities sharing a sentence.
    SentenceCooccurrence,
    /// Entity pairs split across the two arguments of one relation.
    RelationPair,
}

impl EdgeMode {
    /// `relation_pair` when any annotation carries relations.
    pub fn auto(annotations: &[SentenceAnnotation]) -> Self {
        if annotations.iter().any(|a| !a.relations.is_empty()) {
            EdgeMode::RelationPair
        } else {
            EdgeMode::SentenceCooccurrence
        }
    }
}

/// Unordered vertex pair, stored with the smaller name first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey(String, String);

impl EdgeKey {
    /// Returns `None` for self-loops.
    pub fn new(a: &str, b: &str) -> Option<Self> {
        match a.cmp(b) {
            std::cmp::Ordering::Less => Some(EdgeKey(a.to_string(), b.to_string())),
            std::cmp::Ordering::Greater => Some(EdgeKey(b.to_string(), a.to_string())),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> &str {
        &self.0
    }

    pub fn second(&self) -> &str {
        &self.1
    }

    pub fn contains(&self, v: &str) -> bool {
        self.0 == v || self.1 == v
    }

    pub fn other(&self, v: &str) -> &str {
        if self.0 == v {
            &self.1
        } else {
            &self.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeAttrs {
    pub frequency: u64,
    pub polarity: f64,
    pub subjectivity: f64,
}

/// Every threshold and mode that shaped a graph; echoed into its file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub edge_mode: EdgeMode,
    pub admission_mode: AdmissionMode,
    pub min_parent_freq: u64,
    pub min_child_freq: u64,
    pub min_vertex_weight: u64,
    pub min_edge_freq: u64,
    #[serde(default)]
    pub blocklist_size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_title: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub annotator: Option<String>,
}

impl BuildConfig {
    pub fn new(edge_mode: EdgeMode, admission_mode: AdmissionMode, canon: CanonParams) -> Self {
        Self {
            edge_mode,
            admission_mode,
            min_parent_freq: canon.min_parent_freq,
            min_child_freq: canon.min_child_freq,
            min_vertex_weight: 1,
            min_edge_freq: 1,
            blocklist_size: 0,
            include_title: None,
            annotator: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeGraph {
    pub source_label: String,
    pub vertices: BTreeMap<String, u64>,
    pub edges: BTreeMap<EdgeKey, EdgeAttrs>,
    pub build_config: BuildConfig,
}

impl KnowledgeGraph {
    pub fn empty(source_label: &str, build_config: BuildConfig) -> Self {
        Self {
            source_label: source_label.to_string(),
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            build_config,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Inserts a vertex and an edge in one go; handy for fixtures.
    pub fn add_edge(&mut self, a: &str, b: &str, attrs: EdgeAttrs) {
        let Some(key) = EdgeKey::new(a, b) else {
            return;
        };
        self.vertices.entry(a.to_string()).or_insert(1);
        self.vertices.entry(b.to_string()).or_insert(1);
        self.edges.insert(key, attrs);
    }

    pub fn degree(&self, v: &str) -> usize {
        self.edges.keys().filter(|k| k.contains(v)).count()
    }

    /// Adjacency lists keyed by vertex name.
    pub fn adjacency(&self) -> BTreeMap<&str, Vec<(&str, &EdgeAttrs)>> {
        let mut adj: BTreeMap<&str, Vec<(&str, &EdgeAttrs)>> =
            self.vertices.keys().map(|v| (v.as_str(), Vec::new())).collect();
        for (k, a) in &self.edges {
            adj.entry(k.first()).or_default().push((k.second(), a));
            adj.entry(k.second()).or_default().push((k.first(), a));
        }
        adj
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        for (v, &w) in &self.vertices {
            if w < 1 {
                return Err(Error::Input(format!("vertex `{v}` has weight 0")));
            }
        }
        for (k, a) in &self.edges {
            if k.first() >= k.second() {
                return Err(Error::Input(format!(
                    "edge {}--{} is not a proper pair",
                    k.first(),
                    k.second()
                )));
            }
            if !self.vertices.contains_key(k.first()) || !self.vertices.contains_key(k.second()) {
                return Err(Error::Input(format!(
                    "edge {}--{} has a missing endpoint",
                    k.first(),
                    k.second()
                )));
            }
            if a.frequency < 1 {
                return Err(Error::Input(format!(
                    "edge {}--{} has frequency 0",
                    k.first(),
                    k.second()
                )));
            }
            if !(a.polarity.is_finite() && (-1.0..=1.0).contains(&a.polarity)) {
                return Err(Error::Input(format!(
                    "edge {}--{}: polarity out of range",
                    k.first(),
                    k.second()
                )));
            }
            if !(a.subjectivity.is_finite() && (0.0..=1.0).contains(&a.subjectivity)) {
                return Err(Error::Input(format!(
                    "edge {}--{}: subjectivity out of range",
                    k.first(),
                    k.second()
                )));
            }
        }
        Ok(())
    }
}

/// Non-fatal findings while building.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildWarning {
    /// An admissible surface neither in the table nor dropped by it: the
    /// table was built from different annotations.
    UnknownSurface {
        article_id: String,
        surface: String,
    },
    NoAnnotations,
}

impl std::fmt::Display for BuildWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BuildWarning::UnknownSurface { article_id, surface } => {
                write!(
                    f,
                    "article `{article_id}`: surface `{surface}` is not in the alias table"
                )
            }
            BuildWarning::NoAnnotations => write!(f, "no annotations; graph is empty"),
        }
    }
}

/// Mention counts used to build the alias table: one per admissible surface
/// per sentence.
pub fn mention_counts(annotations: &[SentenceAnnotation], mode: AdmissionMode) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for a in annotations {
        for s in admissible_entities(a, mode) {
            *counts.entry(s).or_insert(0) += 1;
        }
    }
    counts
}

#[derive(Default)]
struct EdgeAccum {
    frequency: u64,
    polarity_sum: f64,
    subjectivity_sum: f64,
}

/// Builds the graph from annotations.
///
/// Per sentence the admissible entities are canonicalized and deduplicated;
/// each adds 1 to its vertex weight. Pairs contribute co-mentions according to
/// `edge_mode`, each carrying the sentence's polarity and subjectivity; edge
/// sentiment is the mean over contributions. Annotations are processed in
/// (article_id, sentence_index) order so the result does not depend on the
/// input order.
pub fn build_graph(
    source_label: &str,
    annotations: &[SentenceAnnotation],
    table: &AliasTable,
    edge_mode: EdgeMode,
    admission_mode: AdmissionMode,
) -> (KnowledgeGraph, Vec<BuildWarning>) {
    let config = BuildConfig::new(edge_mode, admission_mode, table.params());
    let mut graph = KnowledgeGraph::empty(source_label, config);
    let mut warnings = Vec::new();
    if annotations.is_empty() {
        warnings.push(BuildWarning::NoAnnotations);
        return (graph, warnings);
    }

    let mut ordered: Vec<&SentenceAnnotation> = annotations.iter().collect();
    ordered.sort_by(|a, b| (&a.article_id, a.sentence_index).cmp(&(&b.article_id, b.sentence_index)));

    let mut reported = BTreeSet::new();
    let mut accum: BTreeMap<EdgeKey, EdgeAccum> = BTreeMap::new();
    for ann in ordered {
        let admissible = admissible_entities(ann, admission_mode);
        let mut canon_of: BTreeMap<&str, &str> = BTreeMap::new();
        for s in &admissible {
            match table.canonicalize(s) {
                Some(c) => {
                    canon_of.insert(s.as_str(), c);
                }
                None if !table.is_dropped(s) && reported.insert(s.clone()) => {
                    warnings.push(BuildWarning::UnknownSurface {
                        article_id: ann.article_id.clone(),
                        surface: s.clone(),
                    });
                }
                None => {}
            }
        }
        let present: BTreeSet<&str> = canon_of.values().copied().collect();
        for v in &present {
            *graph.vertices.entry(v.to_string()).or_insert(0) += 1;
        }

        let mut contribute = |pair: EdgeKey| {
            let e = accum.entry(pair).or_default();
            e.frequency += 1;
            e.polarity_sum += ann.polarity;
            e.subjectivity_sum += ann.subjectivity;
        };
        match edge_mode {
            EdgeMode::SentenceCooccurrence => {
                let list: Vec<&str> = present.iter().copied().collect();
                for (i, a) in list.iter().enumerate() {
                    for b in &list[i + 1..] {
                        contribute(EdgeKey::new(a, b).expect("distinct"));
                    }
                }
            }
            EdgeMode::RelationPair => {
                for rel in &ann.relations {
                    let inside = |arg: &str| -> BTreeSet<&str> {
                        let arg = text::normalize(arg);
                        canon_of
                            .iter()
                            .filter(|(s, _)| text::contains_tokens(&arg, s))
                            .map(|(_, c)| *c)
                            .collect()
                    };
                    let left = inside(&rel.arg0);
                    let right = inside(&rel.arg1);
                    let pairs: BTreeSet<EdgeKey> = left
                        .iter()
                        .flat_map(|a| right.iter().filter_map(move |b| EdgeKey::new(a, b)))
                        .collect();
                    for p in pairs {
                        contribute(p);
                    }
                }
            }
        }
    }

    graph.edges = accum
        .into_iter()
        .map(|(k, e)| {
            let n = e.frequency as f64;
            let attrs = EdgeAttrs {
                frequency: e.frequency,
                polarity: (e.polarity_sum / n).clamp(-1.0, 1.0),
                subjectivity: (e.subjectivity_sum / n).clamp(0.0, 1.0),
            };
            (k, attrs)
        })
        .collect();
    (graph, warnings)
}

/// Drops vertices lighter than `min_vertex_weight` and edges rarer than
/// `min_edge_freq` (plus edges that lost an endpoint), then any vertex left
/// without edges. With both thresholds at 1 the graph is returned unchanged.
pub fn filter_graph(g: &KnowledgeGraph, min_vertex_weight: u64, min_edge_freq: u64) -> Result<KnowledgeGraph> {
    if min_vertex_weight < 1 || min_edge_freq < 1 {
        return Err(Error::Input("filter thresholds must be at least 1".into()));
    }
    let mut config = g.build_config.clone();
    config.min_vertex_weight = config.min_vertex_weight.max(min_vertex_weight);
    config.min_edge_freq = config.min_edge_freq.max(min_edge_freq);
    if min_vertex_weight == 1 && min_edge_freq == 1 {
        return Ok(KnowledgeGraph {
            build_config: config,
            ..g.clone()
        });
    }
    let heavy: BTreeMap<String, u64> = g
        .vertices
        .iter()
        .filter(|(_, &w)| w >= min_vertex_weight)
        .map(|(v, &w)| (v.clone(), w))
        .collect();
    let edges: BTreeMap<EdgeKey, EdgeAttrs> = g
        .edges
        .iter()
        .filter(|(k, a)| {
            a.frequency >= min_edge_freq && heavy.contains_key(k.first()) && heavy.contains_key(k.second())
        })
        .map(|(k, a)| (k.clone(), *a))
        .collect();
    let touched: BTreeSet<&str> = edges.keys().flat_map(|k| [k.first(), k.second()]).collect();
    let vertices = heavy
        .into_iter()
        .filter(|(v, _)| touched.contains(v.as_str()))
        .collect();
    Ok(KnowledgeGraph {
        source_label: g.source_label.clone(),
        vertices,
        edges,
        build_config: config,
    })
}

// ---------------------------------------------------------------------------
// Native JSON format

#[derive(Debug, Serialize, Deserialize)]
struct GraphMeta {
    source_label: String,
    build_config: BuildConfig,
    tool_version: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct VertexRecord {
    id: String,
    weight: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    source: String,
    target: String,
    frequency: u64,
    polarity: f64,
    subjectivity: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphFile {
    meta: GraphMeta,
    vertices: Vec<VertexRecord>,
    edges: Vec<EdgeRecord>,
}

/// Serializes to the native format: `meta`, then vertices sorted by name,
/// then edges sorted by endpoint pair.
pub fn write_graph_json<W: Write>(g: &KnowledgeGraph, mut out: W) -> Result<()> {
    let file = GraphFile {
        meta: GraphMeta {
            source_label: g.source_label.clone(),
            build_config: g.build_config.clone(),
            tool_version: TOOL_VERSION.to_string(),
        },
        vertices: g
            .vertices
            .iter()
            .map(|(id, &weight)| VertexRecord { id: id.clone(), weight })
            .collect(),
        edges: g
            .edges
            .iter()
            .map(|(k, a)| EdgeRecord {
                source: k.first().to_string(),
                target: k.second().to_string(),
                frequency: a.frequency,
                polarity: a.polarity,
                subjectivity: a.subjectivity,
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &file).map_err(|e| Error::Input(format!("serializing graph: {e}")))?;
    out.write_all(b"\n").map_err(|e| Error::Input(e.to_string()))?;
    Ok(())
}

pub fn read_graph_json(text: &str, name: &str) -> Result<KnowledgeGraph> {
    let file: GraphFile =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("{name}: malformed graph file: {e}")))?;
    let mut g = KnowledgeGraph::empty(&file.meta.source_label, file.meta.build_config);
    for v in file.vertices {
        if g.vertices.insert(v.id.clone(), v.weight).is_some() {
            return Err(Error::Input(format!("{name}: duplicate vertex `{}`", v.id)));
        }
    }
    for e in file.edges {
        let key = EdgeKey::new(&e.source, &e.target)
            .ok_or_else(|| Error::Input(format!("{name}: self-loop on `{}`", e.source)))?;
        let attrs = EdgeAttrs {
            frequency: e.frequency,
            polarity: e.polarity,
            subjectivity: e.subjectivity,
        };
        if g.edges.insert(key, attrs).is_some() {
            return Err(Error::Input(format!(
                "{name}: duplicate edge {}--{}",
                e.source, e.target
            )));
        }
    }
    g.validate().map_err(|e| Error::Input(format!("{name}: {e}")))?;
    Ok(g)
}

pub fn load_graph(path: &Path) -> Result<KnowledgeGraph> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_graph_json(&text, &path.display().to_string())
}

pub fn save_graph(g: &KnowledgeGraph, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_graph_json(g, &mut buf)?;
    fs::write(path, buf).map_err(|e| Error::io(path, e))
}
