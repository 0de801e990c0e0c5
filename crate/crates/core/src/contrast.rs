//! Cross-source divergence: edges whose polarity flips sign between two
//! graphs, and vertices whose mean adjacent polarity differs the most.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeAttrs, EdgeKey, KnowledgeGraph, TOOL_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContrastParams {
    pub min_freq: u64,
    pub min_abs_pol: f64,
    pub min_degree: usize,
    pub top_k: usize,
}

impl Default for ContrastParams {
    fn default() -> Self {
        Self {
            min_freq: 3,
            min_abs_pol: 0.05,
            min_degree: 3,
            top_k: 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lean {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeContrast {
    pub source: String,
    pub target: String,
    pub polarity_a: f64,
    pub polarity_b: f64,
    pub freq_a: u64,
    pub freq_b: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexContrast {
    pub entity: String,
    pub avg_adj_polarity_a: f64,
    pub avg_adj_polarity_b: f64,
    /// `avg_adj_polarity_a - avg_adj_polarity_b`
    pub contrast_score: f64,
    pub lean: Lean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastMeta {
    pub source_a: String,
    pub source_b: String,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastReport {
    pub meta: ContrastMeta,
    pub config: ContrastParams,
    pub shared_vertices: usize,
    pub shared_edges: usize,
    pub edge_items: Vec<EdgeContrast>,
    pub vertex_items: Vec<VertexContrast>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Alignment {
    pub vertices: BTreeSet<String>,
    pub edges: BTreeSet<EdgeKey>,
}

/// Vertices and edges present in both graphs.
pub fn align(a: &KnowledgeGraph, b: &KnowledgeGraph) -> Alignment {
    Alignment {
        vertices: a
            .vertices
            .keys()
            .filter(|v| b.vertices.contains_key(*v))
            .cloned()
            .collect(),
        edges: a.edges.keys().filter(|k| b.edges.contains_key(*k)).cloned().collect(),
    }
}

/// Shared edges whose polarities have strictly opposite signs, both at least
/// `min_abs_pol` in magnitude and seen at least `min_freq` times in each
/// graph. Sorted by polarity gap, largest first, then by endpoint pair.
pub fn contrast_edges(a: &KnowledgeGraph, b: &KnowledgeGraph, min_freq: u64, min_abs_pol: f64) -> Vec<EdgeContrast> {
    let mut items: Vec<EdgeContrast> = a
        .edges
        .iter()
        .filter_map(|(k, ea)| b.edges.get(k).map(|eb| (k, ea, eb)))
        .filter(|(_, ea, eb)| {
            let opposite = (ea.polarity > 0.0 && eb.polarity < 0.0) || (ea.polarity < 0.0 && eb.polarity > 0.0);
            opposite
                && ea.polarity.abs() >= min_abs_pol
                && eb.polarity.abs() >= min_abs_pol
                && ea.frequency >= min_freq
                && eb.frequency >= min_freq
        })
        .map(|(k, ea, eb)| EdgeContrast {
            source: k.first().to_string(),
            target: k.second().to_string(),
            polarity_a: ea.polarity,
            polarity_b: eb.polarity,
            freq_a: ea.frequency,
            freq_b: eb.frequency,
        })
        .collect();
    items.sort_by(|x, y| {
        let gx = (x.polarity_a - x.polarity_b).abs();
        let gy = (y.polarity_a - y.polarity_b).abs();
        gy.total_cmp(&gx)
            .then_with(|| (&x.source, &x.target).cmp(&(&y.source, &y.target)))
    });
    items
}

fn adjacent_means(g: &KnowledgeGraph) -> BTreeMap<&str, (usize, f64)> {
    let mut acc: BTreeMap<&str, (usize, f64)> = BTreeMap::new();
    for (k, e) in &g.edges {
        for v in [k.first(), k.second()] {
            let slot = acc.entry(v).or_insert((0, 0.0));
            slot.0 += 1;
            slot.1 += e.polarity;
        }
    }
    acc.into_iter().map(|(v, (d, s))| (v, (d, s / d as f64))).collect()
}

/// Shared vertices with degree at least `min_degree` in both graphs, scored
/// by the difference of their mean adjacent-edge polarity (A minus B). Zero
/// scores carry no lean and are left out. Returns the `top_k` largest
/// magnitudes, ties broken by name.
pub fn contrast_vertices(
    a: &KnowledgeGraph,
    b: &KnowledgeGraph,
    min_degree: usize,
    top_k: usize,
) -> Vec<VertexContrast> {
    let ma = adjacent_means(a);
    let mb = adjacent_means(b);
    let mut items: Vec<VertexContrast> = ma
        .iter()
        .filter_map(|(v, &(da, pa))| {
            let &(db, pb) = mb.get(v)?;
            if da < min_degree || db < min_degree {
                return None;
            }
            let score = pa - pb;
            if score == 0.0 {
                return None;
            }
            Some(VertexContrast {
                entity: v.to_string(),
                avg_adj_polarity_a: pa,
                avg_adj_polarity_b: pb,
                contrast_score: score,
                lean: if score > 0.0 { Lean::A } else { Lean::B },
            })
        })
        .collect();
    items.sort_by(|x, y| {
        y.contrast_score
            .abs()
            .total_cmp(&x.contrast_score.abs())
            .then_with(|| x.entity.cmp(&y.entity))
    });
    items.truncate(top_k);
    items
}

pub fn contrast(a: &KnowledgeGraph, b: &KnowledgeGraph, params: ContrastParams) -> ContrastReport {
    let al = align(a, b);
    ContrastReport {
        meta: ContrastMeta {
            source_a: a.source_label.clone(),
            source_b: b.source_label.clone(),
            tool_version: TOOL_VERSION.to_string(),
        },
        config: params,
        shared_vertices: al.vertices.len(),
        shared_edges: al.edges.len(),
        edge_items: contrast_edges(a, b, params.min_freq, params.min_abs_pol),
        vertex_items: contrast_vertices(a, b, params.min_degree, params.top_k),
    }
}

/// A vertex of the contrast subgraph with attributes from both sources.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastNode {
    pub id: String,
    pub weight_a: Option<u64>,
    pub weight_b: Option<u64>,
    pub contrast_score: Option<f64>,
    pub lean: Option<Lean>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContrastLink {
    pub source: String,
    pub target: String,
    pub a: Option<EdgeAttrs>,
    pub b: Option<EdgeAttrs>,
    pub contrasting: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ContrastSubgraph {
    pub source_a: String,
    pub source_b: String,
    pub nodes: Vec<ContrastNode>,
    pub links: Vec<ContrastLink>,
}

/// Joint subgraph of the contrast items: every contrast edge with its
/// endpoints, every contrast vertex, and the edges present in either graph
/// between two contrast vertices.
pub fn contrast_subgraph(
    edge_items: &[EdgeContrast],
    vertex_items: &[VertexContrast],
    a: &KnowledgeGraph,
    b: &KnowledgeGraph,
) -> ContrastSubgraph {
    let scored: BTreeMap<&str, &VertexContrast> = vertex_items.iter().map(|v| (v.entity.as_str(), v)).collect();
    let mut links: BTreeMap<EdgeKey, bool> = BTreeMap::new();
    for e in edge_items {
        if let Some(k) = EdgeKey::new(&e.source, &e.target) {
            links.insert(k, true);
        }
    }
    for (k, _) in a.edges.iter().chain(b.edges.iter()) {
        if scored.contains_key(k.first()) && scored.contains_key(k.second()) {
            links.entry(k.clone()).or_insert(false);
        }
    }
    let mut ids: BTreeSet<&str> = scored.keys().copied().collect();
    for k in links.keys() {
        ids.insert(k.first());
        ids.insert(k.second());
    }
    ContrastSubgraph {
        source_a: a.source_label.clone(),
        source_b: b.source_label.clone(),
        nodes: ids
            .into_iter()
            .map(|id| ContrastNode {
                id: id.to_string(),
                weight_a: a.vertices.get(id).copied(),
                weight_b: b.vertices.get(id).copied(),
                contrast_score: scored.get(id).map(|v| v.contrast_score),
                lean: scored.get(id).map(|v| v.lean),
            })
            .collect(),
        links: links
            .into_iter()
            .map(|(k, contrasting)| ContrastLink {
                source: k.first().to_string(),
                target: k.second().to_string(),
                a: a.edges.get(&k).copied(),
                b: b.edges.get(&k).copied(),
                contrasting,
            })
            .collect(),
    }
}

impl ContrastSubgraph {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.links.is_empty()
    }
}
