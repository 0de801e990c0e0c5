//! Modularity and two-phase Louvain community detection.
//!
//! Edge weights are divided by the total degree `2m` before anything else, so
//! all arithmetic runs on the same numbers regardless of a uniform scaling of
//! the input weights.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;

/// Minimum modularity gain for a local move.
pub const MIN_GAIN: f64 = 1e-9;
const MAX_PASSES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum WeightSource {
    /// Edge co-mention frequency.
    #[default]
    Frequency,
    /// Every edge weighs 1.
    Unit,
}

impl WeightSource {
    fn weight(self, frequency: u64) -> f64 {
        match self {
            WeightSource::Frequency => frequency as f64,
            WeightSource::Unit => 1.0,
        }
    }
}

/// Community id per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: BTreeMap<String, usize>,
}

impl Partition {
    pub fn community_count(&self) -> usize {
        let mut ids: Vec<usize> = self.assignment.values().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids.len()
    }

    pub fn community_of(&self, v: &str) -> Option<usize> {
        self.assignment.get(v).copied()
    }

    /// Members per community, each list sorted.
    pub fn communities(&self) -> BTreeMap<usize, Vec<&str>> {
        let mut out: BTreeMap<usize, Vec<&str>> = BTreeMap::new();
        for (v, &c) in &self.assignment {
            out.entry(c).or_default().push(v);
        }
        out
    }

    /// Relabels communities 0.. in order of their smallest member.
    pub fn canonical(&self) -> Partition {
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let assignment = self
            .assignment
            .iter()
            .map(|(v, &c)| {
                let next = relabel.len();
                (v.clone(), *relabel.entry(c).or_insert(next))
            })
            .collect();
        Partition { assignment }
    }
}

/// Weighted adjacency with weights pre-divided by `2m`.
struct Network {
    /// (neighbor, weight); no self entries
    adj: Vec<Vec<(usize, f64)>>,
    /// Σ_{i,j in node} A_ij for aggregated nodes, counting both directions
    self_loop: Vec<f64>,
    degree: Vec<f64>,
}

impl Network {
    fn from_graph(g: &KnowledgeGraph, names: &[&str], weight_source: WeightSource) -> Result<Self> {
        if g.edges.is_empty() {
            return Err(Error::EdgelessGraph);
        }
        let total: f64 = g.edges.values().map(|e| 2.0 * weight_source.weight(e.frequency)).sum();
        let mut adj = vec![Vec::new(); names.len()];
        for (k, e) in &g.edges {
            let a = names.binary_search(&k.first()).expect("endpoint");
            let b = names.binary_search(&k.second()).expect("endpoint");
            let w = weight_source.weight(e.frequency) / total;
            adj[a].push((b, w));
            adj[b].push((a, w));
        }
        let degree = adj.iter().map(|row| row.iter().map(|&(_, w)| w).sum()).collect();
        Ok(Self {
            self_loop: vec![0.0; names.len()],
            adj,
            degree,
        })
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Collapses each community into one node.
    fn aggregate(&self, community: &[usize], count: usize) -> Network {
        let mut self_loop = vec![0.0; count];
        let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); count];
        for u in 0..self.len() {
            let cu = community[u];
            self_loop[cu] += self.self_loop[u];
            for &(v, w) in &self.adj[u] {
                let cv = community[v];
                if cu == cv {
                    self_loop[cu] += w;
                } else {
                    *rows[cu].entry(cv).or_insert(0.0) += w;
                }
            }
        }
        let adj: Vec<Vec<(usize, f64)>> = rows.into_iter().map(|r| r.into_iter().collect()).collect();
        let degree = adj
            .iter()
            .zip(&self_loop)
            .map(|(row, s)| s + row.iter().map(|&(_, w)| w).sum::<f64>())
            .collect();
        Network { adj, self_loop, degree }
    }

    /// One local-moving phase starting from `community` (labels below
    /// `len()`, usually singletons). Returns the final labels and whether
    /// anything moved.
    fn local_moves(&self, mut community: Vec<usize>, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut total = vec![0.0f64; n];
        for (u, &c) in community.iter().enumerate() {
            total[c] += self.degree[u];
        }
        let mut order: Vec<usize> = (0..n).collect();
        let mut link = vec![0.0f64; n];
        let mut seen = vec![false; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut moved_any = false;

        for _ in 0..MAX_PASSES {
            order.shuffle(rng);
            let mut moved = false;
            for &u in &order {
                let own = community[u];
                let k = self.degree[u];

                touched.clear();
                for &(v, w) in &self.adj[u] {
                    let c = community[v];
                    if !seen[c] {
                        seen[c] = true;
                        touched.push(c);
                    }
                    link[c] += w;
                }
                total[own] -= k;

                // gain of joining c, up to a common factor of 2
                let gain = |c: usize, link_c: f64| link_c - total[c] * k;
                let stay = gain(own, link[own]);
                let mut best = own;
                let mut best_gain = stay;
                for &c in &touched {
                    let g = gain(c, link[c]);
                    if g > best_gain {
                        best = c;
                        best_gain = g;
                    }
                }
                if best != own && 2.0 * (best_gain - stay) > MIN_GAIN {
                    community[u] = best;
                    moved = true;
                } else {
                    best = own;
                }
                total[best] += k;

                for &c in &touched {
                    link[c] = 0.0;
                    seen[c] = false;
                }
            }
            if !moved {
                break;
            }
            moved_any = true;
        }
        (community, moved_any)
    }
}

fn compact(community: &mut [usize]) -> usize {
    let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
    for c in community.iter_mut() {
        let next = relabel.len();
        *c = *relabel.entry(*c).or_insert(next);
    }
    relabel.len()
}

/// Modularity `Q = Σ_c [in_c / 2m − (tot_c / 2m)²]` of a partition.
pub fn modularity_of(g: &KnowledgeGraph, partition: &Partition, weight_source: WeightSource) -> Result<f64> {
    for v in g.vertices.keys() {
        if !partition.assignment.contains_key(v) {
            return Err(Error::IncompletePartition(v.clone()));
        }
    }
    if g.edges.is_empty() {
        return Err(Error::EdgelessGraph);
    }
    let total: f64 = g.edges.values().map(|e| 2.0 * weight_source.weight(e.frequency)).sum();
    let mut inside: BTreeMap<usize, f64> = BTreeMap::new();
    let mut tot: BTreeMap<usize, f64> = BTreeMap::new();
    for (k, e) in &g.edges {
        let w = weight_source.weight(e.frequency) / total;
        let ca = partition.assignment[k.first()];
        let cb = partition.assignment[k.second()];
        *tot.entry(ca).or_insert(0.0) += w;
        *tot.entry(cb).or_insert(0.0) += w;
        if ca == cb {
            *inside.entry(ca).or_insert(0.0) += 2.0 * w;
        }
    }
    Ok(tot
        .iter()
        .map(|(c, t)| inside.get(c).copied().unwrap_or(0.0) - t * t)
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct LouvainResult {
    pub partition: Partition,
    /// Equals `modularity_of(g, &partition, weight_source)`.
    pub modularity: f64,
    /// Modularity after each aggregation level.
    pub level_modularity: Vec<f64>,
}

/// Seeded two-phase Louvain. Vertex visiting order is a fresh pseudorandom
/// permutation on every pass; a vertex moves only for a gain above
/// [`MIN_GAIN`]. Levels repeat until a local-moving phase changes nothing.
pub fn louvain(g: &KnowledgeGraph, weight_source: WeightSource, seed: u64) -> Result<LouvainResult> {
    let names: Vec<&str> = g.vertices.keys().map(String::as_str).collect();
    let mut net = Network::from_graph(g, &names, weight_source)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut membership: Vec<usize> = (0..names.len()).collect();
    let mut level_modularity = Vec::new();

    loop {
        let (mut community, moved) = net.local_moves((0..net.len()).collect(), &mut rng);
        if !moved {
            break;
        }
        let count = compact(&mut community);
        for m in membership.iter_mut() {
            *m = community[*m];
        }
        level_modularity.push(modularity_of(g, &partition_from(&names, &membership), weight_source)?);
        net = net.aggregate(&community, count);
    }

    let partition = partition_from(&names, &membership).canonical();
    let modularity = modularity_of(g, &partition, weight_source)?;
    if level_modularity.is_empty() {
        level_modularity.push(modularity);
    }
    Ok(LouvainResult {
        partition,
        modularity,
        level_modularity,
    })
}

fn partition_from(names: &[&str], membership: &[usize]) -> Partition {
    Partition {
        assignment: names.iter().zip(membership).map(|(n, &c)| (n.to_string(), c)).collect(),
    }
}
