//! Hop-count distance statistics on the largest connected component.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;

/// Compact adjacency view of a graph with vertices indexed in name order.
#[derive(Debug, Clone)]
pub struct IndexedGraph<'g> {
    pub names: Vec<&'g str>,
    pub adj: Vec<Vec<usize>>,
}

impl<'g> IndexedGraph<'g> {
    pub fn new(g: &'g KnowledgeGraph) -> Self {
        let names: Vec<&str> = g.vertices.keys().map(String::as_str).collect();
        let mut adj = vec![Vec::new(); names.len()];
        for k in g.edges.keys() {
            // names is sorted, so binary search recovers the index
            let a = names.binary_search(&k.first()).expect("edge endpoint is a vertex");
            let b = names.binary_search(&k.second()).expect("edge endpoint is a vertex");
            adj[a].push(b);
            adj[b].push(a);
        }
        Self { names, adj }
    }

    /// Connected components as sorted index lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.names.len()];
        let mut out = Vec::new();
        for start in 0..self.names.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![start];
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn edge_count_within(&self, comp: &[usize]) -> usize {
        comp.iter().map(|&u| self.adj[u].len()).sum::<usize>() / 2
    }

    /// Largest component by vertex count, then edge count, then the
    /// lexicographically smallest member name.
    pub fn largest_component(&self) -> Option<Vec<usize>> {
        self.components().into_iter().reduce(|best, c| {
            let key = |c: &Vec<usize>| (c.len(), self.edge_count_within(c));
            // components arrive ordered by smallest member, so keep the first on ties
            if key(&c) > key(&best) {
                c
            } else {
                best
            }
        })
    }

    /// BFS hop distances from `src`; `u32::MAX` marks unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.names.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if dist[v] == u32::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCensus {
    pub count: usize,
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    pub largest_vertices: usize,
    pub largest_edges: usize,
}

pub fn component_census(g: &KnowledgeGraph) -> ComponentCensus {
    let ig = IndexedGraph::new(g);
    let comps = ig.components();
    let mut sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    let largest = ig.largest_component().unwrap_or_default();
    ComponentCensus {
        count: comps.len(),
        sizes,
        largest_vertices: largest.len(),
        largest_edges: ig.edge_count_within(&largest),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EccentricityStats {
    pub radius: u32,
    pub diameter: u32,
    /// Sum of shortest-path lengths over unordered pairs of the component.
    pub path_length_sum: u64,
    pub pair_count: u64,
    /// `path_length_sum / pair_count`, or 0 when there are no pairs.
    pub avg_path_length: f64,
    pub path_length_defined: bool,
    pub component_vertices: usize,
    pub component_edges: usize,
}

/// Radius, diameter and average path length of the largest component,
/// treating edges as unit length. BFS runs in parallel per source vertex.
pub fn eccentricity_stats(g: &KnowledgeGraph) -> Result<EccentricityStats> {
    let ig = IndexedGraph::new(g);
    let comp = ig.largest_component().ok_or(Error::EmptyGraph)?;
    let per_source: Vec<(u32, u64)> = comp
        .par_iter()
        .map(|&s| {
            let dist = ig.bfs(s);
            comp.iter().fold((0u32, 0u64), |(ecc, sum), &t| {
                let d = dist[t];
                (ecc.max(d), sum + u64::from(d))
            })
        })
        .collect();
    let radius = per_source.iter().map(|p| p.0).min().expect("non-empty component");
    let diameter = per_source.iter().map(|p| p.0).max().expect("non-empty component");
    // every unordered pair was counted from both ends
    let path_length_sum = per_source.iter().map(|p| p.1).sum::<u64>() / 2;
    let n = comp.len() as u64;
    let pair_count = n * (n - 1) / 2;
    let defined = pair_count > 0;
    Ok(EccentricityStats {
        radius,
        diameter,
        path_length_sum,
        pair_count,
        avg_path_length: if defined {
            path_length_sum as f64 / pair_count as f64
        } else {
            0.0
        },
        path_length_defined: defined,
        component_vertices: comp.len(),
        component_edges: ig.edge_count_within(&comp),
    })
}
