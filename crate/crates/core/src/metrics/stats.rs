//! Edge sentiment statistics: averages, rank correlation, histograms.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::KnowledgeGraph;

pub const POLARITY_BINS: usize = 40;
pub const SUBJECTIVITY_BINS: usize = 20;

/// 1-based ranks with ties sharing the average of their positions.
pub fn fractional_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // positions i+1 ..= j+1
        let avg = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Pearson correlation; `None` for fewer than two points or zero variance.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    assert_eq!(x.len(), y.len(), "pearson inputs must have equal length");
    let n = x.len();
    if n < 2 {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rho: Pearson correlation of fractional ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    pearson(&fractional_ranks(x), &fractional_ranks(y))
}

/// Fixed-width histogram over `[lo, hi]` with right-closed bins `(a, b]`;
/// the first bin also takes `lo`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub lo: f64,
    pub hi: f64,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        Self {
            lo,
            hi,
            counts: vec![0; bins],
        }
    }

    pub fn edge(&self, i: usize) -> f64 {
        if i == self.counts.len() {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * i as f64 / self.counts.len() as f64
    }

    pub fn bin_of(&self, x: f64) -> usize {
        let n = self.counts.len();
        let width = (self.hi - self.lo) / n as f64;
        let guess = (((x - self.lo) / width).ceil() as isize - 1).clamp(0, n as isize - 1) as usize;
        // settle rounding at bin edges against the published edges
        let mut b = guess;
        while b > 0 && x <= self.edge(b) {
            b -= 1;
        }
        while b + 1 < n && x > self.edge(b + 1) {
            b += 1;
        }
        b
    }

    pub fn add(&mut self, x: f64) {
        let b = self.bin_of(x);
        self.counts[b] += 1;
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// CSV with header `bin_low,bin_high,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_low,bin_high,count\n");
        for (i, c) in self.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", self.edge(i), self.edge(i + 1), c));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentimentStats {
    pub avg_polarity: f64,
    pub avg_subjectivity: f64,
    /// `None` when undefined (fewer than two edges or constant values).
    pub spearman_pol_subj: Option<f64>,
    pub polarity_histogram: Histogram,
    pub subjectivity_histogram: Histogram,
}

/// Unweighted per-edge sentiment statistics.
pub fn sentiment_stats(g: &KnowledgeGraph) -> Result<SentimentStats> {
    if g.edges.is_empty() {
        return Err(Error::EdgelessGraph);
    }
    let pol: Vec<f64> = g.edges.values().map(|e| e.polarity).collect();
    let subj: Vec<f64> = g.edges.values().map(|e| e.subjectivity).collect();
    let n = pol.len() as f64;
    let mut ph = Histogram::new(-1.0, 1.0, POLARITY_BINS);
    let mut sh = Histogram::new(0.0, 1.0, SUBJECTIVITY_BINS);
    pol.iter().for_each(|&p| ph.add(p));
    subj.iter().for_each(|&s| sh.add(s));
    Ok(SentimentStats {
        avg_polarity: pol.iter().sum::<f64>() / n,
        avg_subjectivity: subj.iter().sum::<f64>() / n,
        spearman_pol_subj: spearman(&pol, &subj),
        polarity_histogram: ph,
        subjectivity_histogram: sh,
    })
}
