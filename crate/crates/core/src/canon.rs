//! Entity canonicalization: longer surface forms are merged into shorter,
//! more frequent "parent" forms whose tokens they contain.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::{self, is_stopword};

pub const DEFAULT_MIN_PARENT_FREQ: u64 = 10;
pub const DEFAULT_MIN_CHILD_FREQ: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonParams {
    pub min_parent_freq: u64,
    pub min_child_freq: u64,
}

impl Default for CanonParams {
    fn default() -> Self {
        Self {
            min_parent_freq: DEFAULT_MIN_PARENT_FREQ,
            min_child_freq: DEFAULT_MIN_CHILD_FREQ,
        }
    }
}

/// Why a surface was excluded from the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DropReason {
    Rare,
    SingleCharacter,
    Stopword,
    Blocklisted,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AliasTable {
    /// surface -> canonical entity; targets map to themselves
    canonical: BTreeMap<String, String>,
    /// canonical entity -> summed frequency of every surface mapped onto it
    frequencies: BTreeMap<String, u64>,
    surface_frequencies: BTreeMap<String, u64>,
    dropped: BTreeMap<String, (u64, DropReason)>,
    params: CanonParams,
}

/// Parses a blocklist: one surface per line, normalized on load; `#` comments.
pub fn load_blocklist(path: &Path) -> Result<BTreeSet<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .map(text::normalize)
        .filter(|s| !s.is_empty())
        .collect())
}

fn drop_reason(surface: &str, freq: u64, min_child: u64, blocklist: &BTreeSet<String>) -> Option<DropReason> {
    if blocklist.contains(surface) {
        Some(DropReason::Blocklisted)
    } else if surface.chars().count() <= 1 {
        Some(DropReason::SingleCharacter)
    } else if surface.split(' ').all(is_stopword) {
        Some(DropReason::Stopword)
    } else if freq < min_child {
        Some(DropReason::Rare)
    } else {
        None
    }
}

/// Builds the alias table from mention frequencies of normalized surfaces.
///
/// Surfaces rarer than `min_child_freq` (and single-character, stopword-only
/// or blocklisted ones) are dropped. Every surviving surface `L` is mapped to
/// the best parent `P` whose tokens form a strict contiguous sub-run of
/// `L`'s tokens with `freq(P) >= min_parent_freq` and `freq(P) >= freq(L)`:
/// highest frequency first, then fewer tokens, then lexicographic order.
/// Chains are followed to their root.
pub fn build_alias_table(
    mentions: &BTreeMap<String, u64>,
    params: CanonParams,
    blocklist: &BTreeSet<String>,
) -> Result<AliasTable> {
    if params.min_parent_freq < 1 || params.min_child_freq < 1 {
        return Err(Error::Input("frequency thresholds must be at least 1".into()));
    }
    let mut dropped = BTreeMap::new();
    let mut survivors: BTreeMap<&str, u64> = BTreeMap::new();
    for (surface, &freq) in mentions {
        if freq == 0 {
            continue;
        }
        match drop_reason(surface, freq, params.min_child_freq, blocklist) {
            Some(reason) => {
                dropped.insert(surface.clone(), (freq, reason));
            }
            None => {
                survivors.insert(surface.as_str(), freq);
            }
        }
    }

    // Candidate parents are indexed by their exact token sequence, so every
    // contiguous sub-run of a child can be looked up directly.
    let parents: BTreeMap<&str, u64> = survivors
        .iter()
        .filter(|(_, &f)| f >= params.min_parent_freq)
        .map(|(s, &f)| (*s, f))
        .collect();

    let mut parent_of: BTreeMap<&str, &str> = BTreeMap::new();
    for (&child, &child_freq) in &survivors {
        let toks: Vec<&str> = child.split(' ').collect();
        let mut best: Option<(&str, u64, usize)> = None;
        for len in 1..toks.len() {
            for window in toks.windows(len) {
                let sub = window.join(" ");
                let Some((&cand, &freq)) = parents.get_key_value(sub.as_str()) else {
                    continue;
                };
                if freq < child_freq {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((b, bf, bl)) => {
                        (freq, std::cmp::Reverse(len), std::cmp::Reverse(cand))
                            > (bf, std::cmp::Reverse(bl), std::cmp::Reverse(b))
                    }
                };
                if better {
                    best = Some((cand, freq, len));
                }
            }
        }
        if let Some((p, _, _)) = best {
            parent_of.insert(child, p);
        }
    }

    let mut canonical = BTreeMap::new();
    let mut frequencies: BTreeMap<String, u64> = BTreeMap::new();
    for (&surface, &freq) in &survivors {
        let mut root = surface;
        // token count strictly decreases along the chain, so this terminates
        while let Some(&p) = parent_of.get(root) {
            root = p;
        }
        canonical.insert(surface.to_string(), root.to_string());
        *frequencies.entry(root.to_string()).or_default() += freq;
    }

    Ok(AliasTable {
        canonical,
        frequencies,
        surface_frequencies: survivors.iter().map(|(s, &f)| (s.to_string(), f)).collect(),
        dropped,
        params,
    })
}

impl AliasTable {
    /// Canonical entity for a normalized surface; `None` when the surface was
    /// dropped or never seen.
    pub fn canonicalize(&self, surface: &str) -> Option<&str> {
        self.canonical.get(surface).map(String::as_str)
    }

    pub fn is_dropped(&self, surface: &str) -> bool {
        self.dropped.contains_key(surface)
    }

    pub fn params(&self) -> CanonParams {
        self.params
    }

    pub fn mappings(&self) -> impl Iterator<Item = (&str, &str)> {
        self.canonical.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Canonical entities with their aggregated frequencies.
    pub fn canonical_frequencies(&self) -> &BTreeMap<String, u64> {
        &self.frequencies
    }

    pub fn surface_frequency(&self, surface: &str) -> Option<u64> {
        self.surface_frequencies.get(surface).copied()
    }

    pub fn dropped(&self) -> impl Iterator<Item = (&str, u64, DropReason)> {
        self.dropped.iter().map(|(k, &(f, r))| (k.as_str(), f, r))
    }

    pub fn dropped_mass(&self) -> u64 {
        self.dropped.values().map(|(f, _)| f).sum()
    }

    pub fn canonical_count(&self) -> usize {
        self.frequencies.len()
    }

    /// CSV dump `surface,canonical,frequency` over surviving surfaces.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| Error::Input(format!("writing alias table: {e}"));
        w.write_record(["surface", "canonical", "frequency"]).map_err(to_err)?;
        for (surface, canon) in &self.canonical {
            let f = self.surface_frequencies[surface].to_string();
            w.write_record([surface.as_str(), canon.as_str(), f.as_str()])
                .map_err(to_err)?;
        }
        w.flush()
            .map_err(|e| Error::Input(format!("writing alias table: {e}")))?;
        Ok(())
    }
}
