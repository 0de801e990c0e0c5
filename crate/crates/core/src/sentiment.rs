//! Lexicon-based polarity/subjectivity scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

const DEFAULT_LEXICON: &str = include_str!("../data/lexicon.tsv");

/// Words within this many preceding tokens flip and dampen a match.
pub const NEGATION_WINDOW: usize = 3;
pub const NEGATION_FACTOR: f64 = -0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LexiconEntry {
    pub polarity: f64,
    pub subjectivity: f64,
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SentimentLexicon {
    entries: BTreeMap<String, LexiconEntry>,
    negators: BTreeSet<String>,
}

impl SentimentLexicon {
    pub fn new(entries: BTreeMap<String, LexiconEntry>, negators: BTreeSet<String>) -> Result<Self> {
        for (word, e) in &entries {
            if !(-1.0..=1.0).contains(&e.polarity) {
                return Err(Error::Input(format!(
                    "lexicon entry `{word}`: polarity {} outside [-1, 1]",
                    e.polarity
                )));
            }
            if !(0.0..=1.0).contains(&e.subjectivity) {
                return Err(Error::Input(format!(
                    "lexicon entry `{word}`: subjectivity {} outside [0, 1]",
                    e.subjectivity
                )));
            }
            if !(e.intensity > 0.0 && e.intensity.is_finite()) {
                return Err(Error::Input(format!(
                    "lexicon entry `{word}`: intensity must be positive"
                )));
            }
            if negators.contains(word) {
                return Err(Error::Input(format!("`{word}` is both a negator and a lexicon entry")));
            }
        }
        Ok(Self { entries, negators })
    }

    /// The lexicon shipped with the crate.
    pub fn bundled() -> Self {
        Self::parse(DEFAULT_LEXICON, "<bundled lexicon>").expect("bundled lexicon is valid")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses the TSV format: `word<TAB>polarity<TAB>subjectivity[<TAB>intensity]`,
    /// `#` comments and `!word` negator declarations.
    pub fn parse(text: &str, name: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut negators = BTreeSet::new();
        for (idx, line) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(neg) = line.strip_prefix('!') {
                let neg = neg.trim().to_lowercase();
                if neg.is_empty() {
                    return Err(Error::record(name, lineno, "empty negator"));
                }
                negators.insert(neg);
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(Error::record(
                    name,
                    lineno,
                    format!("expected 3 or 4 tab-separated fields, got {}", fields.len()),
                ));
            }
            let num = |i: usize, what: &str| -> Result<f64> {
                fields[i]
                    .trim()
                    .parse::<f64>()
                    .map_err(|_| Error::record(name, lineno, format!("bad {what} `{}`", fields[i])))
            };
            let word = fields[0].trim().to_lowercase();
            if word.is_empty() {
                return Err(Error::record(name, lineno, "empty word"));
            }
            let entry = LexiconEntry {
                polarity: num(1, "polarity")?,
                subjectivity: num(2, "subjectivity")?,
                intensity: if fields.len() == 4 { num(3, "intensity")? } else { 1.0 },
            };
            if entries.insert(word.clone(), entry).is_some() {
                return Err(Error::record(name, lineno, format!("duplicate entry `{word}`")));
            }
        }
        Self::new(entries, negators).map_err(|e| Error::Input(format!("{name}: {e}")))
    }

    pub fn get(&self, word: &str) -> Option<&LexiconEntry> {
        self.entries.get(word)
    }

    pub fn is_negator(&self, word: &str) -> bool {
        self.negators.contains(word)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &LexiconEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Copy with every polarity negated.
    pub fn mirrored(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(k, e)| {
                (
                    k.clone(),
                    LexiconEntry {
                        polarity: -e.polarity,
                        ..*e
                    },
                )
            })
            .collect();
        Self {
            entries,
            negators: self.negators.clone(),
        }
    }
}

/// Scores lowercase tokens, returning `(polarity, subjectivity)`.
///
/// Every token found in the lexicon contributes its scores. A negator among
/// the three preceding tokens multiplies the polarity by -0.5; a preceding
/// lexicon word with intensity other than 1 multiplies it by that intensity
/// (clamped to [-1, 1]). The result is the mean over matches, or (0, 0).
pub fn score_sentence<S: AsRef<str>>(tokens: &[S], lexicon: &SentimentLexicon) -> (f64, f64) {
    let mut pol_sum = 0.0;
    let mut subj_sum = 0.0;
    let mut matched = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        let Some(entry) = lexicon.get(tok.as_ref()) else {
            continue;
        };
        let mut p = entry.polarity;
        let window = &tokens[i.saturating_sub(NEGATION_WINDOW)..i];
        if window.iter().any(|t| lexicon.is_negator(t.as_ref())) {
            p *= NEGATION_FACTOR;
        }
        if let Some(prev) = i.checked_sub(1).and_then(|j| lexicon.get(tokens[j].as_ref())) {
            if prev.intensity != 1.0 {
                p = (p * prev.intensity).clamp(-1.0, 1.0);
            }
        }
        pol_sum += p;
        subj_sum += entry.subjectivity;
        matched += 1;
    }
    if matched == 0 {
        return (0.0, 0.0);
    }
    let n = matched as f64;
    ((pol_sum / n).clamp(-1.0, 1.0), (subj_sum / n).clamp(0.0, 1.0))
}
