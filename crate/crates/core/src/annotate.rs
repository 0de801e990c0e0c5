//! Per-sentence annotations: entity mentions, relation argument pairs and
//! sentence sentiment.
//!
//! Annotations come either from the built-in recognizer (capitalization
//! heuristics plus the lexicon scorer) or from an external annotator writing
//! the JSON-lines interchange format read by [`read_annotation_file`].

use std::collections::{BTreeSet, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::sentiment::{score_sentence, SentimentLexicon};
use crate::text::{self, is_stopword, WordToken};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Origin {
    #[serde(rename = "NER")]
    Ner,
    #[serde(rename = "OIE_ARG")]
    OieArg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntityMention {
    pub surface: String,
    pub normalized: String,
    /// Character offsets within the sentence.
    pub start: usize,
    pub end: usize,
    pub origin: Origin,
}

impl EntityMention {
    pub fn new(surface: &str, start: usize, end: usize, origin: Origin) -> Self {
        Self {
            surface: surface.to_string(),
            normalized: text::normalize(surface),
            start,
            end,
            origin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationMention {
    pub arg0: String,
    pub arg1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<usize>,
}

impl RelationMention {
    pub fn new(arg0: &str, arg1: &str) -> Self {
        Self {
            arg0: arg0.to_string(),
            arg1: arg1.to_string(),
            start: None,
            end: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceAnnotation {
    pub article_id: String,
    pub sentence_index: usize,
    pub entities: Vec<EntityMention>,
    pub relations: Vec<RelationMention>,
    pub polarity: f64,
    pub subjectivity: f64,
    /// False when no relation extractor ran over the sentence, as with the
    /// built-in annotator. Carried in the file header, not per line.
    pub relations_extracted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum AdmissionMode {
    /// NER entities that also occur inside a relation argument.
    #[default]
    Intersection,
    /// All NER entities plus relation-argument mentions.
    Union,
}

/// Normalized entity strings that may become vertices.
///
/// In intersection mode an NER entity is kept when its tokens occur as a
/// contiguous run inside some relation's ARG0 or ARG1 in the same sentence.
/// Sentences that never went through relation extraction fall back to all
/// NER entities.
pub fn admissible_entities(ann: &SentenceAnnotation, mode: AdmissionMode) -> BTreeSet<String> {
    let ner = ann
        .entities
        .iter()
        .filter(|e| e.origin == Origin::Ner && !e.normalized.is_empty())
        .map(|e| e.normalized.clone());
    match mode {
        AdmissionMode::Union => ann
            .entities
            .iter()
            .filter(|e| !e.normalized.is_empty())
            .map(|e| e.normalized.clone())
            .collect(),
        AdmissionMode::Intersection if !ann.relations_extracted => ner.collect(),
        AdmissionMode::Intersection => {
            let args: Vec<String> = ann
                .relations
                .iter()
                .flat_map(|r| [text::normalize(&r.arg0), text::normalize(&r.arg1)])
                .collect();
            ner.filter(|e| args.iter().any(|a| text::contains_tokens(a, e)))
                .collect()
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in recognizer

fn strip_possessive(tok: &WordToken) -> (usize, bool) {
    for suffix in ["'s", "\u{2019}s"] {
        if tok.text.len() > suffix.len() && tok.text.ends_with(suffix) {
            return (tok.end - 2, true);
        }
    }
    (tok.end, false)
}

const CALENDAR: [&str; 19] = [
    "monday",
    "tuesday",
    "wednesday",
    "thursday",
    "friday",
    "saturday",
    "sunday",
    "january",
    "february",
    "march",
    "april",
    "june",
    "july",
    "august",
    "september",
    "october",
    "november",
    "december",
    "sept",
];

fn is_connector(tok: &WordToken) -> bool {
    tok.text == "of" || tok.text == "the"
}

/// Capitalized-run entity recognizer over one sentence.
pub fn recognize_entities(sentence: &str) -> Vec<EntityMention> {
    let toks = text::word_tokens(sentence);
    let chars: Vec<char> = sentence.chars().collect();
    let info: Vec<(usize, bool)> = toks.iter().map(strip_possessive).collect();
    let capitalized: Vec<bool> = toks
        .iter()
        .zip(&info)
        .map(|(t, &(end, _))| {
            let core: String = chars[t.start..end].iter().collect();
            core.chars().next().is_some_and(char::is_uppercase) && !is_stopword(&core)
        })
        .collect();
    // whitespace-only gap between token i and i + 1
    let joined = |i: usize| -> bool {
        i + 1 < toks.len() && !info[i].1 && chars[toks[i].end..toks[i + 1].start].iter().all(|c| c.is_whitespace())
    };

    let mut out = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        if !capitalized[i] {
            i += 1;
            continue;
        }
        let mut j = i;
        loop {
            if joined(j) && capitalized[j + 1] {
                j += 1;
                continue;
            }
            // bridge up to two connector words: "Bank of England", "Prince of the Netherlands"
            let mut k = j + 1;
            while k < toks.len() && k - j <= 2 && joined(k - 1) && is_connector(&toks[k]) {
                k += 1;
            }
            if k > j + 1 && k < toks.len() && joined(k - 1) && capitalized[k] {
                j = k;
                continue;
            }
            break;
        }
        let single_initial = i == 0 && j == 0 && toks.get(1).is_some_and(|t| is_stopword(&t.text));
        let calendar = i == j && CALENDAR.contains(&toks[i].text.to_lowercase().as_str());
        if !single_initial && !calendar {
            let (start, end) = (toks[i].start, info[j].0);
            let surface: String = chars[start..end].iter().collect();
            out.push(EntityMention::new(&surface, start, end, Origin::Ner));
        }
        i = j + 1;
    }
    out
}

/// Annotates one sentence with the built-in recognizer and scorer.
pub fn annotate_sentence(
    article_id: &str,
    sentence_index: usize,
    sentence: &str,
    lexicon: &SentimentLexicon,
) -> SentenceAnnotation {
    let (polarity, subjectivity) = score_sentence(&text::lower_tokens(sentence), lexicon);
    SentenceAnnotation {
        article_id: article_id.to_string(),
        sentence_index,
        entities: recognize_entities(sentence),
        relations: Vec::new(),
        polarity,
        subjectivity,
        relations_extracted: false,
    }
}

/// Annotates every sentence of the corpus, in (article, sentence) order.
/// Articles are processed in parallel on the current rayon pool.
pub fn annotate_builtin(corpus: &Corpus, lexicon: &SentimentLexicon, include_title: bool) -> Vec<SentenceAnnotation> {
    corpus
        .articles
        .par_iter()
        .map(|article| {
            Corpus::article_sentences(article, include_title)
                .iter()
                .enumerate()
                .map(|(idx, s)| annotate_sentence(&article.id, idx, s, lexicon))
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

// ---------------------------------------------------------------------------
// Interchange format

/// Header metadata written as the first, `#`-prefixed line of an annotation
/// file. Unknown keys from external annotators are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnotationMeta {
    pub annotator: String,
    #[serde(default = "default_true")]
    pub relation_extraction: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub include_title: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tool_version: Option<String>,
}

fn default_true() -> bool {
    true
}

impl Default for AnnotationMeta {
    fn default() -> Self {
        Self {
            annotator: "external".into(),
            relation_extraction: true,
            source: None,
            include_title: None,
            tool_version: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotationFile {
    pub meta: AnnotationMeta,
    pub annotations: Vec<SentenceAnnotation>,
}

#[derive(Serialize, Deserialize)]
struct EntityRecord {
    surface: String,
    start: usize,
    end: usize,
    origin: Origin,
}

#[derive(Serialize, Deserialize)]
struct AnnotationRecord {
    article_id: String,
    sentence_index: usize,
    entities: Vec<EntityRecord>,
    relations: Vec<RelationMention>,
    polarity: f64,
    subjectivity: f64,
}

pub fn write_annotations<W: Write>(file: &AnnotationFile, mut out: W) -> std::io::Result<()> {
    out.write_all(b"# ")?;
    serde_json::to_writer(&mut out, &file.meta)?;
    out.write_all(b"\n")?;
    for a in &file.annotations {
        let rec = AnnotationRecord {
            article_id: a.article_id.clone(),
            sentence_index: a.sentence_index,
            entities: a
                .entities
                .iter()
                .map(|e| EntityRecord {
                    surface: e.surface.clone(),
                    start: e.start,
                    end: e.end,
                    origin: e.origin,
                })
                .collect(),
            relations: a.relations.clone(),
            polarity: a.polarity,
            subjectivity: a.subjectivity,
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads and validates an annotation file. Ranges, spans and per-article
/// sentence-index uniqueness are checked; article ids are not.
pub fn read_annotations<R: BufRead>(reader: R, name: &str) -> Result<AnnotationFile> {
    let mut meta: Option<AnnotationMeta> = None;
    let mut annotations = Vec::new();
    let mut seen: HashSet<(String, usize)> = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::record(name, lineno, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if meta.is_none() && annotations.is_empty() {
                if let Ok(m) = serde_json::from_str::<AnnotationMeta>(comment.trim()) {
                    meta = Some(m);
                }
            }
            continue;
        }
        let rec: AnnotationRecord = serde_json::from_str(trimmed)
            .map_err(|e| Error::record(name, lineno, format!("malformed annotation: {e}")))?;
        if rec.article_id.is_empty() {
            return Err(Error::record(name, lineno, "empty `article_id`"));
        }
        if !(rec.polarity.is_finite() && (-1.0..=1.0).contains(&rec.polarity)) {
            return Err(Error::record(
                name,
                lineno,
                format!("`polarity` {} outside [-1, 1]", rec.polarity),
            ));
        }
        if !(rec.subjectivity.is_finite() && (0.0..=1.0).contains(&rec.subjectivity)) {
            return Err(Error::record(
                name,
                lineno,
                format!("`subjectivity` {} outside [0, 1]", rec.subjectivity),
            ));
        }
        let mut entities = Vec::with_capacity(rec.entities.len());
        for e in rec.entities {
            if e.start >= e.end {
                return Err(Error::record(
                    name,
                    lineno,
                    format!("entity `{}` has empty span {}..{}", e.surface, e.start, e.end),
                ));
            }
            let m = EntityMention::new(&e.surface, e.start, e.end, e.origin);
            if m.normalized.is_empty() {
                return Err(Error::record(
                    name,
                    lineno,
                    format!("entity `{}` normalizes to nothing", e.surface),
                ));
            }
            entities.push(m);
        }
        for r in &rec.relations {
            if r.arg0.trim().is_empty() || r.arg1.trim().is_empty() {
                return Err(Error::record(name, lineno, "relation with an empty argument"));
            }
        }
        if !seen.insert((rec.article_id.clone(), rec.sentence_index)) {
            return Err(Error::record(
                name,
                lineno,
                format!(
                    "duplicate sentence_index {} for article `{}`",
                    rec.sentence_index, rec.article_id
                ),
            ));
        }
        annotations.push(SentenceAnnotation {
            article_id: rec.article_id,
            sentence_index: rec.sentence_index,
            entities,
            relations: rec.relations,
            polarity: rec.polarity,
            subjectivity: rec.subjectivity,
            relations_extracted: true,
        });
    }

    let meta = meta.unwrap_or_default();
    for a in &mut annotations {
        a.relations_extracted = meta.relation_extraction;
    }
    Ok(AnnotationFile { meta, annotations })
}

pub fn read_annotation_file(path: &Path) -> Result<AnnotationFile> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_annotations(BufReader::new(file), &path.display().to_string())
}

/// Checks annotation article ids against a corpus and sorts the annotations
/// into corpus (article, sentence) order.
pub fn resolve_against(file: &mut AnnotationFile, corpus: &Corpus, name: &str) -> Result<()> {
    let index = corpus.index();
    for a in &file.annotations {
        if !index.contains_key(a.article_id.as_str()) {
            return Err(Error::Input(format!(
                "{name}: article_id `{}` (sentence {}) is not in corpus `{}`",
                a.article_id, a.sentence_index, corpus.source_label
            )));
        }
    }
    file.annotations
        .sort_by_key(|a| (index[a.article_id.as_str()], a.sentence_index));
    Ok(())
}

/// Reads an external annotation file and validates it against `corpus`.
pub fn import_annotations(path: &Path, corpus: &Corpus) -> Result<Vec<SentenceAnnotation>> {
    let mut file = read_annotation_file(path)?;
    resolve_against(&mut file, corpus, &path.display().to_string())?;
    Ok(file.annotations)
}
