//! Article collections and their line-delimited JSON interchange format.
//!
//! Each non-empty line holds one article object with keys `id`, `source`,
//! `date` (optional), `title` and `body`. Lines starting with `#` are
//! comments; a comment holding a JSON object with a `source` key names the
//! corpus label, which lets an empty file still carry one.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::OnceLock;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Article {
    pub id: String,
    pub source_label: String,
    pub published_date: Option<NaiveDate>,
    pub title: String,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub source_label: String,
    pub articles: Vec<Article>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    /// Position of each article id, used to order annotations.
    pub fn index(&self) -> BTreeMap<&str, usize> {
        self.articles
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.as_str(), i))
            .collect()
    }

    /// The sentences fed to annotation: the title (when requested and
    /// non-empty) as sentence 0, then the body sentences.
    pub fn article_sentences(article: &Article, include_title: bool) -> Vec<String> {
        let mut out = Vec::new();
        if include_title {
            let title = article.title.split_whitespace().collect::<Vec<_>>().join(" ");
            if !title.is_empty() {
                out.push(title);
            }
        }
        out.extend(split_sentences(&article.body).into_iter().map(|s| s.text));
        out
    }
}

#[derive(Debug, Deserialize)]
struct RawArticle {
    id: Option<String>,
    source: Option<String>,
    date: Option<String>,
    title: Option<String>,
    body: Option<String>,
}

#[derive(Serialize)]
struct ArticleRecord<'a> {
    id: &'a str,
    source: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    date: Option<String>,
    title: &'a str,
    body: &'a str,
}

/// Parses `YYYY-MM-DD`, `YYYY-MM` (day defaults to 1) or a date-time whose
/// first ten characters are a date.
pub fn parse_date(raw: &str) -> Option<NaiveDate> {
    let raw = raw.trim();
    if let Ok(d) = NaiveDate::parse_from_str(raw, "%Y-%m-%d") {
        return Some(d);
    }
    if let Ok(d) = NaiveDate::parse_from_str(&format!("{raw}-01"), "%Y-%m-%d") {
        return Some(d);
    }
    raw.get(..10)
        .filter(|_| raw.len() > 10 && matches!(raw.as_bytes()[10], b'T' | b' '))
        .and_then(|d| NaiveDate::parse_from_str(d, "%Y-%m-%d").ok())
}

fn header_source(line: &str) -> Option<String> {
    let body = line.trim_start_matches('#').trim();
    let value: serde_json::Value = serde_json::from_str(body).ok()?;
    value.get("source")?.as_str().map(str::to_string)
}

/// Loads an article file. `source_override` fills in records without a
/// `source` key and rejects records whose `source` disagrees.
pub fn load_corpus(path: &Path, source_override: Option<&str>) -> Result<Corpus> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_corpus(BufReader::new(file), &path.display().to_string(), source_override)
}

pub fn read_corpus<R: BufRead>(reader: R, name: &str, source_override: Option<&str>) -> Result<Corpus> {
    let mut label: Option<String> = source_override.map(str::to_string);
    let mut articles = Vec::new();
    let mut seen = HashSet::new();

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::record(name, lineno, e.to_string()))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            if let Some(src) = header_source(trimmed) {
                match &label {
                    Some(l) if *l != src && source_override.is_none() => {
                        return Err(Error::record(
                            name,
                            lineno,
                            format!("header source `{src}` conflicts with `{l}`"),
                        ));
                    }
                    None => label = Some(src),
                    _ => {}
                }
            }
            continue;
        }

        let raw: RawArticle =
            serde_json::from_str(trimmed).map_err(|e| Error::record(name, lineno, format!("malformed record: {e}")))?;
        let missing = |field: &str| Error::record(name, lineno, format!("record is missing `{field}`"));

        let id = raw.id.ok_or_else(|| missing("id"))?;
        if id.trim().is_empty() {
            return Err(Error::record(name, lineno, "empty `id`"));
        }
        let body = raw.body.ok_or_else(|| missing("body"))?;
        if body.split_whitespace().next().is_none() {
            return Err(Error::record(name, lineno, format!("article `{id}` has an empty body")));
        }
        let source = match (raw.source, source_override) {
            (Some(s), Some(o)) if s != o => {
                return Err(Error::record(
                    name,
                    lineno,
                    format!("article `{id}` has source `{s}`, expected `{o}`"),
                ));
            }
            (Some(s), _) => s,
            (None, Some(o)) => o.to_string(),
            (None, None) => match &label {
                Some(l) => l.clone(),
                None => return Err(missing("source")),
            },
        };
        match &label {
            Some(l) if *l != source => {
                return Err(Error::record(
                    name,
                    lineno,
                    format!("mixed source labels: `{source}` after `{l}`"),
                ));
            }
            Some(_) => {}
            None => label = Some(source.clone()),
        }
        let published_date = match raw.date.as_deref().map(str::trim) {
            None | Some("") => None,
            Some(d) => {
                Some(parse_date(d).ok_or_else(|| Error::record(name, lineno, format!("unparseable date `{d}`")))?)
            }
        };
        if !seen.insert(id.clone()) {
            return Err(Error::record(name, lineno, format!("duplicate article id `{id}`")));
        }
        articles.push(Article {
            id,
            source_label: source,
            published_date,
            title: raw.title.unwrap_or_default(),
            body,
        });
    }

    Ok(Corpus {
        source_label: label.unwrap_or_default(),
        articles,
    })
}

/// Writes the corpus in the interchange format, header first.
pub fn write_corpus<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# {}", serde_json::json!({ "source": corpus.source_label }))?;
    for a in &corpus.articles {
        let rec = ArticleRecord {
            id: &a.id,
            source: &a.source_label,
            date: a.published_date.map(|d| d.format("%Y-%m-%d").to_string()),
            title: &a.title,
            body: &a.body,
        };
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// A sentence and its character span within the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

const ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

fn abbreviations() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        ABBREVIATIONS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

fn is_closer(c: char) -> bool {
    matches!(c, '"' | '\'' | ')' | ']' | '\u{201d}' | '\u{2019}')
}

/// Rule-based sentence splitter.
///
/// A boundary follows `.`, `!` or `?` (plus any closing quotes/brackets) when
/// the next non-whitespace character is uppercase, unless the word carrying
/// the period is a known abbreviation. Sentences are trimmed, so the spans
/// cover every non-whitespace character and nothing else separates them.
pub fn split_sentences(body: &str) -> Vec<Sentence> {
    let chars: Vec<char> = body.chars().collect();
    let abbrev = abbreviations();
    let mut bounds = Vec::new();
    let mut seg_start = 0;

    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if matches!(c, '.' | '!' | '?') {
            let mut end = i + 1;
            while end < chars.len() && (is_closer(chars[end]) || matches!(chars[end], '.' | '!' | '?')) {
                end += 1;
            }
            let mut next = end;
            while next < chars.len() && chars[next].is_whitespace() {
                next += 1;
            }
            let splits = next > end && next < chars.len() && chars[next].is_uppercase();
            let abbreviated = c == '.' && {
                let mut w = i;
                while w > 0 && !chars[w - 1].is_whitespace() {
                    w -= 1;
                }
                let word: String = chars[w..=i].iter().collect();
                let word = word.trim_start_matches(|ch: char| !ch.is_alphanumeric());
                abbrev.contains(word)
            };
            if splits && !abbreviated {
                bounds.push((seg_start, end));
                seg_start = next;
                i = next;
                continue;
            }
            i = end;
            continue;
        }
        i += 1;
    }
    bounds.push((seg_start, chars.len()));

    bounds
        .into_iter()
        .filter_map(|(s, e)| {
            let mut s = s;
            let mut e = e;
            while s < e && chars[s].is_whitespace() {
                s += 1;
            }
            while e > s && chars[e - 1].is_whitespace() {
                e -= 1;
            }
            (s < e).then(|| Sentence {
                text: chars[s..e].iter().collect(),
                start: s,
                end: e,
            })
        })
        .collect()
}
