//! Shared text helpers: word tokenization with character offsets, surface
//! normalization and the bundled stopword list.

use std::collections::HashSet;
use std::sync::OnceLock;

const STOPWORDS: &str = include_str!("../data/stopwords.txt");

fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Case-insensitive membership in the bundled English stopword list.
pub fn is_stopword(word: &str) -> bool {
    let set = stopwords();
    if set.contains(word) {
        return true;
    }
    set.contains(word.to_lowercase().as_str())
}

/// A word token; `start`/`end` are character (not byte) offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordToken {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

fn is_joiner(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}' | '-' | '.' | '&')
}

/// Splits text into word tokens. A token is a run of alphanumerics that may
/// contain single joiner characters (apostrophe, hyphen, period, ampersand)
/// between alphanumerics. Dotted acronyms keep their final period ("U.S.").
pub fn word_tokens(text: &str) -> Vec<WordToken> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if !chars[i].is_alphanumeric() {
            i += 1;
            continue;
        }
        let start = i;
        let mut dotted = false;
        i += 1;
        loop {
            if i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            } else if i + 1 < chars.len() && is_joiner(chars[i]) && chars[i + 1].is_alphanumeric() {
                dotted |= chars[i] == '.';
                i += 2;
            } else {
                break;
            }
        }
        if dotted && i < chars.len() && chars[i] == '.' {
            i += 1;
        }
        out.push(WordToken {
            text: chars[start..i].iter().collect(),
            start,
            end: i,
        });
    }
    out
}

/// Lowercased word tokens, the input expected by the sentiment scorer.
pub fn lower_tokens(text: &str) -> Vec<String> {
    word_tokens(text).into_iter().map(|t| t.text.to_lowercase()).collect()
}

/// Lowercases, deletes punctuation and collapses whitespace.
pub fn normalize(surface: &str) -> String {
    let mut out = String::with_capacity(surface.len());
    let mut pending_space = false;
    for c in surface.chars() {
        if c.is_whitespace() {
            pending_space = !out.is_empty();
        } else if c.is_alphanumeric() {
            if pending_space {
                out.push(' ');
                pending_space = false;
            }
            out.extend(c.to_lowercase());
        }
    }
    out
}

/// True when `needle`'s tokens occur as a contiguous run of `haystack`'s
/// tokens. Both are expected to be normalized (single-space separated).
pub fn contains_tokens(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let hay: Vec<&str> = haystack.split(' ').collect();
    let pat: Vec<&str> = needle.split(' ').collect();
    pat.len() <= hay.len() && hay.windows(pat.len()).any(|w| w == pat.as_slice())
}

/// Substring of `text` between two character offsets.
pub fn char_slice(text: &str, start: usize, end: usize) -> &str {
    let mut idx = text.char_indices().map(|(b, _)| b).chain(std::iter::once(text.len()));
    let b_start = idx.nth(start).unwrap_or(text.len());
    let b_end = if end > start {
        idx.nth(end - start - 1).unwrap_or(text.len())
    } else {
        b_start
    };
    &text[b_start..b_end]
}
