use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A token with its character span in the source text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    /// Lowercased, apostrophes normalized to `'`.
    pub text: String,
    pub surface: String,
    pub start: usize,
    pub end: usize,
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '\u{2019}')
}

/// Canonical tokenizer: alphanumeric runs (with word-internal apostrophes, so
/// `i'm` and `don't` stay whole) and one token per punctuation character.
pub fn tokenize_with_offsets(text: &str) -> Vec<Token> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_alphanumeric() {
            let start = i;
            let mut j = i + 1;
            while j < chars.len() {
                if chars[j].is_alphanumeric() {
                    j += 1;
                } else if is_apostrophe(chars[j])
                    && j + 1 < chars.len()
                    && chars[j + 1].is_alphanumeric()
                {
                    j += 2;
                } else {
                    break;
                }
            }
            let surface: String = chars[start..j].iter().collect();
            let text = surface
                .chars()
                .map(|c| if is_apostrophe(c) { '\'' } else { c })
                .flat_map(char::to_lowercase)
                .collect();
            tokens.push(Token {
                text,
                surface,
                start,
                end: j,
            });
            i = j;
        } else {
            let surface = c.to_string();
            let text = if is_apostrophe(c) {
                "'".to_string()
            } else {
                c.to_lowercase().collect()
            };
            tokens.push(Token {
                text,
                surface,
                start: i,
                end: i + 1,
            });
            i += 1;
        }
    }
    tokens
}

pub fn tokenize(text: &str) -> Vec<String> {
    tokenize_with_offsets(text)
        .into_iter()
        .map(|t| t.text)
        .collect()
}

/// One to three normalized tokens.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ngram(Vec<String>);

impl Ngram {
    pub const MAX_LEN: usize = 3;

    pub fn new(tokens: Vec<String>) -> Result<Self> {
        if tokens.is_empty() || tokens.len() > Self::MAX_LEN || tokens.iter().any(|t| t.is_empty())
        {
            return Err(Error::InvalidConfig(format!(
                "n-gram must hold 1-3 tokens, got {tokens:?}"
            )));
        }
        Ok(Ngram(tokens))
    }

    pub(crate) fn from_slice(tokens: &[String]) -> Self {
        debug_assert!((1..=Self::MAX_LEN).contains(&tokens.len()));
        Ngram(tokens.to_vec())
    }

    /// Parses free text with the canonical tokenizer.
    pub fn parse_text(text: &str) -> Result<Self> {
        Ngram::new(tokenize(text))
    }

    pub fn tokens(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Start positions of every contiguous occurrence in `tokens`.
    pub fn positions_in(&self, tokens: &[String]) -> Vec<usize> {
        if tokens.len() < self.0.len() {
            return Vec::new();
        }
        tokens
            .windows(self.0.len())
            .enumerate()
            .filter(|(_, w)| *w == self.0.as_slice())
            .map(|(i, _)| i)
            .collect()
    }
}

impl fmt::Display for Ngram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join(" "))
    }
}

impl FromStr for Ngram {
    type Err = Error;

    /// Tokens separated by single spaces, as written in indicator tables.
    fn from_str(s: &str) -> Result<Self> {
        Ngram::new(s.split_whitespace().map(str::to_string).collect())
    }
}

impl Serialize for Ngram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ngram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All contiguous n-grams for n = 1..=n_max, shortest first.
pub fn extract_ngrams(tokens: &[String], n_max: usize) -> Vec<Ngram> {
    let n_max = n_max.min(Ngram::MAX_LEN);
    (1..=n_max)
        .flat_map(|n| tokens.windows(n).map(Ngram::from_slice))
        .collect()
}
