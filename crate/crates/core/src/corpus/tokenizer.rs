use std::collections::BTreeSet;

use rust_stemmers::{Algorithm, Stemmer};
use serde::{Deserialize, Serialize};

/// A compact English stopword list (function words only).
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a",
    "about",
    "above",
    "after",
    "again",
    "against",
    "all",
    "am",
    "an",
    "and",
    "any",
    "are",
    "as",
    "at",
    "be",
    "because",
    "been",
    "before",
    "being",
    "below",
    "between",
    "both",
    "but",
    "by",
    "can",
    "could",
    "did",
    "do",
    "does",
    "doing",
    "down",
    "during",
    "each",
    "few",
    "for",
    "from",
    "further",
    "had",
    "has",
    "have",
    "having",
    "he",
    "her",
    "here",
    "hers",
    "herself",
    "him",
    "himself",
    "his",
    "how",
    "i",
    "if",
    "in",
    "into",
    "is",
    "it",
    "its",
    "itself",
    "just",
    "me",
    "more",
    "most",
    "my",
    "myself",
    "no",
    "nor",
    "not",
    "now",
    "of",
    "off",
    "on",
    "once",
    "only",
    "or",
    "other",
    "our",
    "ours",
    "ourselves",
    "out",
    "over",
    "own",
    "same",
    "she",
    "should",
    "so",
    "some",
    "such",
    "than",
    "that",
    "the",
    "their",
    "theirs",
    "them",
    "themselves",
    "then",
    "there",
    "these",
    "they",
    "this",
    "those",
    "through",
    "to",
    "too",
    "under",
    "until",
    "up",
    "very",
    "was",
    "we",
    "were",
    "what",
    "when",
    "where",
    "which",
    "while",
    "who",
    "whom",
    "why",
    "will",
    "with",
    "would",
    "you",
    "your",
    "yours",
    "yourself",
    "yourselves",
];

/// Preprocessing rules shared by documents and queries.
///
/// Text is split on every non-alphanumeric character. Tokens are optionally
/// lowercased, then dropped if they appear in `stopwords`, then optionally
/// stemmed with the Snowball English stemmer. Stopword matching happens on
/// the (possibly lowercased) surface form, before stemming.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenizerConfig {
    pub stopwords: BTreeSet<String>,
    pub stemming: bool,
    pub lowercase: bool,
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        Self {
            stopwords: DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect(),
            stemming: true,
            lowercase: true,
        }
    }
}

impl TokenizerConfig {
    /// No stopwords, no stemming, lowercasing on.
    pub fn plain() -> Self {
        Self {
            stopwords: BTreeSet::new(),
            stemming: false,
            lowercase: true,
        }
    }

    pub fn with_stopwords<I, S>(mut self, words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.stopwords = words.into_iter().map(Into::into).collect();
        self
    }

    pub fn with_stemming(mut self, on: bool) -> Self {
        self.stemming = on;
        self
    }

    pub fn with_lowercase(mut self, on: bool) -> Self {
        self.lowercase = on;
        self
    }
}

/// Tokenize `text` into an ordered list of normalized terms.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    let stemmer = config.stemming.then(|| Stemmer::create(Algorithm::English));
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|raw| !raw.is_empty())
        .filter_map(|raw| {
            let token = if config.lowercase {
                raw.to_lowercase()
            } else {
                raw.to_string()
            };
            if config.stopwords.contains(&token) {
                return None;
            }
            match &stemmer {
                Some(s) => Some(s.stem(&token).into_owned()),
                None => Some(token),
            }
        })
        .collect()
}
