//! Sentence normalization: tokenization, stemming and n-gram counting.

mod porter;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAX_ORDER: usize = 4;

/// An ordered tuple of tokens.
pub type NGram = Vec<String>;

/// Normalized word tokens of one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TokenSequence {
    tokens: Vec<String>,
    stemmed: bool,
}

impl TokenSequence {
    /// Wraps tokens that are already normalized. Tokens are not re-checked.
    pub fn from_tokens<I, S>(tokens: I, stemmed: bool) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            tokens: tokens.into_iter().map(Into::into).collect(),
            stemmed,
        }
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn stemmed(&self) -> bool {
        self.stemmed
    }

    /// Sentence length in tokens.
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Applies the stemmer to every token. A no-op on already stemmed input.
    pub fn to_stemmed(&self) -> TokenSequence {
        if self.stemmed {
            return self.clone();
        }
        TokenSequence {
            tokens: self.tokens.iter().map(|t| stem(t)).collect(),
            stemmed: true,
        }
    }

    pub fn join(&self) -> String {
        self.tokens.join(" ")
    }
}

/// Lowercases, turns every non-alphanumeric character into a separator and
/// splits on whitespace.
pub fn tokenize(raw: &str) -> TokenSequence {
    tokenize_with(raw, false)
}

/// [`tokenize`] followed by Porter stemming when `stem` is set.
pub fn tokenize_with(raw: &str, stem_tokens: bool) -> TokenSequence {
    let lowered = raw.to_lowercase();
    let tokens = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| if stem_tokens { stem(t) } else { t.to_string() })
        .collect();
    TokenSequence {
        tokens,
        stemmed: stem_tokens,
    }
}

/// Porter stem of a lowercase token. Tokens containing digits or non-ASCII
/// letters are kept verbatim.
pub fn stem(token: &str) -> String {
    porter::porter_stem(token)
}

/// Multiset of the order-`n` n-grams of one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NGramCounts {
    order: usize,
    counts: BTreeMap<NGram, usize>,
}

impl NGramCounts {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn counts(&self) -> &BTreeMap<NGram, usize> {
        &self.counts
    }

    pub fn get(&self, gram: &[String]) -> usize {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    /// Total number of n-gram occurrences, `max(0, L - n + 1)`.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NGram, usize)> {
        self.counts.iter().map(|(g, &c)| (g, c))
    }
}

pub(crate) fn check_order(n: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(n))
    }
}

/// Counts every contiguous length-`n` window of `s`.
pub fn ngrams(s: &TokenSequence, n: usize) -> Result<NGramCounts> {
    check_order(n)?;
    Ok(count_windows(s.tokens(), n))
}

pub(crate) fn count_windows(tokens: &[String], n: usize) -> NGramCounts {
    let mut counts = BTreeMap::new();
    if n > 0 {
        for window in tokens.windows(n) {
            *counts.entry(window.to_vec()).or_insert(0) += 1;
        }
    }
    NGramCounts { order: n, counts }
}

/// Counts for orders `1..=max_order`; index 0 holds unigrams.
pub(crate) fn counts_up_to(s: &TokenSequence, max_order: usize) -> Vec<NGramCounts> {
    (1..=max_order)
        .map(|n| count_windows(s.tokens(), n))
        .collect()
}
