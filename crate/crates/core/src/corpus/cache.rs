//! Versioned on-disk form of [`DfStats`].
//!
//! The file records the tokenizer configuration and a SHA-256 fingerprint of
//! it, so a table built with stemming cannot be used to score unstemmed
//! sentences (and vice versa).

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::DfStats;
use crate::textnorm::{NGram, MAX_ORDER};
use crate::{Error, Result};

pub const DF_FORMAT_TAG: &str = "cider-eval/df-stats";
pub const DF_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct TokenizerInfo {
    lowercase: bool,
    split: String,
    stemmer: String,
    fingerprint: String,
}

impl TokenizerInfo {
    fn current(stem: bool) -> Self {
        Self {
            lowercase: true,
            split: "non-alphanumeric".to_string(),
            stemmer: stemmer_name(stem).to_string(),
            fingerprint: tokenizer_fingerprint(stem),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct DfFile {
    format: String,
    version: u32,
    tokenizer: TokenizerInfo,
    image_count: usize,
    /// One table per order, as `[ngram, df]` rows sorted by n-gram.
    df: Vec<Vec<(NGram, usize)>>,
}

fn stemmer_name(stem: bool) -> &'static str {
    if stem {
        "porter"
    } else {
        "none"
    }
}

/// Hex SHA-256 of the normalization settings.
pub fn tokenizer_fingerprint(stem: bool) -> String {
    let descriptor = format!(
        "lowercase=true;split=non-alphanumeric;stemmer={};numerals=verbatim",
        stemmer_name(stem)
    );
    hex::encode(Sha256::digest(descriptor.as_bytes()))
}

impl DfStats {
    pub fn to_json(&self) -> String {
        let file = DfFile {
            format: DF_FORMAT_TAG.to_string(),
            version: DF_FORMAT_VERSION,
            tokenizer: TokenizerInfo::current(self.stemmed),
            image_count: self.image_count,
            df: self
                .df
                .iter()
                .map(|t| t.iter().map(|(g, &c)| (g.clone(), c)).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("df tables serialize")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Loads a cached table, checking format, version and that it was built
    /// with the `expect_stem` tokenizer setting.
    pub fn load(path: impl AsRef<Path>, expect_stem: bool) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, expect_stem).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse {
                path: path.to_path_buf(),
                message,
            },
            other => other,
        })
    }

    pub fn from_json(text: &str, expect_stem: bool) -> Result<Self> {
        let file: DfFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: "<df-stats>".into(),
            message: e.to_string(),
        })?;
        if file.format != DF_FORMAT_TAG {
            return Err(Error::CacheMismatch(format!(
                "format tag `{}`, expected `{DF_FORMAT_TAG}`",
                file.format
            )));
        }
        if file.version != DF_FORMAT_VERSION {
            return Err(Error::CacheMismatch(format!(
                "version {}, expected {DF_FORMAT_VERSION}",
                file.version
            )));
        }
        let stem = match file.tokenizer.stemmer.as_str() {
            "porter" => true,
            "none" => false,
            other => {
                return Err(Error::CacheMismatch(format!("unknown stemmer `{other}`")));
            }
        };
        if file.tokenizer.fingerprint != tokenizer_fingerprint(stem) {
            return Err(Error::CacheMismatch(
                "tokenizer fingerprint does not match this build".into(),
            ));
        }
        if stem != expect_stem {
            return Err(Error::CacheMismatch(format!(
                "table built with stemmer `{}`, metric needs `{}`",
                stemmer_name(stem),
                stemmer_name(expect_stem)
            )));
        }
        if file.image_count == 0 || file.df.is_empty() || file.df.len() > MAX_ORDER {
            return Err(Error::CacheMismatch("empty or oversized df tables".into()));
        }
        let mut tables = Vec::with_capacity(file.df.len());
        for (i, rows) in file.df.into_iter().enumerate() {
            let n = i + 1;
            let mut table = BTreeMap::new();
            for (gram, df) in rows {
                if gram.len() != n || df == 0 || df > file.image_count {
                    return Err(Error::CacheMismatch(format!(
                        "invalid order-{n} row {gram:?} with df {df}"
                    )));
                }
                table.insert(gram, df);
            }
            tables.push(table);
        }
        Ok(DfStats::from_parts(file.image_count, stem, tables))
    }
}
