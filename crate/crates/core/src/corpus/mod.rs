//! Reference corpora and the document-frequency statistics behind the IDF
//! weights.

mod cache;
mod df;
mod io;

use std::borrow::Cow;
use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use cache::{tokenizer_fingerprint, DF_FORMAT_TAG, DF_FORMAT_VERSION};
pub use df::{DfStats, IdfSource, ScaledIdf, UniformIdf};
pub use io::read_sentence_map;

use crate::textnorm::{counts_up_to, tokenize_with, NGramCounts, TokenSequence, MAX_ORDER};
use crate::{Error, Result};

/// References of one image with cached normalization.
#[derive(Debug, Clone)]
pub struct ImageRefs {
    raw: Vec<String>,
    tokens: Vec<TokenSequence>,
    counts: Vec<Vec<NGramCounts>>,
}

impl ImageRefs {
    fn new(raw: Vec<String>, stem: bool) -> Self {
        let tokens: Vec<_> = raw.iter().map(|s| tokenize_with(s, stem)).collect();
        let counts = tokens.iter().map(|t| counts_up_to(t, MAX_ORDER)).collect();
        Self {
            raw,
            tokens,
            counts,
        }
    }

    pub fn raw(&self) -> &[String] {
        &self.raw
    }

    pub fn tokens(&self) -> &[TokenSequence] {
        &self.tokens
    }

    /// N-gram counts of reference `index` at order `n` (1-based).
    pub fn counts(&self, index: usize, n: usize) -> &NGramCounts {
        &self.counts[index][n - 1]
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }
}

/// Image id to reference sentences. Every image has at least one reference.
#[derive(Debug, Clone)]
pub struct RefCorpus {
    images: BTreeMap<String, ImageRefs>,
    stemmed: bool,
}

impl RefCorpus {
    /// Builds a corpus from `(image id, references)` pairs, rejecting
    /// duplicate ids and images without references.
    pub fn from_entries(entries: Vec<(String, Vec<String>)>, stem: bool) -> Result<Self> {
        let mut images = BTreeMap::new();
        for (id, refs) in entries {
            if refs.is_empty() {
                return Err(Error::Validation(format!(
                    "image `{id}` has no reference sentences"
                )));
            }
            if images.contains_key(&id) {
                return Err(Error::Validation(format!("duplicate image id `{id}`")));
            }
            images.insert(id, ImageRefs::new(refs, stem));
        }
        Ok(Self {
            images,
            stemmed: stem,
        })
    }

    /// Loads a JSON object mapping image ids to arrays of sentences.
    pub fn load(path: impl AsRef<Path>, stem: bool) -> Result<Self> {
        let corpus = Self::from_entries(read_sentence_map(path.as_ref())?, stem)?;
        if corpus.len() < 2 {
            log::warn!(
                "reference corpus has {} image(s); every IDF weight is zero and CIDEr scores collapse to 0",
                corpus.len()
            );
        }
        Ok(corpus)
    }

    pub fn stemmed(&self) -> bool {
        self.stemmed
    }

    /// Number of images, `|I|`.
    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image_ids(&self) -> impl Iterator<Item = &str> {
        self.images.keys().map(String::as_str)
    }

    pub fn image(&self, id: &str) -> Option<&ImageRefs> {
        self.images.get(id)
    }

    pub fn references(&self, id: &str) -> Option<&[TokenSequence]> {
        self.images.get(id).map(|refs| refs.tokens())
    }

    pub fn images(&self) -> impl Iterator<Item = (&str, &ImageRefs)> {
        self.images.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// The same corpus normalized with the requested stemming setting.
    pub fn with_stemming(&self, stem: bool) -> Cow<'_, RefCorpus> {
        if stem == self.stemmed {
            Cow::Borrowed(self)
        } else {
            Cow::Owned(self.renormalized(stem))
        }
    }

    fn renormalized(&self, stem: bool) -> RefCorpus {
        let images = self
            .images
            .iter()
            .map(|(id, refs)| (id.clone(), ImageRefs::new(refs.raw.clone(), stem)))
            .collect();
        RefCorpus {
            images,
            stemmed: stem,
        }
    }

    /// Splits every image's references into two seeded random halves; the
    /// first half gets the extra sentence when the count is odd. Images with
    /// a single reference are rejected.
    pub fn random_split(&self, seed: u64) -> Result<(RefCorpus, RefCorpus)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut first = Vec::with_capacity(self.len());
        let mut second = Vec::with_capacity(self.len());
        for (id, refs) in &self.images {
            if refs.len() < 2 {
                return Err(Error::NotEnoughReferences {
                    image_id: id.clone(),
                    available: refs.len(),
                    requested: 2,
                });
            }
            let mut order: Vec<usize> = (0..refs.len()).collect();
            order.shuffle(&mut rng);
            let cut = refs.len().div_ceil(2);
            let (a, b) = order.split_at(cut);
            let mut a = a.to_vec();
            let mut b = b.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            first.push((id.clone(), a.iter().map(|&i| refs.raw[i].clone()).collect()));
            second.push((id.clone(), b.iter().map(|&i| refs.raw[i].clone()).collect()));
        }
        Ok((
            RefCorpus::from_entries(first, self.stemmed)?,
            RefCorpus::from_entries(second, self.stemmed)?,
        ))
    }
}
