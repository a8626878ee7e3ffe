//! Consensus-based image description evaluation.
//!
//! The crate scores candidate sentences against per-image reference sets with
//! CIDEr and CIDEr-D (TF-IDF weighted n-gram cosine consensus), provides
//! sentence-level BLEU, ROUGE_N/L/S and a METEOR-style scorer for comparison,
//! and ships a harness that measures how often a metric agrees with human
//! pairwise consensus judgments.
//!
//! Metric math is generic over the floating point type ([`Scalar`]); the
//! harness and CLI run in `f64`. Concrete aliases for the common case live at
//! the crate root.
//!
//! ```
//! use cider_eval::{tokenize, cider, CiderConfig64, DfStats, RefCorpus};
//!
//! let corpus = RefCorpus::from_entries(
//!     vec![
//!         ("img1".to_string(), vec!["a cat sits".to_string(), "a cat sleeps".to_string()]),
//!         ("img2".to_string(), vec!["a dog runs".to_string()]),
//!     ],
//!     false,
//! )
//! .unwrap();
//! let stats = DfStats::build(&corpus).unwrap();
//! let candidate = tokenize("A cat sits.");
//! let score: f64 = cider(&candidate, corpus.references("img1").unwrap(), &stats, &CiderConfig64::default());
//! assert!((score - 0.5).abs() < 1e-12);
//! ```

pub mod baselines;
pub mod cider;
pub mod cli;
pub mod corpus;
mod error;
pub mod harness;
pub mod metric;
mod scalar;
pub mod textnorm;

pub use baselines::{
    bleu, bleu_precision, brevity_penalty, lcs_length, meteor, rouge_l, rouge_n, rouge_s,
    skip_bigrams, BleuConfig, MeteorConfig,
};
pub use cider::{
    cider, cider_d, cider_d_n, cider_n, tfidf_vector, CiderConfig, CiderVariant, WeightedVector,
};
pub use corpus::{DfStats, IdfSource, RefCorpus, ScaledIdf, UniformIdf};
pub use error::{Error, Result};
pub use metric::{Metric, MetricSpec};
pub use scalar::Scalar;
pub use textnorm::{ngrams, stem, tokenize, tokenize_with, NGram, NGramCounts, TokenSequence};

pub type CiderConfig64 = CiderConfig<f64>;
pub type CiderConfig32 = CiderConfig<f32>;
pub type WeightedVector64 = WeightedVector<f64>;
pub type WeightedVector32 = WeightedVector<f32>;
pub type BleuConfig64 = BleuConfig<f64>;
pub type MeteorConfig64 = MeteorConfig<f64>;
