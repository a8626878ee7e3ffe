use std::borrow::Cow;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::judgments::{PairJudgment, Winner};
use super::sampling::{pair_rng, subsample};
use crate::corpus::RefCorpus;
use crate::metric::Metric;
use crate::textnorm::{tokenize_with, TokenSequence};
use crate::{Error, Result};

/// Bucket for pairs that carry no kind label.
pub const UNLABELED: &str = "unlabeled";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KindAccuracy {
    pub pairs: usize,
    /// Agreements, with ties counted as one half.
    pub agreed: f64,
    pub accuracy: f64,
    pub ties: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyReport {
    pub metric: String,
    pub overall: f64,
    pub per_kind: BTreeMap<String, KindAccuracy>,
    pub tie_count: usize,
    pub pairs_evaluated: usize,
    pub refs_used: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Outcome {
    Agree,
    Disagree,
    Tie,
}

impl Outcome {
    fn credit(self) -> f64 {
        match self {
            Outcome::Agree => 1.0,
            Outcome::Disagree => 0.0,
            Outcome::Tie => 0.5,
        }
    }
}

/// Both normalizations of the corpus: one for scoring with the metric's
/// stemming setting and an unstemmed one for spotting candidates that are
/// themselves references.
pub(crate) struct PairScorer<'a> {
    metric: &'a dyn Metric,
    scoring: Cow<'a, RefCorpus>,
    plain: Cow<'a, RefCorpus>,
}

impl<'a> PairScorer<'a> {
    pub(crate) fn new(metric: &'a dyn Metric, corpus: &'a RefCorpus) -> Self {
        Self {
            metric,
            scoring: corpus.with_stemming(metric.stemming()),
            plain: corpus.with_stemming(false),
        }
    }

    /// Reference indices of `image_id` not equal to either candidate.
    fn pool(&self, image_id: &str, b: &TokenSequence, c: &TokenSequence) -> Result<Vec<usize>> {
        let refs = self
            .plain
            .references(image_id)
            .ok_or_else(|| Error::UnknownImage(image_id.to_string()))?;
        Ok(refs
            .iter()
            .enumerate()
            .filter(|(_, r)| r.tokens() != b.tokens() && r.tokens() != c.tokens())
            .map(|(i, _)| i)
            .collect())
    }

    pub(crate) fn judge(
        &self,
        pair: &PairJudgment,
        index: usize,
        refs_per_image: usize,
        seed: u64,
    ) -> Result<Outcome> {
        let plain_b = tokenize_with(&pair.b, false);
        let plain_c = tokenize_with(&pair.c, false);
        let pool = self.pool(&pair.image_id, &plain_b, &plain_c)?;
        if refs_per_image > pool.len() {
            return Err(Error::NotEnoughReferences {
                image_id: pair.image_id.clone(),
                available: pool.len(),
                requested: refs_per_image,
            });
        }
        let mut rng = pair_rng(seed, &pair.image_id, index);
        let picked = subsample(&mut rng, pool.len(), refs_per_image);
        let all = self
            .scoring
            .references(&pair.image_id)
            .expect("image checked above");
        let refs: Vec<&TokenSequence> = picked.iter().map(|&i| &all[pool[i]]).collect();
        let stem = self.metric.stemming();
        let sb = self.metric.score(&tokenize_with(&pair.b, stem), &refs);
        let sc = self.metric.score(&tokenize_with(&pair.c, stem), &refs);
        let predicted = if sb > sc {
            Winner::B
        } else if sc > sb {
            Winner::C
        } else {
            return Ok(Outcome::Tie);
        };
        Ok(if predicted == pair.winner {
            Outcome::Agree
        } else {
            Outcome::Disagree
        })
    }
}

/// Fraction of pairs on which the metric picks the human winner. Each pair
/// is scored against `refs_per_image` references drawn without replacement
/// from the image's pool, shared by both candidates.
pub fn pair_accuracy(
    metric: &dyn Metric,
    pairs: &[PairJudgment],
    corpus: &RefCorpus,
    refs_per_image: usize,
    seed: u64,
) -> Result<AccuracyReport> {
    let scorer = PairScorer::new(metric, corpus);
    accuracy_with(&scorer, metric.name(), pairs, refs_per_image, seed)
}

pub(crate) fn accuracy_with(
    scorer: &PairScorer<'_>,
    name: &str,
    pairs: &[PairJudgment],
    refs_per_image: usize,
    seed: u64,
) -> Result<AccuracyReport> {
    if refs_per_image < 1 {
        return Err(Error::Validation(
            "refs_per_image must be at least 1".into(),
        ));
    }
    let outcomes: Vec<Outcome> = pairs
        .par_iter()
        .enumerate()
        .map(|(i, pair)| scorer.judge(pair, i, refs_per_image, seed))
        .collect::<Result<_>>()?;

    let mut per_kind: BTreeMap<String, KindAccuracy> = BTreeMap::new();
    let mut agreed = 0.0;
    let mut tie_count = 0;
    for (pair, outcome) in pairs.iter().zip(&outcomes) {
        let key = pair
            .kind
            .map(|k| k.to_string())
            .unwrap_or_else(|| UNLABELED.to_string());
        let bucket = per_kind.entry(key).or_insert(KindAccuracy {
            pairs: 0,
            agreed: 0.0,
            accuracy: 0.0,
            ties: 0,
        });
        bucket.pairs += 1;
        bucket.agreed += outcome.credit();
        agreed += outcome.credit();
        if *outcome == Outcome::Tie {
            bucket.ties += 1;
            tie_count += 1;
        }
    }
    for bucket in per_kind.values_mut() {
        bucket.accuracy = bucket.agreed / bucket.pairs as f64;
    }
    let overall = if pairs.is_empty() {
        0.0
    } else {
        agreed / pairs.len() as f64
    };
    Ok(AccuracyReport {
        metric: name.to_string(),
        overall,
        per_kind,
        tie_count,
        pairs_evaluated: pairs.len(),
        refs_used: refs_per_image,
        seed,
    })
}
