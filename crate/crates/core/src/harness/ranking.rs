use serde::Serialize;

use crate::corpus::RefCorpus;
use crate::metric::Metric;
use crate::textnorm::TokenSequence;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedSentence {
    /// Position among the image's references.
    pub index: usize,
    pub sentence: String,
    pub score: f64,
}

/// Scores every reference of `image_id` against the others and sorts the
/// results high to low, keeping the original order among equal scores.
pub fn rank_references(
    corpus: &RefCorpus,
    image_id: &str,
    metric: &dyn Metric,
) -> Result<Vec<RankedSentence>> {
    let image = corpus
        .image(image_id)
        .ok_or_else(|| Error::UnknownImage(image_id.to_string()))?;
    if image.len() < 2 {
        return Err(Error::NotEnoughReferences {
            image_id: image_id.to_string(),
            available: image.len(),
            requested: 2,
        });
    }
    let scoring = corpus.with_stemming(metric.stemming());
    let tokens = scoring.references(image_id).expect("image checked above");
    let mut ranked: Vec<RankedSentence> = tokens
        .iter()
        .enumerate()
        .map(|(i, candidate)| {
            let others: Vec<&TokenSequence> = tokens
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, r)| r)
                .collect();
            RankedSentence {
                index: i,
                sentence: image.raw()[i].clone(),
                score: metric.score(candidate, &others),
            }
        })
        .collect();
    ranked.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(ranked)
}
