use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{pair_rng, subsample};
use crate::corpus::RefCorpus;
use crate::metric::Metric;
use crate::textnorm::{tokenize_with, TokenSequence};
use crate::{Error, Result};

/// System id to (image id to candidate sentence).
pub type SystemOutputs = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinStats {
    /// Wins, with ties counted as one half.
    pub wins: f64,
    pub comparisons: usize,
    pub fraction: f64,
}

fn check_coverage(outputs: &SystemOutputs) -> Result<BTreeSet<&str>> {
    let all: BTreeSet<&str> = outputs
        .values()
        .flat_map(|m| m.keys().map(String::as_str))
        .collect();
    let missing: Vec<String> = outputs
        .iter()
        .flat_map(|(system, m)| {
            all.iter()
                .filter(|id| !m.contains_key(**id))
                .map(move |id| format!("{system}:{id}"))
        })
        .collect();
    if missing.is_empty() {
        Ok(all)
    } else {
        Err(Error::CoverageMismatch(missing))
    }
}

/// For every image and every pair of systems, the higher-scoring system
/// earns a win and ties split it. With `refs_per_image` set, each image is
/// scored against a seeded subsample shared by all systems.
pub fn system_win_fractions(
    outputs: &SystemOutputs,
    corpus: &RefCorpus,
    metric: &dyn Metric,
    refs_per_image: Option<usize>,
    seed: u64,
) -> Result<BTreeMap<String, WinStats>> {
    if outputs.len() < 2 {
        return Err(Error::Validation(format!(
            "need at least 2 systems, got {}",
            outputs.len()
        )));
    }
    let images: Vec<&str> = check_coverage(outputs)?.into_iter().collect();
    if refs_per_image == Some(0) {
        return Err(Error::Validation(
            "refs_per_image must be at least 1".into(),
        ));
    }
    let scoring = corpus.with_stemming(metric.stemming());
    let stem = metric.stemming();
    let systems: Vec<&String> = outputs.keys().collect();

    // scores[image][system]
    let scores: Vec<Vec<f64>> = images
        .par_iter()
        .enumerate()
        .map(|(i, id)| {
            let all = scoring
                .references(id)
                .ok_or_else(|| Error::UnknownImage(id.to_string()))?;
            let picked = match refs_per_image {
                None => (0..all.len()).collect(),
                Some(k) if k > all.len() => {
                    return Err(Error::NotEnoughReferences {
                        image_id: id.to_string(),
                        available: all.len(),
                        requested: k,
                    })
                }
                Some(k) => subsample(&mut pair_rng(seed, id, i), all.len(), k),
            };
            let refs: Vec<&TokenSequence> = picked.iter().map(|&j| &all[j]).collect();
            Ok(systems
                .iter()
                .map(|s| metric.score(&tokenize_with(&outputs[*s][*id], stem), &refs))
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut wins = vec![0.0; systems.len()];
    let mut comparisons = vec![0usize; systems.len()];
    for row in &scores {
        for a in 0..systems.len() {
            for b in a + 1..systems.len() {
                comparisons[a] += 1;
                comparisons[b] += 1;
                if row[a] > row[b] {
                    wins[a] += 1.0;
                } else if row[b] > row[a] {
                    wins[b] += 1.0;
                } else {
                    wins[a] += 0.5;
                    wins[b] += 0.5;
                }
            }
        }
    }
    Ok(systems
        .iter()
        .enumerate()
        .map(|(k, s)| {
            let fraction = if comparisons[k] == 0 {
                0.0
            } else {
                wins[k] / comparisons[k] as f64
            };
            (
                (*s).clone(),
                WinStats {
                    wins: wins[k],
                    comparisons: comparisons[k],
                    fraction,
                },
            )
        })
        .collect())
}
