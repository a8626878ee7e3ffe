use serde::Serialize;

use super::accuracy::{accuracy_with, PairScorer};
use super::judgments::PairJudgment;
use crate::corpus::RefCorpus;
use crate::metric::Metric;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AblationPoint {
    pub count: usize,
    pub mean: f64,
    /// Population standard deviation over trials.
    pub std: f64,
    pub trials: Vec<f64>,
}

/// Mean pair accuracy per reference count over `trials` subsamples. Trial
/// `t` uses seed `seed + t`, so a single trial reproduces `pair_accuracy`.
pub fn ref_count_ablation(
    metric: &dyn Metric,
    pairs: &[PairJudgment],
    corpus: &RefCorpus,
    counts: &[usize],
    trials: usize,
    seed: u64,
) -> Result<Vec<AblationPoint>> {
    if trials == 0 {
        return Err(Error::Validation("trials must be at least 1".into()));
    }
    let scorer = PairScorer::new(metric, corpus);
    counts
        .iter()
        .map(|&count| {
            let accuracies = (0..trials as u64)
                .map(|t| {
                    accuracy_with(&scorer, metric.name(), pairs, count, seed.wrapping_add(t))
                        .map(|r| r.overall)
                })
                .collect::<Result<Vec<f64>>>()?;
            let n = accuracies.len() as f64;
            let mean = accuracies.iter().sum::<f64>() / n;
            let var = accuracies.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / n;
            Ok(AblationPoint {
                count,
                mean,
                std: var.sqrt(),
                trials: accuracies,
            })
        })
        .collect()
}
