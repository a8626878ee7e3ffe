//! Sentence-level comparison metrics: BLEU, ROUGE_N, ROUGE_L, ROUGE_S and a
//! METEOR-style scorer restricted to exact and stem matches.

mod bleu;
mod meteor;
mod rouge;

pub use bleu::{bleu, bleu_precision, brevity_penalty, BleuConfig};
pub use meteor::{align, meteor, Alignment, MeteorConfig, SEARCH_NODE_BUDGET};
pub use rouge::{
    lcs_length, rouge_l, rouge_n, rouge_s, skip_bigrams, SkipBigram, DEFAULT_BETA, DEFAULT_MAX_GAP,
};

use crate::Scalar;

/// `(1 + β²) R P / (R + β² P)`, 0 when the denominator vanishes.
pub(crate) fn f_measure<F: Scalar>(recall: F, precision: F, beta: F) -> F {
    let b2 = beta * beta;
    let denom = recall + b2 * precision;
    if denom == F::zero() {
        F::zero()
    } else {
        (F::one() + b2) * recall * precision / denom
    }
}
