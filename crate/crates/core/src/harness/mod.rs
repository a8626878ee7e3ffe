//! Agreement of metrics with human consensus judgments, reference-count
//! ablations, leave-one-out reference ranking, system win fractions and
//! correlation statistics.
//!
//! Pair scoring runs on the current rayon pool; results are collected in
//! input order and reduced sequentially, so reports do not depend on the
//! number of worker threads.

mod ablation;
mod accuracy;
mod correlation;
mod judgments;
mod ranking;
mod sampling;
mod systems;

pub use ablation::{ref_count_ablation, AblationPoint};
pub use accuracy::{pair_accuracy, AccuracyReport, KindAccuracy};
pub use correlation::{pearson_r, spearman_rho};
pub use judgments::{
    load_pairs, load_raw_votes, reduce_votes, PairJudgment, PairKind, RawVote, VoteReduction,
    Winner,
};
pub use ranking::{rank_references, RankedSentence};
pub use sampling::{pair_rng, subsample};
pub use systems::{system_win_fractions, SystemOutputs, WinStats};
