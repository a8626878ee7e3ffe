//! CIDEr and CIDEr-D consensus scores.
//!
//! Each sentence becomes one sparse TF-IDF vector per n-gram order. TF is the
//! n-gram count divided by the sentence's total count at that order, IDF comes
//! from an [`IdfSource`] (normally [`DfStats`](crate::DfStats) over the
//! reference corpus). Per order the candidate is compared to every reference
//! by cosine similarity and the similarities are averaged; orders are then
//! combined with weights `w_n`.
//!
//! CIDEr-D expects unstemmed tokens, clips the candidate weights at the
//! reference weights in the numerator, multiplies each reference term by a
//! Gaussian penalty on the length difference and scales the result by 10.

use std::borrow::Borrow;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{IdfSource, UniformIdf};
use crate::textnorm::{check_order, count_windows, NGram, NGramCounts, TokenSequence, MAX_ORDER};
use crate::{Error, Result, Scalar};

/// Floor inside the logarithm of the exponential combination.
pub const EXP_VARIANT_EPSILON: f64 = 1e-9;

/// Sparse TF-IDF vector of one sentence at one order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector<F> {
    order: usize,
    weights: BTreeMap<NGram, F>,
}

impl<F: Scalar> WeightedVector<F> {
    pub fn from_counts<S: IdfSource<F>>(counts: &NGramCounts, idf: &S) -> Self {
        let total = F::of_usize(counts.total());
        let weights = counts
            .iter()
            .map(|(gram, h)| (gram.clone(), F::of_usize(h) / total * idf.idf(gram)))
            .collect();
        Self {
            order: counts.order(),
            weights,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn weights(&self) -> &BTreeMap<NGram, F> {
        &self.weights
    }

    pub fn get(&self, gram: &[String]) -> F {
        self.weights.get(gram).copied().unwrap_or_else(F::zero)
    }

    pub fn norm(&self) -> F {
        self.weights
            .values()
            .fold(F::zero(), |acc, &w| acc + w * w)
            .sqrt()
    }

    /// Sums `f(self_k, other_k)` over n-grams present in both vectors, in
    /// n-gram order.
    fn merge_sum(&self, other: &Self, f: impl Fn(F, F) -> F) -> F {
        let mut acc = F::zero();
        let (small, large, swapped) = if self.weights.len() <= other.weights.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        for (gram, &a) in &small.weights {
            if let Some(&b) = large.weights.get(gram) {
                acc = acc + if swapped { f(b, a) } else { f(a, b) };
            }
        }
        acc
    }

    pub fn dot(&self, other: &Self) -> F {
        self.merge_sum(other, |a, b| a * b)
    }

    /// `Σ_k min(self_k, other_k) · other_k`.
    pub fn clipped_dot(&self, other: &Self) -> F {
        self.merge_sum(other, |a, b| a.min(b) * b)
    }
}

/// TF-IDF vector of `s` at order `n`. Sentences shorter than `n` give the
/// zero vector.
pub fn tfidf_vector<F: Scalar, S: IdfSource<F>>(
    s: &TokenSequence,
    n: usize,
    idf: &S,
) -> Result<WeightedVector<F>> {
    check_order(n)?;
    Ok(WeightedVector::from_counts(
        &count_windows(s.tokens(), n),
        idf,
    ))
}

fn vector<F: Scalar, S: IdfSource<F>>(s: &TokenSequence, n: usize, idf: &S) -> WeightedVector<F> {
    WeightedVector::from_counts(&count_windows(s.tokens(), n), idf)
}

/// Cosine similarity; 0 when either vector has zero norm.
fn cosine<F: Scalar>(a: &WeightedVector<F>, b: &WeightedVector<F>) -> F {
    let denom = a.norm() * b.norm();
    if denom == F::zero() {
        F::zero()
    } else {
        a.dot(b) / denom
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiderVariant {
    /// Weighted arithmetic mean of the per-order averages.
    #[default]
    Standard,
    /// Weighted geometric combination of the per-order averages.
    Exp,
    /// Per order, best reference instead of the mean over references.
    Max,
    /// Every IDF weight set to 1.
    NoIdf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CiderConfig<F> {
    pub max_order: usize,
    /// `w_n` for `n = 1..=max_order`.
    pub weights: Vec<F>,
    pub variant: CiderVariant,
    /// Width of the CIDEr-D length penalty.
    pub sigma: F,
    /// CIDEr-D output scale.
    pub scale: F,
}

impl<F: Scalar> Default for CiderConfig<F> {
    fn default() -> Self {
        Self::with_max_order(MAX_ORDER)
    }
}

impl<F: Scalar> CiderConfig<F> {
    /// Uniform weights `1/N` over orders `1..=N`.
    pub fn with_max_order(max_order: usize) -> Self {
        let n = max_order.clamp(1, MAX_ORDER);
        Self {
            max_order: n,
            weights: vec![F::one() / F::of_usize(n); n],
            variant: CiderVariant::Standard,
            sigma: F::of(6.0),
            scale: F::of(10.0),
        }
    }

    pub fn variant(mut self, variant: CiderVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn sigma(mut self, sigma: F) -> Self {
        self.sigma = sigma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.max_order)?;
        if self.weights.len() != self.max_order {
            return Err(Error::Validation(format!(
                "{} weights for max order {}",
                self.weights.len(),
                self.max_order
            )));
        }
        if self.weights.iter().any(|w| w.is_nan() || *w < F::zero()) {
            return Err(Error::Validation("order weights must be >= 0".into()));
        }
        if matches!(self.variant, CiderVariant::Standard | CiderVariant::Exp) {
            let sum = self.weights.iter().fold(F::zero(), |a, &w| a + w);
            if (sum - F::one()).abs() > F::of(1e-6) {
                return Err(Error::Validation(format!(
                    "order weights sum to {sum}, not 1"
                )));
            }
        }
        let positive = |x: F| x.is_finite() && x > F::zero();
        if !positive(self.sigma) || !positive(self.scale) {
            return Err(Error::Validation("sigma and scale must be positive".into()));
        }
        Ok(())
    }
}

/// Mean cosine similarity at order `n` between the candidate and each
/// reference. Returns 0 for an empty reference list.
pub fn cider_n<F, S, R>(c: &TokenSequence, refs: &[R], n: usize, idf: &S) -> F
where
    F: Scalar,
    S: IdfSource<F>,
    R: Borrow<TokenSequence>,
{
    let cand = vector(c, n, idf);
    mean(
        refs.iter()
            .map(|r| cosine(&cand, &vector(r.borrow(), n, idf))),
    )
}

fn mean<F: Scalar>(values: impl Iterator<Item = F>) -> F {
    let (sum, count) = values.fold((F::zero(), 0usize), |(s, k), v| (s + v, k + 1));
    if count == 0 {
        F::zero()
    } else {
        sum / F::of_usize(count)
    }
}

/// Combined CIDEr score under `cfg.variant`.
///
/// With the standard variant and uniform weights the result lies in `[0, 1]`.
pub fn cider<F, S, R>(c: &TokenSequence, refs: &[R], idf: &S, cfg: &CiderConfig<F>) -> F
where
    F: Scalar,
    S: IdfSource<F>,
    R: Borrow<TokenSequence>,
{
    match cfg.variant {
        CiderVariant::NoIdf => combine(&per_order(c, refs, &UniformIdf, cfg, false), cfg),
        CiderVariant::Max => combine(&per_order(c, refs, idf, cfg, true), cfg),
        _ => combine(&per_order(c, refs, idf, cfg, false), cfg),
    }
}

fn per_order<F, S, R>(
    c: &TokenSequence,
    refs: &[R],
    idf: &S,
    cfg: &CiderConfig<F>,
    take_max: bool,
) -> Vec<F>
where
    F: Scalar,
    S: IdfSource<F>,
    R: Borrow<TokenSequence>,
{
    (1..=cfg.max_order)
        .map(|n| {
            let cand = vector(c, n, idf);
            let sims = refs
                .iter()
                .map(|r| cosine(&cand, &vector(r.borrow(), n, idf)));
            if take_max {
                sims.fold(F::zero(), F::max)
            } else {
                mean(sims)
            }
        })
        .collect()
}

fn combine<F: Scalar>(scores: &[F], cfg: &CiderConfig<F>) -> F {
    let weighted = scores.iter().zip(&cfg.weights);
    if cfg.variant == CiderVariant::Exp {
        let eps = F::of(EXP_VARIANT_EPSILON);
        weighted
            .fold(F::zero(), |acc, (&s, &w)| acc + w * s.max(eps).ln())
            .exp()
    } else {
        weighted.fold(F::zero(), |acc, (&s, &w)| acc + w * s)
    }
}

fn length_penalty<F: Scalar>(candidate_len: usize, reference_len: usize, sigma: F) -> F {
    let delta = F::of_usize(candidate_len) - F::of_usize(reference_len);
    (-(delta * delta) / (F::of(2.0) * sigma * sigma)).exp()
}

/// CIDEr-D at order `n`. Inputs should be tokenized without stemming.
pub fn cider_d_n<F, S, R>(
    c: &TokenSequence,
    refs: &[R],
    n: usize,
    idf: &S,
    cfg: &CiderConfig<F>,
) -> F
where
    F: Scalar,
    S: IdfSource<F>,
    R: Borrow<TokenSequence>,
{
    let cand = vector(c, n, idf);
    cider_d_n_vec(&cand, c.len(), refs, n, idf, cfg)
}

fn cider_d_n_vec<F, S, R>(
    cand: &WeightedVector<F>,
    cand_len: usize,
    refs: &[R],
    n: usize,
    idf: &S,
    cfg: &CiderConfig<F>,
) -> F
where
    F: Scalar,
    S: IdfSource<F>,
    R: Borrow<TokenSequence>,
{
    let cand_norm = cand.norm();
    let terms = refs.iter().map(|r| {
        let r = r.borrow();
        let reference = vector(r, n, idf);
        // The denominator keeps the unclipped candidate norm.
        let denom = cand_norm * reference.norm();
        if denom == F::zero() {
            return F::zero();
        }
        length_penalty(cand_len, r.len(), cfg.sigma) * cand.clipped_dot(&reference) / denom
    });
    cfg.scale * mean(terms)
}

/// Weighted combination of [`cider_d_n`] over orders `1..=cfg.max_order`.
/// `cfg.variant` is not consulted. Range `[0, scale]` with uniform weights.
pub fn cider_d<F, S, R>(c: &TokenSequence, refs: &[R], idf: &S, cfg: &CiderConfig<F>) -> F
where
    F: Scalar,
    S: IdfSource<F>,
    R: Borrow<TokenSequence>,
{
    (1..=cfg.max_order)
        .zip(&cfg.weights)
        .fold(F::zero(), |acc, (n, &w)| {
            let cand = vector(c, n, idf);
            acc + w * cider_d_n_vec(&cand, c.len(), refs, n, idf, cfg)
        })
}
