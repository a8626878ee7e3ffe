use std::borrow::Borrow;

use crate::textnorm::{check_order, count_windows, TokenSequence, MAX_ORDER};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct BleuConfig<F> {
    pub max_order: usize,
    pub weights: Vec<F>,
}

impl<F: Scalar> Default for BleuConfig<F> {
    fn default() -> Self {
        Self::with_max_order(MAX_ORDER)
    }
}

impl<F: Scalar> BleuConfig<F> {
    pub fn with_max_order(max_order: usize) -> Self {
        let n = max_order.clamp(1, MAX_ORDER);
        Self {
            max_order: n,
            weights: vec![F::one() / F::of_usize(n); n],
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_order(self.max_order)?;
        let sum = self.weights.iter().fold(F::zero(), |a, &w| a + w);
        if self.weights.len() != self.max_order || (sum - F::one()).abs() > F::of(1e-6) {
            return Err(Error::Validation(
                "BLEU needs one weight per order summing to 1".into(),
            ));
        }
        Ok(())
    }
}

/// Clipped n-gram precision: each candidate n-gram is credited at most as
/// often as it appears in any single reference.
pub fn bleu_precision<F: Scalar, R: Borrow<TokenSequence>>(
    c: &TokenSequence,
    refs: &[R],
    n: usize,
) -> F {
    let cand = count_windows(c.tokens(), n);
    let total = cand.total();
    if total == 0 {
        return F::zero();
    }
    let ref_counts: Vec<_> = refs
        .iter()
        .map(|r| count_windows(r.borrow().tokens(), n))
        .collect();
    let clipped: usize = cand
        .iter()
        .map(|(gram, h)| {
            let cap = ref_counts.iter().map(|r| r.get(gram)).max().unwrap_or(0);
            h.min(cap)
        })
        .sum();
    F::of_usize(clipped) / F::of_usize(total)
}

/// Brevity penalty against the reference whose length is closest to the
/// candidate's (ties go to the shorter reference).
pub fn brevity_penalty<F: Scalar, R: Borrow<TokenSequence>>(c: &TokenSequence, refs: &[R]) -> F {
    let cand_len = c.len();
    if cand_len == 0 {
        return F::zero();
    }
    let Some(ref_len) = refs
        .iter()
        .map(|r| r.borrow().len())
        .min_by_key(|&len| (len.abs_diff(cand_len), len))
    else {
        return F::zero();
    };
    if cand_len > ref_len {
        F::one()
    } else {
        (F::one() - F::of_usize(ref_len) / F::of_usize(cand_len)).exp()
    }
}

/// Sentence-level BLEU without smoothing: any zero precision gives 0.
pub fn bleu<F: Scalar, R: Borrow<TokenSequence>>(
    c: &TokenSequence,
    refs: &[R],
    cfg: &BleuConfig<F>,
) -> F {
    let mut log_sum = F::zero();
    for (n, &w) in (1..=cfg.max_order).zip(&cfg.weights) {
        let p: F = bleu_precision(c, refs, n);
        if p == F::zero() {
            return F::zero();
        }
        log_sum = log_sum + w * p.ln();
    }
    brevity_penalty::<F, R>(c, refs) * log_sum.exp()
}
