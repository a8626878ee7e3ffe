use std::borrow::Borrow;
use std::collections::BTreeMap;

use super::f_measure;
use crate::textnorm::{count_windows, TokenSequence};
use crate::Scalar;

/// Recall-favouring F-measure weight.
pub const DEFAULT_BETA: f64 = 2.0;
/// Largest positional distance between the words of a skip-bigram.
pub const DEFAULT_MAX_GAP: usize = 4;

/// N-gram recall pooled over all references.
pub fn rouge_n<F: Scalar, R: Borrow<TokenSequence>>(c: &TokenSequence, refs: &[R], n: usize) -> F {
    let cand = count_windows(c.tokens(), n);
    let (matched, total) = refs.iter().fold((0usize, 0usize), |(m, t), r| {
        let reference = count_windows(r.borrow().tokens(), n);
        let overlap: usize = reference.iter().map(|(g, h)| h.min(cand.get(g))).sum();
        (m + overlap, t + reference.total())
    });
    if total == 0 {
        F::zero()
    } else {
        F::of_usize(matched) / F::of_usize(total)
    }
}

/// Longest common subsequence length over tokens.
pub fn lcs_length(a: &TokenSequence, b: &TokenSequence) -> usize {
    let (a, b) = (a.tokens(), b.tokens());
    let mut prev = vec![0usize; b.len() + 1];
    let mut row = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            row[j + 1] = if x == y {
                prev[j] + 1
            } else {
                row[j].max(prev[j + 1])
            };
        }
        std::mem::swap(&mut prev, &mut row);
    }
    prev[b.len()]
}

/// LCS-based F-measure; recall and precision each take their best reference.
pub fn rouge_l<F: Scalar, R: Borrow<TokenSequence>>(c: &TokenSequence, refs: &[R], beta: F) -> F {
    let mut recall = F::zero();
    let mut precision = F::zero();
    for r in refs {
        let r = r.borrow();
        let lcs = F::of_usize(lcs_length(c, r));
        if !r.is_empty() {
            recall = recall.max(lcs / F::of_usize(r.len()));
        }
        if !c.is_empty() {
            precision = precision.max(lcs / F::of_usize(c.len()));
        }
    }
    f_measure(recall, precision, beta)
}

pub type SkipBigram = (String, String);

/// Ordered token pairs `(s_i, s_j)`, `i < j`, with `j - i <= max_gap`.
/// Pass `usize::MAX` for no gap limit.
pub fn skip_bigrams(s: &TokenSequence, max_gap: usize) -> BTreeMap<SkipBigram, usize> {
    let tokens = s.tokens();
    let mut out = BTreeMap::new();
    for i in 0..tokens.len() {
        let end = tokens
            .len()
            .min(i.saturating_add(max_gap).saturating_add(1));
        for j in i + 1..end {
            *out.entry((tokens[i].clone(), tokens[j].clone()))
                .or_insert(0) += 1;
        }
    }
    out
}

/// Skip-bigram F-measure; recall and precision each take their best reference.
pub fn rouge_s<F: Scalar, R: Borrow<TokenSequence>>(
    c: &TokenSequence,
    refs: &[R],
    beta: F,
    max_gap: usize,
) -> F {
    let cand = skip_bigrams(c, max_gap);
    let cand_total: usize = cand.values().sum();
    let mut recall = F::zero();
    let mut precision = F::zero();
    for r in refs {
        let reference = skip_bigrams(r.borrow(), max_gap);
        let ref_total: usize = reference.values().sum();
        let overlap: usize = reference
            .iter()
            .map(|(k, &f)| f.min(cand.get(k).copied().unwrap_or(0)))
            .sum();
        if ref_total > 0 {
            recall = recall.max(F::of_usize(overlap) / F::of_usize(ref_total));
        }
        if cand_total > 0 {
            precision = precision.max(F::of_usize(overlap) / F::of_usize(cand_total));
        }
    }
    f_measure(recall, precision, beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textnorm::tokenize;
    use proptest::prelude::*;

    fn t(s: &str) -> TokenSequence {
        tokenize(s)
    }

    #[test]
    fn rouge_n_examples() {
        let s = t("a cat sits");
        assert_eq!(rouge_n::<f64, _>(&s, std::slice::from_ref(&s), 1), 1.0);
        let v: f64 = rouge_n(&t("a cat"), &[t("a cat sits"), t("a dog")], 1);
        assert!((v - 0.6).abs() < 1e-15);
        assert_eq!(rouge_n::<f64, _>(&t("x y"), &[t("a b")], 1), 0.0);
    }

    #[test]
    fn lcs_examples() {
        assert_eq!(lcs_length(&t("x y z"), &t("x y z")), 3);
        assert_eq!(lcs_length(&t("a b c d"), &t("a c b d")), 3);
        assert_eq!(lcs_length(&t("a b"), &t("c d")), 0);
        assert_eq!(lcs_length(&t(""), &t("c d")), 0);
    }

    #[test]
    fn rouge_l_examples() {
        let s = t("a b c");
        assert_eq!(rouge_l::<f64, _>(&s, std::slice::from_ref(&s), 2.0), 1.0);
        let v: f64 = rouge_l(&t("a b"), &[t("a b c d")], 2.0);
        assert!((v - 2.5 / 4.5).abs() < 1e-15);
        assert_eq!(rouge_l::<f64, _>(&t("x"), &[t("a b")], 2.0), 0.0);
    }

    #[test]
    fn skip_bigram_examples() {
        assert_eq!(
            skip_bigrams(&t("a b c d"), usize::MAX)
                .values()
                .sum::<usize>(),
            6
        );
        let two = skip_bigrams(&t("a b"), 4);
        assert_eq!(two.len(), 1);
        assert_eq!(two[&("a".to_string(), "b".to_string())], 1);
        assert_eq!(
            skip_bigrams(&t("a b c d e f"), 4).values().sum::<usize>(),
            14
        );
        assert_eq!(skip_bigrams(&t("a b c"), 0).len(), 0);
    }

    #[test]
    fn rouge_s_examples() {
        let s = t("a b c");
        assert_eq!(rouge_s::<f64, _>(&s, std::slice::from_ref(&s), 2.0, 4), 1.0);
        assert_eq!(rouge_s::<f64, _>(&t("a"), &[t("a b")], 2.0, 4), 0.0);
        let v: f64 = rouge_s(&t("a b c"), &[t("a c b")], 2.0, 4);
        assert!((v - 2.0 / 3.0).abs() < 1e-15);
    }

    fn brute_lcs(a: &[String], b: &[String]) -> usize {
        // longest subset of `a` (by bitmask) that is a subsequence of `b`
        let mut best = 0;
        for mask in 0u32..(1 << a.len()) {
            let picked: Vec<&String> = (0..a.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &a[i])
                .collect();
            let mut it = b.iter();
            if picked.iter().all(|p| it.any(|x| x == *p)) {
                best = best.max(picked.len());
            }
        }
        best
    }

    fn seq() -> impl Strategy<Value = TokenSequence> {
        prop::collection::vec("[a-c]", 0..8).prop_map(|w| TokenSequence::from_tokens(w, false))
    }

    proptest! {
        #[test]
        fn lcs_symmetric_and_exhaustive(a in seq(), b in seq()) {
            let l = lcs_length(&a, &b);
            prop_assert_eq!(l, lcs_length(&b, &a));
            prop_assert_eq!(lcs_length(&a, &a), a.len());
            prop_assert_eq!(l, brute_lcs(a.tokens(), b.tokens()));
        }

        #[test]
        fn distinct_tokens_give_all_pairs(len in 0usize..12) {
            let s = TokenSequence::from_tokens((0..len).map(|i| format!("w{i}")), false);
            prop_assert_eq!(skip_bigrams(&s, usize::MAX).values().sum::<usize>(), len * len.saturating_sub(1) / 2);
        }

        #[test]
        fn per_reference_max_never_drops(c in seq(), refs in prop::collection::vec(seq(), 1..4), extra in seq()) {
            let l: f64 = rouge_l(&c, &refs, 2.0);
            let s: f64 = rouge_s(&c, &refs, 2.0, 4);
            let mut more = refs.clone();
            more.push(extra);
            prop_assert!(rouge_l::<f64, _>(&c, &more, 2.0) >= l);
            prop_assert!(rouge_s::<f64, _>(&c, &more, 2.0, 4) >= s);
            prop_assert!((0.0..=1.0).contains(&l) && (0.0..=1.0).contains(&s));
        }
    }
}
