//! METEOR-style scoring with exact and Porter-stem matching.
//!
//! Each reference is aligned to the candidate in two stages: exact tokens
//! first, then stems of the tokens still unaligned. Every stage takes a
//! maximum-cardinality one-to-one matching, and among those the one with the
//! fewest chunks. A chunk is a maximal run of aligned pairs that are adjacent
//! and identically ordered in both sentences.

use std::borrow::Borrow;
use std::collections::HashMap;

use crate::textnorm::{stem, TokenSequence};
use crate::{Error, Result, Scalar};

/// Branch-and-bound node limit per stage. Past it the best alignment found
/// so far is kept, which only happens for long sentences with many repeated
/// words.
pub const SEARCH_NODE_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MeteorConfig<F> {
    /// Precision/recall balance of the F-mean.
    pub alpha: F,
    /// Fragmentation penalty weight.
    pub gamma: F,
    /// Fragmentation penalty exponent.
    pub theta: F,
}

impl<F: Scalar> Default for MeteorConfig<F> {
    fn default() -> Self {
        Self {
            alpha: F::of(0.9),
            gamma: F::of(0.5),
            theta: F::of(3.0),
        }
    }
}

impl<F: Scalar> MeteorConfig<F> {
    pub fn validate(&self) -> Result<()> {
        let ok = self.alpha >= F::zero()
            && self.alpha <= F::one()
            && self.gamma >= F::zero()
            && self.theta >= F::zero();
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(
                "METEOR needs 0 <= alpha <= 1, gamma >= 0, theta >= 0".into(),
            ))
        }
    }
}

/// One-to-one alignment between candidate and reference positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// `(candidate index, reference index)`, sorted by candidate index.
    pub pairs: Vec<(usize, usize)>,
    pub chunks: usize,
}

impl Alignment {
    pub fn matches(&self) -> usize {
        self.pairs.len()
    }
}

/// Counts chunks of an alignment given as candidate position -> reference
/// position.
pub(crate) fn count_chunks(links: &[Option<usize>]) -> usize {
    let mut chunks = 0;
    let mut prev: Option<usize> = None;
    for link in links {
        if let Some(j) = *link {
            if !continues(prev, j) {
                chunks += 1;
            }
        }
        prev = *link;
    }
    chunks
}

fn continues(prev: Option<usize>, j: usize) -> bool {
    matches!(prev, Some(p) if p + 1 == j)
}

/// Aligns `c` against `r`: exact matches, then stem matches.
pub fn align(c: &TokenSequence, r: &TokenSequence) -> Alignment {
    let c_exact: Vec<&str> = c.tokens().iter().map(String::as_str).collect();
    let r_exact: Vec<&str> = r.tokens().iter().map(String::as_str).collect();
    let mut links = vec![None; c.len()];
    let mut r_used = vec![false; r.len()];

    stage(&c_exact, &r_exact, &mut links, &mut r_used);

    let c_stems: Vec<String> = c.tokens().iter().map(|t| stem(t)).collect();
    let r_stems: Vec<String> = r.tokens().iter().map(|t| stem(t)).collect();
    let c_stems: Vec<&str> = c_stems.iter().map(String::as_str).collect();
    let r_stems: Vec<&str> = r_stems.iter().map(String::as_str).collect();
    stage(&c_stems, &r_stems, &mut links, &mut r_used);

    let pairs = links
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.map(|j| (i, j)))
        .collect();
    Alignment {
        pairs,
        chunks: count_chunks(&links),
    }
}

/// Extends `links` with a maximum matching over positions still free, keyed
/// by equality of `c_keys[i]` and `r_keys[j]`, minimizing total chunks.
fn stage(c_keys: &[&str], r_keys: &[&str], links: &mut [Option<usize>], r_used: &mut [bool]) {
    let mut c_left: HashMap<&str, usize> = HashMap::new();
    for (i, key) in c_keys.iter().enumerate() {
        if links[i].is_none() {
            *c_left.entry(key).or_insert(0) += 1;
        }
    }
    let mut r_free: HashMap<&str, usize> = HashMap::new();
    for (j, key) in r_keys.iter().enumerate() {
        if !r_used[j] {
            *r_free.entry(key).or_insert(0) += 1;
        }
    }
    if !c_left
        .keys()
        .any(|k| r_free.get(k).copied().unwrap_or(0) > 0)
    {
        return;
    }
    let mut search = Search {
        c_keys,
        r_keys,
        fixed: links.to_vec(),
        current: links.to_vec(),
        r_used: r_used.to_vec(),
        c_left,
        r_free,
        best: None,
        nodes: 0,
    };
    search.dfs(0, None, 0);
    let (_, best) = search.best.expect("a complete alignment always exists");
    for (j, used) in r_used.iter_mut().enumerate() {
        *used = *used || best.contains(&Some(j));
    }
    links.copy_from_slice(&best);
}

struct Search<'a> {
    c_keys: &'a [&'a str],
    r_keys: &'a [&'a str],
    /// Links from earlier stages; these positions are not searched.
    fixed: Vec<Option<usize>>,
    current: Vec<Option<usize>>,
    r_used: Vec<bool>,
    /// Unaligned candidate tokens per key at or after the current position.
    c_left: HashMap<&'a str, usize>,
    /// Unused reference tokens per key.
    r_free: HashMap<&'a str, usize>,
    /// Chunk count and links of the best complete alignment so far.
    best: Option<(usize, Vec<Option<usize>>)>,
    nodes: usize,
}

impl Search<'_> {
    fn dfs(&mut self, i: usize, prev: Option<usize>, chunks: usize) {
        self.nodes += 1;
        if let Some((best, _)) = &self.best {
            if chunks >= *best || self.nodes > SEARCH_NODE_BUDGET {
                return;
            }
        }
        if i == self.c_keys.len() {
            self.best = Some((chunks, self.current.clone()));
            return;
        }
        if let Some(j) = self.fixed[i] {
            let next = chunks + usize::from(!continues(prev, j));
            self.dfs(i + 1, Some(j), next);
            return;
        }
        let key = self.c_keys[i];
        let free = self.r_free.get(key).copied().unwrap_or(0);
        let left = self.c_left[key];
        self.c_left.insert(key, left - 1);

        if free > 0 {
            // Continuing the current chunk first, then left to right.
            let preferred = prev
                .map(|p| p + 1)
                .filter(|&j| j < self.r_keys.len() && self.is_open(j, key));
            let options: Vec<usize> = preferred
                .into_iter()
                .chain(
                    (0..self.r_keys.len())
                        .filter(|&j| self.is_open(j, key) && Some(j) != preferred),
                )
                .collect();
            for j in options {
                self.r_used[j] = true;
                self.r_free.insert(key, free - 1);
                self.current[i] = Some(j);
                let next = chunks + usize::from(!continues(prev, j));
                self.dfs(i + 1, Some(j), next);
                self.current[i] = None;
                self.r_free.insert(key, free);
                self.r_used[j] = false;
            }
        }
        // Leaving this token unaligned keeps the matching maximal only if
        // the remaining candidate tokens of this key still exhaust the
        // free references.
        if left > free {
            self.dfs(i + 1, None, chunks);
        }
        self.c_left.insert(key, left);
    }

    fn is_open(&self, j: usize, key: &str) -> bool {
        !self.r_used[j] && self.r_keys[j] == key
    }
}

fn score_alignment<F: Scalar>(
    alignment: &Alignment,
    cand_len: usize,
    ref_len: usize,
    cfg: &MeteorConfig<F>,
) -> F {
    let m = alignment.matches();
    if m == 0 {
        return F::zero();
    }
    let matched = F::of_usize(m);
    let precision = matched / F::of_usize(cand_len);
    let recall = matched / F::of_usize(ref_len);
    let f_mean = precision * recall / (cfg.alpha * precision + (F::one() - cfg.alpha) * recall);
    let penalty = cfg.gamma * (F::of_usize(alignment.chunks) / matched).powf(cfg.theta);
    (F::one() - penalty) * f_mean
}

/// Best score over the references.
pub fn meteor<F: Scalar, R: Borrow<TokenSequence>>(
    c: &TokenSequence,
    refs: &[R],
    cfg: &MeteorConfig<F>,
) -> F {
    refs.iter()
        .map(|r| {
            let r = r.borrow();
            score_alignment(&align(c, r), c.len(), r.len(), cfg)
        })
        .fold(F::zero(), F::max)
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
    fn identity() {
        let s = t("a man rides a horse on a beach");
        let a = align(&s, &s);
        assert_eq!(a.matches(), s.len());
        assert_eq!(a.chunks, 1);
        let cfg = MeteorConfig::<f64>::default();
        let v = meteor(&s, std::slice::from_ref(&s), &cfg);
        assert!((v - (1.0 - 0.5 * (1.0f64 / 8.0).powi(3))).abs() < 1e-12);
    }

    #[test]
    fn reordered_needs_two_chunks() {
        let a = align(&t("the cat sat"), &t("cat sat the"));
        assert_eq!(a.matches(), 3);
        assert_eq!(a.chunks, 2);
        let v: f64 = meteor(
            &t("the cat sat"),
            &[t("cat sat the")],
            &MeteorConfig::default(),
        );
        assert!((v - (1.0 - 0.5 * (2.0f64 / 3.0).powi(3))).abs() < 1e-12);
    }

    #[test]
    fn no_matches() {
        let v: f64 = meteor(&t("a b"), &[t("c d")], &MeteorConfig::default());
        assert_eq!(v, 0.0);
        let v: f64 = meteor(&t(""), &[t("c d")], &MeteorConfig::default());
        assert_eq!(v, 0.0);
    }

    #[test]
    fn stem_stage_matches_inflections() {
        let a = align(&t("dogs running"), &t("dog runs"));
        // dogs~dog by stem; running -> run, runs -> run
        assert_eq!(a.matches(), 2);
        assert_eq!(a.chunks, 1);
        // exact beats stem: "cat" pairs with "cat", "cats" left for "cats"
        let b = align(&t("cats cat"), &t("cat cats"));
        assert_eq!(b.pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn repeated_words_prefer_contiguous_alignment() {
        let a = align(&t("a dog and a cat"), &t("a cat and a dog"));
        assert_eq!(a.matches(), 5);
        let a2 = align(&t("a b a b a b"), &t("a b a b a b"));
        assert_eq!(a2.chunks, 1);
    }

    #[test]
    fn config_validation() {
        assert!(MeteorConfig::<f64>::default().validate().is_ok());
        let bad = MeteorConfig {
            alpha: 1.5,
            gamma: 0.5,
            theta: 3.0,
        };
        assert!(bad.validate().is_err());
    }

    /// Every maximum one-to-one matching over equal tokens, minimum chunks.
    fn brute_min_chunks(c: &[String], r: &[String]) -> (usize, usize) {
        fn rec(
            i: usize,
            c: &[String],
            r: &[String],
            used: &mut Vec<bool>,
            links: &mut Vec<Option<usize>>,
            best: &mut (usize, usize),
        ) {
            if i == c.len() {
                let m = links.iter().flatten().count();
                let ch = count_chunks(links);
                if m > best.0 || (m == best.0 && ch < best.1) {
                    *best = (m, ch);
                }
                return;
            }
            links[i] = None;
            rec(i + 1, c, r, used, links, best);
            for j in 0..r.len() {
                if !used[j] && c[i] == r[j] {
                    used[j] = true;
                    links[i] = Some(j);
                    rec(i + 1, c, r, used, links, best);
                    links[i] = None;
                    used[j] = false;
                }
            }
        }
        let mut best = (0, usize::MAX);
        rec(
            0,
            c,
            r,
            &mut vec![false; r.len()],
            &mut vec![None; c.len()],
            &mut best,
        );
        if best.0 == 0 {
            (0, 0)
        } else {
            best
        }
    }

    proptest! {
        #[test]
        fn matches_exhaustive_search(
            c in prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 0..=6),
            r in prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 0..=6),
        ) {
            let c = TokenSequence::from_tokens(c, false);
            let r = TokenSequence::from_tokens(r, false);
            let a = align(&c, &r);
            prop_assert_eq!((a.matches(), a.chunks), brute_min_chunks(c.tokens(), r.tokens()));
        }
    }
}
