use std::collections::{BTreeMap, BTreeSet};

use super::RefCorpus;
use crate::textnorm::{check_order, NGram, MAX_ORDER};
use crate::{Error, Result, Scalar};

/// Anything that can weight an n-gram by its rarity.
pub trait IdfSource<F: Scalar> {
    fn idf(&self, gram: &[String]) -> F;
}

/// Document frequencies over a reference corpus, where a document is an
/// image (the pool of its reference sentences).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfStats {
    pub(super) image_count: usize,
    pub(super) stemmed: bool,
    pub(super) df: Vec<BTreeMap<NGram, usize>>,
}

impl DfStats {
    /// Document frequencies for orders 1 through 4.
    pub fn build(corpus: &RefCorpus) -> Result<Self> {
        Self::build_orders(corpus, MAX_ORDER)
    }

    pub fn build_orders(corpus: &RefCorpus, max_order: usize) -> Result<Self> {
        check_order(max_order)?;
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let mut stats = DfStats {
            image_count: corpus.len(),
            stemmed: corpus.stemmed(),
            df: Vec::with_capacity(max_order),
        };
        for n in 1..=max_order {
            stats.add_order(corpus, n);
        }
        Ok(stats)
    }

    fn add_order(&mut self, corpus: &RefCorpus, n: usize) {
        let mut table: BTreeMap<NGram, usize> = BTreeMap::new();
        for (_, refs) in corpus.images() {
            // Each image counts once no matter how many references repeat it.
            let seen: BTreeSet<&NGram> = (0..refs.len())
                .flat_map(|i| refs.counts(i, n).counts().keys())
                .collect();
            for gram in seen {
                *table.entry(gram.clone()).or_insert(0) += 1;
            }
        }
        self.df.push(table);
    }

    pub(super) fn from_parts(
        image_count: usize,
        stemmed: bool,
        df: Vec<BTreeMap<NGram, usize>>,
    ) -> Self {
        Self {
            image_count,
            stemmed,
            df,
        }
    }

    /// `|I|`.
    pub fn image_count(&self) -> usize {
        self.image_count
    }

    pub fn max_order(&self) -> usize {
        self.df.len()
    }

    pub fn stemmed(&self) -> bool {
        self.stemmed
    }

    pub fn table(&self, n: usize) -> Option<&BTreeMap<NGram, usize>> {
        n.checked_sub(1).and_then(|i| self.df.get(i))
    }

    /// Number of images whose references contain `gram`; 0 when unseen.
    pub fn df(&self, gram: &[String]) -> usize {
        self.table(gram.len())
            .and_then(|t| t.get(gram))
            .copied()
            .unwrap_or(0)
    }
}

impl<F: Scalar> IdfSource<F> for DfStats {
    /// `ln(|I| / max(1, df))`; unseen n-grams get the maximum weight `ln |I|`.
    fn idf(&self, gram: &[String]) -> F {
        let df = self.df(gram).max(1);
        (F::of_usize(self.image_count) / F::of_usize(df)).ln()
    }
}

/// Every n-gram weighs 1 (TF-only vectors).
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformIdf;

impl<F: Scalar> IdfSource<F> for UniformIdf {
    fn idf(&self, _gram: &[String]) -> F {
        F::one()
    }
}

/// Multiplies another source's weights by a constant, e.g. to change the
/// logarithm base.
#[derive(Debug, Clone, Copy)]
pub struct ScaledIdf<'a, S, F> {
    pub inner: &'a S,
    pub factor: F,
}

impl<F: Scalar, S: IdfSource<F>> IdfSource<F> for ScaledIdf<'_, S, F> {
    fn idf(&self, gram: &[String]) -> F {
        self.inner.idf(gram) * self.factor
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::tests::toy;
    use proptest::prelude::*;

    fn g(words: &[&str]) -> NGram {
        words.iter().map(|w| w.to_string()).collect()
    }

    #[test]
    fn toy_document_frequencies() {
        let stats = DfStats::build(&toy()).unwrap();
        assert_eq!(stats.image_count(), 2);
        assert_eq!(stats.df(&g(&["a"])), 2);
        assert_eq!(stats.df(&g(&["cat"])), 1);
        assert_eq!(stats.df(&g(&["cat", "sits"])), 1);
        assert_eq!(stats.df(&g(&["a", "cat"])), 1);
        assert_eq!(stats.df(&g(&["zebra"])), 0);
    }

    #[test]
    fn toy_idf() {
        let stats = DfStats::build(&toy()).unwrap();
        let ln2 = 2f64.ln();
        assert_eq!(IdfSource::<f64>::idf(&stats, &g(&["a"])), 0.0);
        assert!((IdfSource::<f64>::idf(&stats, &g(&["cat"])) - ln2).abs() < 1e-15);
        assert!((IdfSource::<f64>::idf(&stats, &g(&["zebra"])) - ln2).abs() < 1e-15);
        let scaled = ScaledIdf {
            inner: &stats,
            factor: 10.0,
        };
        assert!((scaled.idf(&g(&["cat"])) - 10.0 * ln2).abs() < 1e-14);
        assert_eq!(IdfSource::<f32>::idf(&UniformIdf, &g(&["a"])), 1.0);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        let empty = RefCorpus::from_entries(vec![], false).unwrap();
        assert!(matches!(DfStats::build(&empty), Err(Error::EmptyCorpus)));
        assert!(matches!(
            DfStats::build_orders(&toy(), 5),
            Err(Error::InvalidOrder(5))
        ));
    }

    /// Literal double sum: df(g) = sum over images of min(1, sum over refs of h_g).
    fn brute_df(images: &[Vec<Vec<String>>], gram: &[String]) -> usize {
        images
            .iter()
            .map(|refs| {
                let occurrences: usize = refs
                    .iter()
                    .map(|r| r.windows(gram.len()).filter(|w| *w == gram).count())
                    .sum();
                occurrences.min(1)
            })
            .sum()
    }

    fn corpus_strategy() -> impl Strategy<Value = Vec<Vec<Vec<String>>>> {
        let sentence = prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d"]), 0..5)
            .prop_map(|ws| ws.into_iter().map(String::from).collect::<Vec<_>>());
        prop::collection::vec(prop::collection::vec(sentence, 1..4), 1..6)
    }

    fn to_corpus(images: &[Vec<Vec<String>>]) -> RefCorpus {
        RefCorpus::from_entries(
            images
                .iter()
                .enumerate()
                .map(|(i, refs)| {
                    (
                        format!("img{i}"),
                        refs.iter().map(|r| r.join(" ")).collect(),
                    )
                })
                .collect(),
            false,
        )
        .unwrap()
    }

    proptest! {
        #[test]
        fn df_matches_literal_double_sum(images in corpus_strategy()) {
            let stats = DfStats::build(&to_corpus(&images)).unwrap();
            for n in 1..=4 {
                for (gram, &df) in stats.table(n).unwrap() {
                    prop_assert!(df >= 1 && df <= stats.image_count());
                    prop_assert_eq!(df, brute_df(&images, gram));
                }
            }
            // every n-gram that occurs anywhere is stored
            for refs in &images {
                for r in refs {
                    for n in 1..=4usize {
                        for w in r.windows(n) {
                            prop_assert_eq!(stats.df(w), brute_df(&images, w));
                        }
                    }
                }
            }
        }

        #[test]
        fn duplicating_a_reference_keeps_df(images in corpus_strategy(), pick in 0usize..100) {
            let mut dup = images.clone();
            let i = pick % dup.len();
            let r = dup[i][0].clone();
            dup[i].push(r);
            prop_assert_eq!(
                DfStats::build(&to_corpus(&images)).unwrap(),
                DfStats::build(&to_corpus(&dup)).unwrap()
            );
        }

        #[test]
        fn adding_an_image_increments_df(images in corpus_strategy()) {
            let before = DfStats::build(&to_corpus(&images)).unwrap();
            let mut more = images.clone();
            more.push(vec![vec!["a".to_string(), "b".to_string()]]);
            let after = DfStats::build(&to_corpus(&more)).unwrap();
            prop_assert_eq!(after.image_count(), before.image_count() + 1);
            for gram in [g(&["a"]), g(&["b"]), g(&["a", "b"])] {
                prop_assert_eq!(after.df(&gram), before.df(&gram) + 1);
            }
        }

        #[test]
        fn idf_is_nonnegative_and_monotone(images in corpus_strategy()) {
            let stats = DfStats::build(&to_corpus(&images)).unwrap();
            let mut pairs: Vec<(usize, f64)> = stats
                .table(1)
                .unwrap()
                .keys()
                .map(|k| (stats.df(k), IdfSource::<f64>::idf(&stats, k)))
                .collect();
            pairs.sort_by_key(|a| a.0);
            for w in pairs.windows(2) {
                prop_assert!(w[1].1 <= w[0].1);
            }
            prop_assert!(pairs.iter().all(|p| p.1 >= 0.0));
        }
    }
}
