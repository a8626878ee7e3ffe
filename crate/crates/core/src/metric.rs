//! Named, configured scorers usable by the harness and the CLI.

use std::fmt;
use std::sync::Arc;

use crate::baselines::{self, BleuConfig, MeteorConfig, DEFAULT_BETA, DEFAULT_MAX_GAP};
use crate::cider::{self, CiderConfig, CiderVariant};
use crate::corpus::{DfStats, RefCorpus};
use crate::textnorm::{TokenSequence, MAX_ORDER};
use crate::{Error, Result};

/// A sentence scorer with a fixed tokenization requirement.
pub trait Metric: Send + Sync {
    fn name(&self) -> &str;

    /// Whether candidates and references must be stemmed before scoring.
    fn stemming(&self) -> bool;

    fn score(&self, candidate: &TokenSequence, refs: &[&TokenSequence]) -> f64;
}

/// Scores every candidate the same; useful as a harness baseline.
#[derive(Debug, Clone)]
pub struct ConstantMetric(pub f64);

impl Metric for ConstantMetric {
    fn name(&self) -> &str {
        "constant"
    }

    fn stemming(&self) -> bool {
        false
    }

    fn score(&self, _: &TokenSequence, _: &[&TokenSequence]) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    Cider(CiderVariant),
    CiderD,
    Bleu,
    RougeN,
    RougeL,
    RougeS,
    MeteorLite,
    Constant,
}

pub const REGISTERED_METRICS: &[&str] = &[
    "cider",
    "cider-d",
    "cider-exp",
    "cider-max",
    "cider-no-idf",
    "bleu",
    "rouge-n",
    "rouge-l",
    "rouge-s",
    "meteor-lite",
    "constant",
];

impl MetricKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "cider" => MetricKind::Cider(CiderVariant::Standard),
            "cider-exp" => MetricKind::Cider(CiderVariant::Exp),
            "cider-max" => MetricKind::Cider(CiderVariant::Max),
            "cider-no-idf" => MetricKind::Cider(CiderVariant::NoIdf),
            "cider-d" => MetricKind::CiderD,
            "bleu" => MetricKind::Bleu,
            "rouge-n" => MetricKind::RougeN,
            "rouge-l" => MetricKind::RougeL,
            "rouge-s" => MetricKind::RougeS,
            "meteor-lite" => MetricKind::MeteorLite,
            "constant" => MetricKind::Constant,
            _ => {
                return Err(Error::UnknownMetric {
                    name: name.to_string(),
                    registered: REGISTERED_METRICS.to_vec(),
                })
            }
        })
    }

    fn base_name(self) -> &'static str {
        match self {
            MetricKind::Cider(CiderVariant::Standard) => "cider",
            MetricKind::Cider(CiderVariant::Exp) => "cider-exp",
            MetricKind::Cider(CiderVariant::Max) => "cider-max",
            MetricKind::Cider(CiderVariant::NoIdf) => "cider-no-idf",
            MetricKind::CiderD => "cider-d",
            MetricKind::Bleu => "bleu",
            MetricKind::RougeN => "rouge-n",
            MetricKind::RougeL => "rouge-l",
            MetricKind::RougeS => "rouge-s",
            MetricKind::MeteorLite => "meteor-lite",
            MetricKind::Constant => "constant",
        }
    }

    /// Stemming used when the caller does not override it. CIDEr-D never
    /// stems; METEOR matches stems internally.
    pub fn default_stemming(self) -> bool {
        match self {
            MetricKind::Cider(_)
            | MetricKind::Bleu
            | MetricKind::RougeN
            | MetricKind::RougeL
            | MetricKind::RougeS => true,
            MetricKind::CiderD | MetricKind::MeteorLite | MetricKind::Constant => false,
        }
    }
}

/// Metric name plus parameters, before it is bound to a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub kind: MetricKind,
    /// Max order for CIDEr/BLEU, the order for ROUGE_N.
    pub n: Option<usize>,
    pub sigma: Option<f64>,
    /// Disables stemming for metrics that stem by default.
    pub no_stem: bool,
    pub meteor: MeteorConfig<f64>,
    pub constant: f64,
}

impl MetricSpec {
    pub fn new(kind: MetricKind) -> Self {
        Self {
            kind,
            n: None,
            sigma: None,
            no_stem: false,
            meteor: MeteorConfig::default(),
            constant: 0.5,
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Ok(Self::new(MetricKind::parse(name)?))
    }

    pub fn with_n(mut self, n: usize) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn with_no_stem(mut self, no_stem: bool) -> Self {
        self.no_stem = no_stem;
        self
    }

    pub fn stemming(&self) -> bool {
        self.kind.default_stemming() && !self.no_stem
    }

    fn order(&self, default: usize) -> Result<usize> {
        let n = self.n.unwrap_or(default);
        if (1..=MAX_ORDER).contains(&n) {
            Ok(n)
        } else {
            Err(Error::InvalidOrder(n))
        }
    }

    /// Report label, e.g. `bleu-4`, `rouge-1`, `cider-d`.
    pub fn label(&self) -> String {
        let base = self.kind.base_name();
        let mut label = match self.kind {
            MetricKind::Bleu => format!("bleu-{}", self.n.unwrap_or(MAX_ORDER)),
            MetricKind::RougeN => format!("rouge-{}", self.n.unwrap_or(1)),
            MetricKind::Cider(_) | MetricKind::CiderD => match self.n {
                Some(n) if n != MAX_ORDER => format!("{base}-{n}"),
                _ => base.to_string(),
            },
            _ => base.to_string(),
        };
        if self.no_stem && self.kind.default_stemming() {
            label.push_str("-nostem");
        }
        label
    }

    /// Binds this configuration to a reference corpus. CIDEr kinds build their IDF
    /// table from the corpus unless `idf` supplies a matching cached one.
    pub fn build(&self, corpus: &RefCorpus, idf: Option<Arc<DfStats>>) -> Result<Box<dyn Metric>> {
        let stem = self.stemming();
        let name = self.label();
        let label = name.clone();
        let stats = |max_order: usize| -> Result<Arc<DfStats>> {
            match &idf {
                Some(cached) => {
                    if cached.stemmed() != stem {
                        return Err(Error::CacheMismatch(format!(
                            "cached table stemming={} but {label} needs stemming={stem}",
                            cached.stemmed()
                        )));
                    }
                    if cached.max_order() < max_order {
                        return Err(Error::CacheMismatch(format!(
                            "cached table holds orders up to {}, {label} needs {max_order}",
                            cached.max_order()
                        )));
                    }
                    Ok(Arc::clone(cached))
                }
                None => Ok(Arc::new(DfStats::build(&corpus.with_stemming(stem))?)),
            }
        };
        let metric: Box<dyn Metric> = match self.kind {
            MetricKind::Cider(variant) => {
                let n = self.order(MAX_ORDER)?;
                let config = CiderConfig::with_max_order(n).variant(variant);
                config.validate()?;
                Box::new(CiderMetric {
                    name,
                    stem,
                    dispersion: false,
                    stats: stats(n)?,
                    config,
                })
            }
            MetricKind::CiderD => {
                let n = self.order(MAX_ORDER)?;
                let mut config = CiderConfig::with_max_order(n);
                if let Some(sigma) = self.sigma {
                    config = config.sigma(sigma);
                }
                config.validate()?;
                Box::new(CiderMetric {
                    name,
                    stem,
                    dispersion: true,
                    stats: stats(n)?,
                    config,
                })
            }
            MetricKind::Bleu => Box::new(Baseline {
                name,
                stem,
                kind: BaselineKind::Bleu(BleuConfig::with_max_order(self.order(MAX_ORDER)?)),
            }),
            MetricKind::RougeN => Box::new(Baseline {
                name,
                stem,
                kind: BaselineKind::RougeN(self.order(1)?),
            }),
            MetricKind::RougeL => Box::new(Baseline {
                name,
                stem,
                kind: BaselineKind::RougeL,
            }),
            MetricKind::RougeS => Box::new(Baseline {
                name,
                stem,
                kind: BaselineKind::RougeS,
            }),
            MetricKind::MeteorLite => {
                self.meteor.validate()?;
                Box::new(Baseline {
                    name,
                    stem,
                    kind: BaselineKind::Meteor(self.meteor.clone()),
                })
            }
            MetricKind::Constant => Box::new(ConstantMetric(self.constant)),
        };
        Ok(metric)
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

struct CiderMetric {
    name: String,
    stem: bool,
    /// CIDEr-D instead of CIDEr.
    dispersion: bool,
    stats: Arc<DfStats>,
    config: CiderConfig<f64>,
}

impl Metric for CiderMetric {
    fn name(&self) -> &str {
        &self.name
    }

    fn stemming(&self) -> bool {
        self.stem
    }

    fn score(&self, candidate: &TokenSequence, refs: &[&TokenSequence]) -> f64 {
        if self.dispersion {
            cider::cider_d(candidate, refs, self.stats.as_ref(), &self.config)
        } else {
            cider::cider(candidate, refs, self.stats.as_ref(), &self.config)
        }
    }
}

enum BaselineKind {
    Bleu(BleuConfig<f64>),
    RougeN(usize),
    RougeL,
    RougeS,
    Meteor(MeteorConfig<f64>),
}

struct Baseline {
    name: String,
    stem: bool,
    kind: BaselineKind,
}

impl Metric for Baseline {
    fn name(&self) -> &str {
        &self.name
    }

    fn stemming(&self) -> bool {
        self.stem
    }

    fn score(&self, candidate: &TokenSequence, refs: &[&TokenSequence]) -> f64 {
        match &self.kind {
            BaselineKind::Bleu(cfg) => baselines::bleu(candidate, refs, cfg),
            BaselineKind::RougeN(n) => baselines::rouge_n(candidate, refs, *n),
            BaselineKind::RougeL => baselines::rouge_l(candidate, refs, DEFAULT_BETA),
            BaselineKind::RougeS => {
                baselines::rouge_s(candidate, refs, DEFAULT_BETA, DEFAULT_MAX_GAP)
            }
            BaselineKind::Meteor(cfg) => baselines::meteor(candidate, refs, cfg),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::textnorm::tokenize_with;

    fn corpus() -> RefCorpus {
        RefCorpus::from_entries(
            vec![
                (
                    "img1".into(),
                    vec!["two cats sitting".into(), "a cat sits".into()],
                ),
                ("img2".into(), vec!["a dog runs".into()]),
            ],
            false,
        )
        .unwrap()
    }

    #[test]
    fn unknown_metric_lists_registry() {
        let err = MetricSpec::parse("bleurt").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bleurt") && msg.contains("cider-d") && msg.contains("meteor-lite"));
    }

    #[test]
    fn stemming_requirements() {
        assert!(MetricSpec::parse("cider").unwrap().stemming());
        assert!(!MetricSpec::parse("cider-d").unwrap().stemming());
        assert!(!MetricSpec::parse("cider")
            .unwrap()
            .with_no_stem(true)
            .stemming());
        assert!(!MetricSpec::parse("cider-d")
            .unwrap()
            .with_no_stem(true)
            .stemming());
    }

    #[test]
    fn labels() {
        assert_eq!(
            MetricSpec::parse("bleu").unwrap().with_n(1).label(),
            "bleu-1"
        );
        assert_eq!(MetricSpec::parse("rouge-n").unwrap().label(), "rouge-1");
        assert_eq!(
            MetricSpec::parse("cider").unwrap().with_n(1).label(),
            "cider-1"
        );
        assert_eq!(MetricSpec::parse("cider-d").unwrap().label(), "cider-d");
    }

    #[test]
    fn builds_every_registered_metric() {
        let corpus = corpus();
        for name in REGISTERED_METRICS {
            let spec = MetricSpec::parse(name).unwrap();
            let metric = spec.build(&corpus, None).unwrap();
            let stem = metric.stemming();
            let refs = corpus.with_stemming(stem);
            let refs: Vec<&TokenSequence> = refs.references("img1").unwrap().iter().collect();
            let cand = tokenize_with("a cat sits", stem);
            let s = metric.score(&cand, &refs);
            assert!(s.is_finite() && s >= 0.0, "{name}: {s}");
        }
    }

    #[test]
    fn bad_order_is_rejected() {
        let spec = MetricSpec::parse("bleu").unwrap().with_n(7);
        assert!(matches!(
            spec.build(&corpus(), None),
            Err(Error::InvalidOrder(7))
        ));
    }

    #[test]
    fn cache_stemming_must_match() {
        let unstemmed = Arc::new(DfStats::build(&corpus()).unwrap());
        let spec = MetricSpec::parse("cider").unwrap();
        assert!(matches!(
            spec.build(&corpus(), Some(Arc::clone(&unstemmed))),
            Err(Error::CacheMismatch(_))
        ));
        assert!(MetricSpec::parse("cider-d")
            .unwrap()
            .build(&corpus(), Some(unstemmed))
            .is_ok());
    }
}
