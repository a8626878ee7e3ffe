//! Command-line front end. Every command writes one JSON document (or an
//! aligned text table) whose bytes depend only on the inputs and the seed.

mod args;
mod table;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

pub use args::{
    AblateArgs, BuildIdfArgs, Cli, Command, Common, CompareArgs, EvalPairsArgs, Format,
    JudgmentSource, MetricArgs, RankArgs, ScoreArgs,
};
use table::{fixed, Table};

use crate::corpus::{read_sentence_map, DfStats, RefCorpus};
use crate::harness::{
    self, load_pairs, load_raw_votes, PairJudgment, PairKind, SystemOutputs, VoteReduction,
};
use crate::metric::{Metric, MetricKind, MetricSpec};
use crate::textnorm::tokenize_with;
use crate::{Error, Result};

/// Runs one parsed invocation on a pool bounded by `--jobs`.
pub fn run(cli: Cli) -> Result<()> {
    let jobs = match &cli.command {
        Command::BuildIdf(a) => a.common.jobs,
        Command::Score(a) => a.common.jobs,
        Command::EvalPairs(a) => a.common.jobs,
        Command::Ablate(a) => a.common.jobs,
        Command::Rank(a) => a.common.jobs,
        Command::CompareSystems(a) => a.common.jobs,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(Error::Validation("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Validation(format!("cannot start worker pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::BuildIdf(a) => build_idf(&a),
        Command::Score(a) => score(&a),
        Command::EvalPairs(a) => eval_pairs(&a),
        Command::Ablate(a) => ablate(&a),
        Command::Rank(a) => rank(&a),
        Command::CompareSystems(a) => compare_systems(&a),
    })
}

/// Machine-readable error document printed on stderr by the binary.
pub fn error_json(err: &Error) -> String {
    let mut body = json!({ "kind": err.kind(), "message": err.to_string() });
    if let Error::UnknownMetric { registered, .. } = err {
        body["registered"] = json!(registered);
    }
    if let Error::CoverageMismatch(missing) = err {
        body["missing"] = json!(missing);
    }
    json!({ "error": body }).to_string()
}

/// Exit status for a failed run: 2 for usage problems, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::UnknownMetric { .. } | Error::InvalidOrder(_) | Error::Validation(_) => 2,
        _ => 1,
    }
}

fn require_file(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
        })
    }
}

fn emit(common: &Common, json: &impl Serialize, table: impl FnOnce() -> String) -> Result<()> {
    let text = match common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(json)
                .map_err(|e| Error::Validation(format!("cannot serialize report: {e}")))?;
            s.push('\n');
            s
        }
        Format::Table => table(),
    };
    write_out(common.out.as_deref(), &text)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn load_corpus(common: &Common) -> Result<RefCorpus> {
    require_file(&common.corpus)?;
    RefCorpus::load(&common.corpus, false)
}

fn specs(args: &MetricArgs) -> Result<Vec<MetricSpec>> {
    let mut out: Vec<MetricSpec> = Vec::new();
    for name in &args.metrics {
        let mut spec = MetricSpec::parse(name)?.with_no_stem(args.no_stem);
        if let Some(n) = args.n {
            spec = spec.with_n(n);
        }
        if let Some(sigma) = args.sigma {
            spec = spec.with_sigma(sigma);
        }
        if out.iter().any(|s| s.label() == spec.label()) {
            return Err(Error::Validation(format!(
                "metric `{}` requested twice",
                spec.label()
            )));
        }
        out.push(spec);
    }
    Ok(out)
}

fn build_metrics(args: &MetricArgs, corpus: &RefCorpus) -> Result<Vec<Box<dyn Metric>>> {
    specs(args)?
        .iter()
        .map(|spec| spec.build(corpus, None))
        .collect()
}

/// First sentence per image of a corpus-format file.
fn load_candidates(path: &Path) -> Result<BTreeMap<String, String>> {
    require_file(path)?;
    let mut out = BTreeMap::new();
    for (id, sentences) in read_sentence_map(path)? {
        if sentences.len() > 1 {
            log::warn!(
                "{}: image `{id}` has {} sentences; scoring the first",
                path.display(),
                sentences.len()
            );
        }
        let first = sentences.into_iter().next().unwrap_or_default();
        if first.trim().is_empty() {
            log::warn!("{}: empty candidate for image `{id}`", path.display());
        }
        if out.insert(id.clone(), first).is_some() {
            return Err(Error::Validation(format!("duplicate image id `{id}`")));
        }
    }
    Ok(out)
}

fn load_judgments(
    source: &JudgmentSource,
    kind: Option<&str>,
) -> Result<(Vec<PairJudgment>, Option<VoteReduction>)> {
    let (mut pairs, reduction) = match (&source.pairs, &source.votes) {
        (Some(path), _) => {
            require_file(path)?;
            (load_pairs(path)?, None)
        }
        (None, Some(path)) => {
            require_file(path)?;
            let mut r = load_raw_votes(path)?;
            (std::mem::take(&mut r.pairs), Some(r))
        }
        (None, None) => {
            return Err(Error::Validation(
                "one of --pairs or --votes is required".into(),
            ))
        }
    };
    if let Some(kind) = kind {
        let kind = PairKind::parse(kind)?;
        pairs.retain(|p| p.kind == Some(kind));
        if pairs.is_empty() {
            log::warn!("no pairs of kind {kind}");
        }
    }
    Ok((pairs, reduction))
}

fn build_idf(args: &BuildIdfArgs) -> Result<()> {
    let corpus = RefCorpus::load(
        {
            require_file(&args.common.corpus)?;
            &args.common.corpus
        },
        !args.no_stem,
    )?;
    let stats = DfStats::build_orders(&corpus, args.n)?;
    match args.common.format {
        Format::Json => write_out(
            args.common.out.as_deref(),
            &format!("{}\n", stats.to_json()),
        ),
        Format::Table => {
            if let Some(path) = &args.common.out {
                stats.save(path)?;
            }
            let mut t = Table::new(["order", "distinct n-grams"]);
            for n in 1..=stats.max_order() {
                let size = stats.table(n).map_or(0, |t| t.len());
                t.row(vec![n.to_string(), size.to_string()]);
            }
            let text = format!(
                "images: {}\nstemmed: {}\n{}",
                stats.image_count(),
                stats.stemmed(),
                t.render()
            );
            if args.common.out.is_some() {
                eprint!("{text}");
                Ok(())
            } else {
                write_out(None, &text)
            }
        }
    }
}

#[derive(Serialize)]
struct ScoredImage {
    image_id: String,
    candidate: String,
    scores: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tokens: Option<BTreeMap<String, Vec<String>>>,
}

#[derive(Serialize)]
struct ScoreReport {
    metrics: Vec<String>,
    images: Vec<ScoredImage>,
    mean: BTreeMap<String, f64>,
}

fn score(args: &ScoreArgs) -> Result<()> {
    let corpus = load_corpus(&args.common)?;
    let candidates = load_candidates(&args.candidates)?;
    if let Some(missing) = candidates.keys().find(|id| corpus.image(id).is_none()) {
        return Err(Error::UnknownImage(missing.clone()));
    }
    if let Some(path) = &args.idf {
        require_file(path)?;
    }
    let mut metrics = Vec::new();
    for spec in specs(&args.metric)? {
        let cached = match (&args.idf, spec.kind) {
            (Some(path), MetricKind::Cider(_) | MetricKind::CiderD) => {
                Some(Arc::new(DfStats::load(path, spec.stemming())?))
            }
            _ => None,
        };
        metrics.push(spec.build(&corpus, cached)?);
    }
    let normalized: Vec<_> = metrics
        .iter()
        .map(|m| corpus.with_stemming(m.stemming()))
        .collect();

    let ids: Vec<&String> = candidates.keys().collect();
    use rayon::prelude::*;
    let images: Vec<ScoredImage> = ids
        .par_iter()
        .map(|id| {
            let candidate = &candidates[*id];
            let mut scores = BTreeMap::new();
            let mut tokens = BTreeMap::new();
            for (metric, refs) in metrics.iter().zip(&normalized) {
                let c = tokenize_with(candidate, metric.stemming());
                let refs: Vec<_> = refs.references(id).expect("checked above").iter().collect();
                scores.insert(metric.name().to_string(), metric.score(&c, &refs));
                tokens.insert(metric.name().to_string(), c.tokens().to_vec());
            }
            ScoredImage {
                image_id: (*id).clone(),
                candidate: candidate.clone(),
                scores,
                tokens: args.dump_tokens.then_some(tokens),
            }
        })
        .collect();

    let names: Vec<String> = metrics.iter().map(|m| m.name().to_string()).collect();
    let mean = names
        .iter()
        .map(|name| {
            let total: f64 = images.iter().map(|i| i.scores[name]).sum();
            let avg = if images.is_empty() {
                0.0
            } else {
                total / images.len() as f64
            };
            (name.clone(), avg)
        })
        .collect();
    let report = ScoreReport {
        metrics: names,
        images,
        mean,
    };
    emit(&args.common, &report, || {
        let mut t = Table::new(std::iter::once("image".to_string()).chain(report.metrics.clone()));
        for img in &report.images {
            let mut row = vec![img.image_id.clone()];
            row.extend(report.metrics.iter().map(|m| fixed(img.scores[m])));
            t.row(row);
        }
        let mut row = vec!["mean".to_string()];
        row.extend(report.metrics.iter().map(|m| fixed(report.mean[m])));
        t.row(row);
        t.render()
    })
}

fn reduction_json(reduction: &Option<VoteReduction>) -> Value {
    match reduction {
        Some(r) => json!({
            "tied_triplets": r.tied_triplets,
            "tied_pairs": r.tied_pairs,
        }),
        None => Value::Null,
    }
}

fn eval_pairs(args: &EvalPairsArgs) -> Result<()> {
    let corpus = load_corpus(&args.common)?;
    let (pairs, reduction) = load_judgments(&args.source, args.kind.as_deref())?;
    let reports = build_metrics(&args.metric, &corpus)?
        .iter()
        .map(|m| harness::pair_accuracy(m.as_ref(), &pairs, &corpus, args.refs, args.seed))
        .collect::<Result<Vec<_>>>()?;
    let doc = json!({
        "refs_per_image": args.refs,
        "seed": args.seed,
        "kind_filter": args.kind.as_ref().map(|k| k.to_ascii_uppercase()),
        "vote_reduction": reduction_json(&reduction),
        "reports": reports,
    });
    emit(&args.common, &doc, || {
        let kinds: Vec<String> = reports
            .iter()
            .flat_map(|r| r.per_kind.keys().cloned())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let header = ["metric".to_string(), "overall".to_string()]
            .into_iter()
            .chain(kinds.iter().cloned())
            .chain(["ties".to_string(), "pairs".to_string()]);
        let mut t = Table::new(header);
        for r in &reports {
            let mut row = vec![r.metric.clone(), fixed(r.overall)];
            row.extend(kinds.iter().map(|k| {
                r.per_kind
                    .get(k)
                    .map_or("-".to_string(), |a| fixed(a.accuracy))
            }));
            row.push(r.tie_count.to_string());
            row.push(r.pairs_evaluated.to_string());
            t.row(row);
        }
        format!(
            "refs per image: {}  seed: {}\n{}",
            args.refs,
            args.seed,
            t.render()
        )
    })
}

fn ablate(args: &AblateArgs) -> Result<()> {
    let corpus = load_corpus(&args.common)?;
    let (pairs, _) = load_judgments(&args.source, args.kind.as_deref())?;
    let mut curves = Vec::new();
    for metric in build_metrics(&args.metric, &corpus)? {
        let points = harness::ref_count_ablation(
            metric.as_ref(),
            &pairs,
            &corpus,
            &args.counts,
            args.trials,
            args.seed,
        )?;
        curves.push((metric.name().to_string(), points));
    }
    let doc = json!({
        "seed": args.seed,
        "trials": args.trials,
        "kind_filter": args.kind.as_ref().map(|k| k.to_ascii_uppercase()),
        "curves": curves
            .iter()
            .map(|(name, points)| json!({ "metric": name, "points": points }))
            .collect::<Vec<_>>(),
    });
    emit(&args.common, &doc, || {
        let mut t = Table::new(["metric", "refs", "mean", "std"]);
        for (name, points) in &curves {
            for p in points {
                t.row(vec![
                    name.clone(),
                    p.count.to_string(),
                    fixed(p.mean),
                    fixed(p.std),
                ]);
            }
        }
        t.render()
    })
}

fn correlation_json(result: Result<f64>) -> Value {
    match result {
        Ok(v) => json!(v),
        Err(e) => json!({ "undefined": e.to_string() }),
    }
}

fn rank(args: &RankArgs) -> Result<()> {
    let corpus = load_corpus(&args.common)?;
    let metrics = build_metrics(&args.metric, &corpus)?;
    let mut rankings = Vec::new();
    for metric in &metrics {
        rankings.push((
            metric.name().to_string(),
            harness::rank_references(&corpus, &args.image, metric.as_ref())?,
        ));
    }
    let spearman = if rankings.len() == 2 {
        let by_index = |r: &[harness::RankedSentence]| {
            let mut v = vec![0.0; r.len()];
            for s in r {
                v[s.index] = s.score;
            }
            v
        };
        let a = by_index(&rankings[0].1);
        let b = by_index(&rankings[1].1);
        Some(correlation_json(harness::spearman_rho(&a, &b)))
    } else {
        None
    };
    let mut doc = json!({
        "image_id": args.image,
        "rankings": rankings
            .iter()
            .map(|(name, ranked)| json!({
                "metric": name,
                "ranking": ranked
                    .iter()
                    .enumerate()
                    .map(|(pos, s)| json!({
                        "rank": pos + 1,
                        "index": s.index,
                        "score": s.score,
                        "sentence": s.sentence,
                    }))
                    .collect::<Vec<_>>(),
            }))
            .collect::<Vec<_>>(),
    });
    if let Some(rho) = &spearman {
        doc["spearman_rho"] = rho.clone();
    }
    emit(&args.common, &doc, || {
        let mut out = String::new();
        for (name, ranked) in &rankings {
            out.push_str(&format!("{name} on {}\n", args.image));
            let mut t = Table::new(["rank", "score", "index", "sentence"]);
            for (pos, s) in ranked.iter().enumerate() {
                t.row(vec![
                    (pos + 1).to_string(),
                    fixed(s.score),
                    s.index.to_string(),
                    s.sentence.clone(),
                ]);
            }
            out.push_str(&t.render());
        }
        if let Some(rho) = &spearman {
            match rho.as_f64() {
                Some(v) => out.push_str(&format!("spearman rho: {}\n", fixed(v))),
                None => out.push_str("spearman rho: undefined\n"),
            }
        }
        out
    })
}

fn parse_system(arg: &str) -> Result<(String, PathBuf)> {
    match arg.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(Error::Validation(format!(
            "--system expects name=path, got `{arg}`"
        ))),
    }
}

fn compare_systems(args: &CompareArgs) -> Result<()> {
    let corpus = load_corpus(&args.common)?;
    let mut outputs = SystemOutputs::new();
    for arg in &args.systems {
        let (name, path) = parse_system(arg)?;
        let candidates = load_candidates(&path)?;
        if outputs.insert(name.clone(), candidates).is_some() {
            return Err(Error::Validation(format!("system `{name}` given twice")));
        }
    }
    let mut results = Vec::new();
    for metric in build_metrics(&args.metric, &corpus)? {
        let fractions = harness::system_win_fractions(
            &outputs,
            &corpus,
            metric.as_ref(),
            args.refs,
            args.seed,
        )?;
        results.push((metric.name().to_string(), fractions));
    }
    let pearson = if results.len() == 2 {
        let a: Vec<f64> = results[0].1.values().map(|w| w.fraction).collect();
        let b: Vec<f64> = results[1].1.values().map(|w| w.fraction).collect();
        Some(correlation_json(harness::pearson_r(&a, &b)))
    } else {
        None
    };
    let mut doc = json!({
        "refs_per_image": args.refs,
        "seed": args.seed,
        "results": results
            .iter()
            .map(|(name, f)| json!({ "metric": name, "systems": f }))
            .collect::<Vec<_>>(),
    });
    if let Some(r) = &pearson {
        doc["pearson_r"] = r.clone();
    }
    emit(&args.common, &doc, || {
        let systems: Vec<&String> = outputs.keys().collect();
        let mut t = Table::new(
            std::iter::once("system".to_string()).chain(results.iter().map(|(n, _)| n.clone())),
        );
        for s in systems {
            let mut row = vec![s.clone()];
            row.extend(results.iter().map(|(_, f)| fixed(f[s].fraction)));
            t.row(row);
        }
        let mut out = t.render();
        if let Some(r) = &pearson {
            match r.as_f64() {
                Some(v) => out.push_str(&format!("pearson r: {}\n", fixed(v))),
                None => out.push_str("pearson r: undefined\n"),
            }
        }
        out
    })
}
