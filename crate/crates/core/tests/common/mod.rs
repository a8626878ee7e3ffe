//! Literal-formula oracles shared by the integration tests. Every function
//! here recomputes a score the slow way: dense vectors over the full
//! vocabulary, explicit double sums, exhaustive enumeration.

#![allow(dead_code)]

use cider_eval::{RefCorpus, TokenSequence};

pub type Tokens = Vec<String>;

pub fn seq(t: &[String]) -> TokenSequence {
    TokenSequence::from_tokens(t.iter().cloned(), false)
}

/// Builds a corpus directly from token lists (images named `img0`, ...).
pub fn corpus_of(images: &[Vec<Tokens>]) -> RefCorpus {
    let entries = images
        .iter()
        .enumerate()
        .map(|(i, refs)| {
            (
                format!("img{i}"),
                refs.iter().map(|r| r.join(" ")).collect(),
            )
        })
        .collect();
    RefCorpus::from_entries(entries, false).unwrap()
}

fn windows(t: &[String], n: usize) -> Vec<Tokens> {
    if t.len() < n {
        return Vec::new();
    }
    (0..=t.len() - n).map(|i| t[i..i + n].to_vec()).collect()
}

fn h(gram: &[String], t: &[String]) -> f64 {
    windows(t, gram.len())
        .iter()
        .filter(|w| w[..] == *gram)
        .count() as f64
}

/// Every n-gram of order `n` found in the candidate or any reference.
fn vocabulary(c: &[String], corpus: &[Vec<Tokens>], n: usize) -> Vec<Tokens> {
    let mut v: Vec<Tokens> = windows(c, n);
    for refs in corpus {
        for r in refs {
            v.extend(windows(r, n));
        }
    }
    v.sort();
    v.dedup();
    v
}

/// `ln(|I| / max(1, Σ_p min(1, Σ_q h_k(s_pq))))`.
pub fn idf(gram: &[String], corpus: &[Vec<Tokens>]) -> f64 {
    let df: f64 = corpus
        .iter()
        .map(|refs| refs.iter().map(|r| h(gram, r)).sum::<f64>().min(1.0))
        .sum();
    (corpus.len() as f64 / df.max(1.0)).ln()
}

fn g(t: &[String], vocab: &[Tokens], idfs: &[f64]) -> Vec<f64> {
    let total: f64 = vocab.iter().map(|k| h(k, t)).sum();
    vocab
        .iter()
        .zip(idfs)
        .map(|(k, w)| {
            if total == 0.0 {
                0.0
            } else {
                h(k, t) / total * w
            }
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn cider_n(c: &[String], image: usize, corpus: &[Vec<Tokens>], n: usize) -> f64 {
    let vocab = vocabulary(c, corpus, n);
    let idfs: Vec<f64> = vocab.iter().map(|k| idf(k, corpus)).collect();
    let gc = g(c, &vocab, &idfs);
    let refs = &corpus[image];
    refs.iter()
        .map(|r| {
            let gs = g(r, &vocab, &idfs);
            let d = l2(&gc) * l2(&gs);
            if d == 0.0 {
                0.0
            } else {
                dot(&gc, &gs) / d
            }
        })
        .sum::<f64>()
        / refs.len() as f64
}

pub fn cider(c: &[String], image: usize, corpus: &[Vec<Tokens>], max_n: usize) -> f64 {
    (1..=max_n)
        .map(|n| cider_n(c, image, corpus, n) / max_n as f64)
        .sum()
}

pub fn cider_d_n(c: &[String], image: usize, corpus: &[Vec<Tokens>], n: usize, sigma: f64) -> f64 {
    let vocab = vocabulary(c, corpus, n);
    let idfs: Vec<f64> = vocab.iter().map(|k| idf(k, corpus)).collect();
    let gc = g(c, &vocab, &idfs);
    let refs = &corpus[image];
    10.0 * refs
        .iter()
        .map(|r| {
            let gs = g(r, &vocab, &idfs);
            let delta = c.len() as f64 - r.len() as f64;
            let penalty = (-(delta * delta) / (2.0 * sigma * sigma)).exp();
            let clipped: f64 = gc.iter().zip(&gs).map(|(a, b)| a.min(*b) * b).sum();
            let d = l2(&gc) * l2(&gs);
            if d == 0.0 {
                0.0
            } else {
                penalty * clipped / d
            }
        })
        .sum::<f64>()
        / refs.len() as f64
}

pub fn cider_d(c: &[String], image: usize, corpus: &[Vec<Tokens>], max_n: usize) -> f64 {
    (1..=max_n)
        .map(|n| cider_d_n(c, image, corpus, n, 6.0) / max_n as f64)
        .sum()
}

pub fn bleu_precision(c: &[String], refs: &[Tokens], n: usize) -> f64 {
    let grams = windows(c, n);
    if grams.is_empty() {
        return 0.0;
    }
    let mut distinct = grams.clone();
    distinct.sort();
    distinct.dedup();
    let clipped: f64 = distinct
        .iter()
        .map(|k| {
            let cap = refs.iter().map(|r| h(k, r)).fold(0.0, f64::max);
            h(k, c).min(cap)
        })
        .sum();
    clipped / grams.len() as f64
}

pub fn brevity_penalty(c: &[String], refs: &[Tokens]) -> f64 {
    let lc = c.len() as f64;
    if lc == 0.0 {
        return 0.0;
    }
    let mut best = refs[0].len() as f64;
    for r in refs {
        let l = r.len() as f64;
        let (d, bd) = ((l - lc).abs(), (best - lc).abs());
        if d < bd || (d == bd && l < best) {
            best = l;
        }
    }
    if lc > best {
        1.0
    } else {
        (1.0 - best / lc).exp()
    }
}

pub fn bleu(c: &[String], refs: &[Tokens], max_n: usize) -> f64 {
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let p = bleu_precision(c, refs, n);
        if p == 0.0 {
            return 0.0;
        }
        log_sum += p.ln() / max_n as f64;
    }
    brevity_penalty(c, refs) * log_sum.exp()
}

pub fn rouge_n(c: &[String], refs: &[Tokens], n: usize) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for r in refs {
        let mut distinct = windows(r, n);
        distinct.sort();
        distinct.dedup();
        for k in &distinct {
            num += h(k, c).min(h(k, r));
            den += h(k, r);
        }
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

fn is_subsequence(sub: &[&String], of: &[String]) -> bool {
    let mut it = of.iter();
    sub.iter().all(|x| it.any(|y| y == *x))
}

/// Longest subsequence of `a` that is also a subsequence of `b`, found by
/// trying every subset of `a`'s positions.
pub fn lcs_brute(a: &[String], b: &[String]) -> usize {
    assert!(a.len() <= 16);
    (0u32..1 << a.len())
        .filter_map(|mask| {
            let sub: Vec<&String> = (0..a.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| &a[i])
                .collect();
            is_subsequence(&sub, b).then_some(sub.len())
        })
        .max()
        .unwrap_or(0)
}

pub fn f_measure(r: f64, p: f64, beta: f64) -> f64 {
    let den = r + beta * beta * p;
    if den == 0.0 {
        0.0
    } else {
        (1.0 + beta * beta) * r * p / den
    }
}

pub fn rouge_l(c: &[String], refs: &[Tokens]) -> f64 {
    let r = refs
        .iter()
        .map(|s| {
            if s.is_empty() {
                0.0
            } else {
                lcs_brute(c, s) as f64 / s.len() as f64
            }
        })
        .fold(0.0, f64::max);
    let p = refs
        .iter()
        .map(|s| {
            if c.is_empty() {
                0.0
            } else {
                lcs_brute(c, s) as f64 / c.len() as f64
            }
        })
        .fold(0.0, f64::max);
    f_measure(r, p, 2.0)
}

/// All `(i, j)` position pairs with `0 < j - i <= gap`, as token pairs.
pub fn skip_pairs(t: &[String], gap: usize) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for i in 0..t.len() {
        for j in 0..t.len() {
            if j > i && j - i <= gap {
                out.push((t[i].clone(), t[j].clone()));
            }
        }
    }
    out
}

fn count_pair(p: &(String, String), list: &[(String, String)]) -> f64 {
    list.iter().filter(|q| *q == p).count() as f64
}

pub fn rouge_s(c: &[String], refs: &[Tokens]) -> f64 {
    let fc = skip_pairs(c, 4);
    let mut r_best: f64 = 0.0;
    let mut p_best: f64 = 0.0;
    for s in refs {
        let fs = skip_pairs(s, 4);
        let mut keys = fs.clone();
        keys.extend(fc.iter().cloned());
        keys.sort();
        keys.dedup();
        let overlap: f64 = keys
            .iter()
            .map(|k| count_pair(k, &fc).min(count_pair(k, &fs)))
            .sum();
        if !fs.is_empty() {
            r_best = r_best.max(overlap / fs.len() as f64);
        }
        if !fc.is_empty() {
            p_best = p_best.max(overlap / fc.len() as f64);
        }
    }
    f_measure(r_best, p_best, 2.0)
}

fn chunks(links: &[(usize, usize)]) -> usize {
    let mut sorted = links.to_vec();
    sorted.sort();
    let mut n = 0;
    for (k, &(i, j)) in sorted.iter().enumerate() {
        let continues = k > 0 && sorted[k - 1].0 + 1 == i && sorted[k - 1].1 + 1 == j;
        if !continues {
            n += 1;
        }
    }
    n
}

/// Maximum matching size and the fewest chunks among maximum matchings,
/// by enumerating every one-to-one matching of equal tokens.
pub fn exact_alignment(c: &[String], r: &[String]) -> (usize, usize) {
    fn go(
        i: usize,
        c: &[String],
        r: &[String],
        used: &mut Vec<bool>,
        links: &mut Vec<(usize, usize)>,
        best: &mut (usize, usize),
    ) {
        if i == c.len() {
            let m = links.len();
            let ch = chunks(links);
            if m > best.0 || (m == best.0 && ch < best.1) {
                *best = (m, ch);
            }
            return;
        }
        go(i + 1, c, r, used, links, best);
        for j in 0..r.len() {
            if !used[j] && r[j] == c[i] {
                used[j] = true;
                links.push((i, j));
                go(i + 1, c, r, used, links, best);
                links.pop();
                used[j] = false;
            }
        }
    }
    let mut best = (0, 0);
    go(
        0,
        c,
        r,
        &mut vec![false; r.len()],
        &mut Vec::new(),
        &mut best,
    );
    best
}

/// METEOR with exact matching only; valid when no two distinct tokens in
/// play share a stem.
pub fn meteor_exact(c: &[String], refs: &[Tokens]) -> f64 {
    let (alpha, gamma, theta) = (0.9, 0.5, 3.0);
    refs.iter()
        .map(|r| {
            let (m, ch) = exact_alignment(c, r);
            if m == 0 {
                return 0.0;
            }
            let p = m as f64 / c.len() as f64;
            let rc = m as f64 / r.len() as f64;
            let f_mean = p * rc / (alpha * p + (1.0 - alpha) * rc);
            let pen = gamma * (ch as f64 / m as f64).powf(theta);
            (1.0 - pen) * f_mean
        })
        .fold(0.0, f64::max)
}
