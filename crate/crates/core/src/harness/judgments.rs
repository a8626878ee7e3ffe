use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Winner {
    B,
    C,
}

impl Winner {
    pub fn flipped(self) -> Self {
        match self {
            Winner::B => Winner::C,
            Winner::C => Winner::B,
        }
    }
}

/// Human-correct pairs, human vs wrong-image human, human vs machine,
/// machine vs machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PairKind {
    HC,
    HI,
    HM,
    MM,
}

impl PairKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HC" => Ok(PairKind::HC),
            "HI" => Ok(PairKind::HI),
            "HM" => Ok(PairKind::HM),
            "MM" => Ok(PairKind::MM),
            _ => Err(Error::Validation(format!(
                "unknown pair kind `{s}` (expected HC, HI, HM or MM)"
            ))),
        }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Two candidate sentences for one image and the consensus winner.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairJudgment {
    pub image_id: String,
    pub b: String,
    pub c: String,
    pub winner: Winner,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<PairKind>,
}

impl PairJudgment {
    /// The same judgment with B and C exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            image_id: self.image_id.clone(),
            b: self.c.clone(),
            c: self.b.clone(),
            winner: self.winner.flipped(),
            kind: self.kind,
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// Reads a JSON array of `{image_id, b, c, winner, kind}` objects.
pub fn load_pairs(path: impl AsRef<Path>) -> Result<Vec<PairJudgment>> {
    read_json(path.as_ref())
}

/// One triplet: the pair (b, c) judged against reference `reference_index`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawVote {
    pub image_id: String,
    pub b: String,
    pub c: String,
    pub reference_index: usize,
    pub votes: Vec<Winner>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<PairKind>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VoteReduction {
    pub pairs: Vec<PairJudgment>,
    /// Triplets whose votes split evenly.
    pub tied_triplets: usize,
    /// Pairs whose triplet winners split evenly; these are left out.
    pub tied_pairs: usize,
}

fn majority(b: usize, c: usize) -> Option<Winner> {
    match b.cmp(&c) {
        std::cmp::Ordering::Greater => Some(Winner::B),
        std::cmp::Ordering::Less => Some(Winner::C),
        std::cmp::Ordering::Equal => None,
    }
}

type PairKey<'a> = (&'a str, &'a str, &'a str);

/// Majority vote within each triplet, then majority over the triplets of
/// each (image, b, c) pair. Pairs keep the order of their first triplet.
pub fn reduce_votes(votes: &[RawVote]) -> Result<VoteReduction> {
    let mut order: Vec<(&str, &str, &str)> = Vec::new();
    // (triplets won by B, triplets won by C, kind) per pair
    let mut groups: BTreeMap<PairKey<'_>, (usize, usize, Option<PairKind>)> = BTreeMap::new();
    let mut out = VoteReduction::default();
    for v in votes {
        let key = (v.image_id.as_str(), v.b.as_str(), v.c.as_str());
        let entry = groups.entry(key).or_insert_with(|| {
            order.push(key);
            (0, 0, v.kind)
        });
        if entry.2 != v.kind {
            return Err(Error::Validation(format!(
                "conflicting kinds for pair ({}, {:?}, {:?})",
                v.image_id, v.b, v.c
            )));
        }
        let for_b = v.votes.iter().filter(|w| **w == Winner::B).count();
        match majority(for_b, v.votes.len() - for_b) {
            Some(Winner::B) => entry.0 += 1,
            Some(Winner::C) => entry.1 += 1,
            None => out.tied_triplets += 1,
        }
    }
    for key in order {
        let (b, c, kind) = groups[&key];
        match majority(b, c) {
            Some(winner) => out.pairs.push(PairJudgment {
                image_id: key.0.to_string(),
                b: key.1.to_string(),
                c: key.2.to_string(),
                winner,
                kind,
            }),
            None => out.tied_pairs += 1,
        }
    }
    if out.tied_pairs > 0 {
        log::warn!(
            "{} pair(s) dropped: triplet majorities tied",
            out.tied_pairs
        );
    }
    Ok(out)
}

/// Reads a raw-vote file and reduces it to pair judgments.
pub fn load_raw_votes(path: impl AsRef<Path>) -> Result<VoteReduction> {
    let votes: Vec<RawVote> = read_json(path.as_ref())?;
    reduce_votes(&votes)
}
