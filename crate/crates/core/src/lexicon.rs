//! Shared domain vocabulary for candidate generation, ranking and assembly.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ranking::{Case, SelectionOutcome};
use crate::wn_data::{Lang, OffsetPos};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LexiconError {
    #[error("candidate set for {0} is empty")]
    EmptyCandidateSet(OffsetPos),
    #[error("{id}: numWordnets {num_wordnets} is below the {sources} distinct source wordnets")]
    TooFewWordnets {
        id: OffsetPos,
        num_wordnets: usize,
        sources: usize,
    },
    #[error("unknown approach {0:?}")]
    UnknownApproach(String),
}

/// Candidate-generation approach.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Approach {
    /// Direct translation of PWN synsets.
    Dr,
    /// Translation of the synsets of several intermediate Wordnets.
    Iw,
    /// Intermediate Wordnets translated to English, then through one dictionary.
    Iwnd,
}

impl Approach {
    pub fn as_str(self) -> &'static str {
        match self {
            Approach::Dr => "DR",
            Approach::Iw => "IW",
            Approach::Iwnd => "IWND",
        }
    }
}

impl fmt::Display for Approach {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Approach {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "DR" => Ok(Approach::Dr),
            "IW" => Ok(Approach::Iw),
            "IWND" => Ok(Approach::Iwnd),
            _ => Err(LexiconError::UnknownApproach(s.to_string())),
        }
    }
}

/// One target-language translation token with its provenance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Candidate {
    pub word: String,
    pub source_wordnet: String,
    pub source_word: String,
    /// English pivot, present only for candidates produced through a pivot.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pivot_word: Option<String>,
}

/// All candidate tokens proposed for one synset. Repeated words are kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateSet {
    id: OffsetPos,
    target_lang: Lang,
    candidates: Vec<Candidate>,
    num_wordnets: usize,
}

impl CandidateSet {
    pub fn new(
        id: OffsetPos,
        target_lang: Lang,
        candidates: Vec<Candidate>,
        num_wordnets: usize,
    ) -> Result<Self, LexiconError> {
        if candidates.is_empty() {
            return Err(LexiconError::EmptyCandidateSet(id));
        }
        let sources = candidates
            .iter()
            .map(|c| c.source_wordnet.as_str())
            .collect::<BTreeSet<_>>()
            .len();
        if num_wordnets < sources {
            return Err(LexiconError::TooFewWordnets {
                id,
                num_wordnets,
                sources,
            });
        }
        Ok(CandidateSet {
            id,
            target_lang,
            candidates,
            num_wordnets,
        })
    }

    pub fn id(&self) -> OffsetPos {
        self.id
    }

    pub fn target_lang(&self) -> &Lang {
        &self.target_lang
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn num_wordnets(&self) -> usize {
        self.num_wordnets
    }

    /// Token count, with multiplicity.
    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }
}

/// An exact rank in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rank(Ratio<u64>);

impl Rank {
    pub const ONE: Rank = Rank(Ratio::new_raw(1, 1));

    /// `(occur / num_candidates) * (num_dst_wordnets / num_wordnets)`.
    pub fn from_counts(
        occur: usize,
        num_candidates: usize,
        num_dst_wordnets: usize,
        num_wordnets: usize,
    ) -> Rank {
        Rank(Ratio::new(
            (occur * num_dst_wordnets) as u64,
            (num_candidates * num_wordnets) as u64,
        ))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_one(&self) -> bool {
        *self == Rank::ONE
    }

    /// Two-decimal rendering with half-up rounding, e.g. `0.67`.
    pub fn display(&self) -> String {
        format_hundredths(round_half_up_hundredths(
            self.numer() as u128,
            self.denom() as u128,
        ))
    }
}

impl Ord for Rank {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.numer() as u128 * other.denom() as u128;
        let rhs = other.numer() as u128 * self.denom() as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Rank {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Rank {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rank {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let (n, d) = s
            .split_once('/')
            .ok_or_else(|| serde::de::Error::custom("rank must be n/d"))?;
        let n: u64 = n.parse().map_err(serde::de::Error::custom)?;
        let d: u64 = d.parse().map_err(serde::de::Error::custom)?;
        if d == 0 || n > d {
            return Err(serde::de::Error::custom("rank out of range"));
        }
        Ok(Rank(Ratio::new(n, d)))
    }
}

/// `numer / denom` scaled by 100 and rounded half-up to an integer.
pub(crate) fn round_half_up_hundredths(numer: u128, denom: u128) -> u128 {
    (numer * 200 + denom) / (2 * denom)
}

pub(crate) fn format_hundredths(value: u128) -> String {
    format!("{}.{:02}", value / 100, value % 100)
}

/// A distinct candidate word with its counts and rank.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankedCandidate {
    pub word: String,
    pub occur: usize,
    pub num_dst_wordnets: usize,
    pub rank: Rank,
    pub rank_display: String,
}

impl RankedCandidate {
    pub fn new(word: String, occur: usize, num_dst_wordnets: usize, rank: Rank) -> Self {
        RankedCandidate {
            word,
            occur,
            num_dst_wordnets,
            rank_display: rank.display(),
            rank,
        }
    }
}

impl Ord for RankedCandidate {
    /// Rank descending, then word ascending.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .rank
            .cmp(&self.rank)
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.occur.cmp(&other.occur))
            .then_with(|| self.num_dst_wordnets.cmp(&other.num_dst_wordnets))
    }
}

impl PartialOrd for RankedCandidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Why an entry exists: the approach and selection outcome that accepted it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub approach: Approach,
    pub case: Case,
    pub ranked: Vec<RankedCandidate>,
}

/// Accepted target-language words per synset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedWordnet {
    target_lang: Lang,
    approaches: BTreeSet<Approach>,
    entries: BTreeMap<OffsetPos, Vec<String>>,
    provenance: BTreeMap<OffsetPos, Vec<Provenance>>,
}

impl GeneratedWordnet {
    pub fn new(target_lang: Lang) -> Self {
        GeneratedWordnet {
            target_lang,
            approaches: BTreeSet::new(),
            entries: BTreeMap::new(),
            provenance: BTreeMap::new(),
        }
    }

    /// Collects the accepted words of each outcome. Outcomes that accept
    /// nothing (Case 3) contribute no entry.
    pub fn from_outcomes<'a, I>(target_lang: Lang, approach: Approach, outcomes: I) -> Self
    where
        I: IntoIterator<Item = &'a SelectionOutcome>,
    {
        let mut gw = GeneratedWordnet::new(target_lang);
        gw.approaches.insert(approach);
        for outcome in outcomes {
            if outcome.accepted.is_empty() {
                continue;
            }
            let mut ranked: Vec<RankedCandidate> = outcome
                .accepted
                .iter()
                .chain(&outcome.rejected)
                .cloned()
                .collect();
            ranked.sort();
            let words = outcome.accepted.iter().map(|r| r.word.as_str());
            gw.add_words(outcome.id, words);
            gw.add_provenance(
                outcome.id,
                Provenance {
                    approach,
                    case: outcome.case,
                    ranked,
                },
            );
        }
        gw
    }

    /// Adds words for a synset without provenance (e.g. from a parsed export).
    pub fn add_words<'a, I>(&mut self, id: OffsetPos, words: I)
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut added: Vec<String> = words
            .into_iter()
            .filter(|w| !w.is_empty())
            .map(str::to_string)
            .collect();
        if added.is_empty() {
            return;
        }
        let entry = self.entries.entry(id).or_default();
        entry.append(&mut added);
        entry.sort();
        entry.dedup();
    }

    pub(crate) fn add_provenance(&mut self, id: OffsetPos, record: Provenance) {
        let list = self.provenance.entry(id).or_default();
        if let Err(pos) = list.binary_search(&record) {
            list.insert(pos, record);
        }
    }

    pub(crate) fn add_approaches(&mut self, approaches: impl IntoIterator<Item = Approach>) {
        self.approaches.extend(approaches);
    }

    pub fn target_lang(&self) -> &Lang {
        &self.target_lang
    }

    pub fn approaches(&self) -> &BTreeSet<Approach> {
        &self.approaches
    }

    /// Entries in offset-pos order; word lists are sorted and deduplicated.
    pub fn entries(&self) -> &BTreeMap<OffsetPos, Vec<String>> {
        &self.entries
    }

    pub fn provenance(&self, id: &OffsetPos) -> &[Provenance] {
        self.provenance.get(id).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id() -> OffsetPos {
        "00006802-v".parse().unwrap()
    }

    fn cand(word: &str, source: &str) -> Candidate {
        Candidate {
            word: word.into(),
            source_wordnet: source.into(),
            source_word: "x".into(),
            pivot_word: None,
        }
    }

    #[test]
    fn rank_reduces_and_displays() {
        let third = Rank::from_counts(1, 3, 1, 1);
        assert_eq!((third.numer(), third.denom()), (1, 3));
        assert_eq!(third.display(), "0.33");
        assert_eq!(Rank::from_counts(2, 3, 1, 1).display(), "0.67");
        assert_eq!(Rank::from_counts(4, 4, 4, 4), Rank::ONE);
        assert_eq!(Rank::ONE.display(), "1.00");
        // 1/8 = 0.125 rounds half-up.
        assert_eq!(Rank::from_counts(1, 8, 1, 1).display(), "0.13");
    }

    #[test]
    fn rank_ordering_is_exact() {
        let a = Rank::from_counts(1, 3, 1, 1);
        let b = Rank::from_counts(2, 6, 2, 2);
        assert_eq!(a, b);
        assert_eq!(a.cmp(&b), Ordering::Equal);
        assert!(Rank::from_counts(1, 12, 1, 1) < a);
    }

    #[test]
    fn rank_serde_round_trip() {
        let r = Rank::from_counts(1, 3, 2, 4);
        let json = serde_json::to_string(&r).unwrap();
        assert_eq!(json, "\"1/6\"");
        assert_eq!(serde_json::from_str::<Rank>(&json).unwrap(), r);
        assert!(serde_json::from_str::<Rank>("\"3/2\"").is_err());
    }

    #[test]
    fn candidate_set_rejects_empty_and_undercounted() {
        let lang = Lang::new("vie").unwrap();
        assert_eq!(
            CandidateSet::new(id(), lang.clone(), vec![], 1),
            Err(LexiconError::EmptyCandidateSet(id()))
        );
        let err = CandidateSet::new(
            id(),
            lang.clone(),
            vec![cand("a", "PWN"), cand("a", "FWN")],
            1,
        );
        assert!(matches!(
            err,
            Err(LexiconError::TooFewWordnets { sources: 2, .. })
        ));
        let ok =
            CandidateSet::new(id(), lang, vec![cand("a", "PWN"), cand("a", "PWN")], 4).unwrap();
        assert_eq!(ok.num_candidates(), 2);
    }

    #[test]
    fn approach_parsing() {
        assert_eq!("iwnd".parse::<Approach>().unwrap(), Approach::Iwnd);
        assert_eq!(Approach::Dr.to_string(), "DR");
        assert!("XX".parse::<Approach>().is_err());
    }

    #[test]
    fn generated_words_stay_sorted_and_unique() {
        let mut gw = GeneratedWordnet::new(Lang::new("vie").unwrap());
        gw.add_words(id(), ["làm", "gửi"]);
        gw.add_words(id(), ["gửi"]);
        gw.add_words(id(), []);
        assert_eq!(gw.entries()[&id()], vec!["gửi", "làm"]);
        assert_eq!(gw.len(), 1);
    }
}
