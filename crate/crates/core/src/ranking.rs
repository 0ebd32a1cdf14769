//! Candidate ranking and the three-case acceptance rule.
//!
//! For a distinct word `w` in a candidate set,
//!
//! ```text
//! rank(w) = occur(w) / numCandidates * numDstWordnets(w) / numWordnets
//! ```
//!
//! where `occur(w)` counts tokens of `w`, `numCandidates` counts all tokens,
//! `numDstWordnets(w)` is the number of distinct source wordnets that produced
//! `w`, and `numWordnets` is the number of intermediate wordnets configured
//! for the run. Ranks are exact rationals.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::lexicon::{CandidateSet, Rank, RankedCandidate};
use crate::wn_data::OffsetPos;

/// Which acceptance rule applied to a synset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    /// Some word has rank 1; all rank-1 words are accepted.
    Case1,
    /// The maximum rank is held by a strict subset of the distinct words
    /// (or by the only word); that subset is accepted.
    Case2,
    /// Every distinct word ties at the maximum; nothing is accepted.
    Case3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub id: OffsetPos,
    pub case: Case,
    pub accepted: Vec<RankedCandidate>,
    pub rejected: Vec<RankedCandidate>,
}

/// One entry per distinct word, sorted by rank descending then word.
pub fn compute_ranks(cs: &CandidateSet) -> Vec<RankedCandidate> {
    let mut per_word: BTreeMap<&str, (usize, BTreeSet<&str>)> = BTreeMap::new();
    for c in cs.candidates() {
        let (occur, sources) = per_word.entry(c.word.as_str()).or_default();
        *occur += 1;
        sources.insert(c.source_wordnet.as_str());
    }

    let num_candidates = cs.num_candidates();
    let num_wordnets = cs.num_wordnets();
    let mut ranked: Vec<RankedCandidate> = per_word
        .into_iter()
        .map(|(word, (occur, sources))| {
            let rank = Rank::from_counts(occur, num_candidates, sources.len(), num_wordnets);
            RankedCandidate::new(word.to_string(), occur, sources.len(), rank)
        })
        .collect();
    ranked.sort();
    ranked
}

/// Applies the three-case rule to a non-empty ranked list.
pub fn select_candidates(id: OffsetPos, ranked: &[RankedCandidate]) -> SelectionOutcome {
    let max = ranked.iter().map(|r| r.rank).max();
    let case = match max {
        Some(max) if max.is_one() => Case::Case1,
        Some(max) => {
            let at_max = ranked.iter().filter(|r| r.rank == max).count();
            if ranked.len() == 1 || at_max < ranked.len() {
                Case::Case2
            } else {
                Case::Case3
            }
        }
        None => Case::Case3,
    };

    let (accepted, rejected) = ranked
        .iter()
        .cloned()
        .partition(|r| case != Case::Case3 && Some(r.rank) == max);
    SelectionOutcome {
        id,
        case,
        accepted,
        rejected,
    }
}

/// Ranks and selects in one step.
pub fn rank_and_select(cs: &CandidateSet) -> SelectionOutcome {
    select_candidates(cs.id(), &compute_ranks(cs))
}
