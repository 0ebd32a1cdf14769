//! Synthesizes Wordnet synsets for a target language by translating the
//! synsets of PWN-aligned Wordnets, ranking the translation candidates, and
//! keeping the winners.
//!
//! The flow is [`pipeline`] (candidate generation) → [`ranking`] (rank and
//! select) → [`assembly`] (merge, coverage, export). Resource loading lives
//! in [`wn_data`] and translation backends in [`providers`].

pub mod assembly;
pub mod lexicon;
pub mod pipeline;
pub mod providers;
pub mod ranking;
pub mod wn_data;

pub use lexicon::{Approach, Candidate, CandidateSet, GeneratedWordnet, Rank, RankedCandidate};
pub use wn_data::{Lang, OffsetPos, Pos};
