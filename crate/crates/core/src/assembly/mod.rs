//! Final Wordnet assembly: merging per-approach outputs, coverage, export,
//! evaluation sampling and score aggregation.

mod coverage;
mod export;
mod sample;
mod scores;

use thiserror::Error;

use crate::lexicon::GeneratedWordnet;
use crate::wn_data::OffsetPos;

pub use coverage::{coverage_report, CoverageReport, PWN_SYNSET_TOTAL};
pub use export::{export_tab, table_to_generated, write_tab};
pub use sample::{sample_eval_set, EvalSample};
pub use scores::{aggregate_scores, MeanScore, ScoreSummary};

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("{id}: score {score} is outside 1..=5")]
    ScoreOutOfRange { id: OffsetPos, score: i64 },
    #[error("nothing to export")]
    Empty,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Union of keys and words; provenance records are kept as a set.
pub fn merge_wordnets(parts: &[GeneratedWordnet]) -> Result<GeneratedWordnet, AssemblyError> {
    let Some(first) = parts.first() else {
        return Err(AssemblyError::Integrity("no wordnets to merge".into()));
    };
    let lang = first.target_lang().clone();
    let mut merged = GeneratedWordnet::new(lang.clone());
    for part in parts {
        if part.target_lang() != &lang {
            return Err(AssemblyError::Integrity(format!(
                "cannot merge {} output into a {} wordnet",
                part.target_lang(),
                lang
            )));
        }
        merged.add_approaches(part.approaches().iter().copied());
        for (id, words) in part.entries() {
            merged.add_words(*id, words.iter().map(String::as_str));
            for record in part.provenance(id) {
                merged.add_provenance(*id, record.clone());
            }
        }
    }
    Ok(merged)
}
