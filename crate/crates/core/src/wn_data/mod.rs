//! Loaders for the lexical resources the pipeline consumes: PWN WNDB data
//! files, Open Multilingual Wordnet tab files, and bilingual dictionary TSVs.
//!
//! All loaders normalize lemmas with [`normalize_lemma`] so that candidate
//! matching downstream can compare plain strings.

mod dictionary;
mod normalize;
mod offset_pos;
mod omw;
mod wndb;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dictionary::{parse_dictionary_tsv, BilingualDictionary};
pub use normalize::{normalize_lemma, Lang};
pub use offset_pos::{OffsetPos, Pos};
pub use omw::{parse_omw_tab, parse_omw_tab_with_header, OmwHeader};
pub use wndb::parse_wndb;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("invalid offset-pos {0:?}")]
    InvalidOffsetPos(String),
    #[error("invalid part of speech {0:?}")]
    InvalidPos(String),
    #[error("invalid ISO 639-3 language code {0:?}")]
    InvalidLang(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: invalid UTF-8")]
    Encoding { line: usize },
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DataError {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        DataError::Parse {
            line,
            message: message.into(),
        }
    }
}

/// A non-fatal issue encountered while loading a resource.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    /// 1-based line number, 0 for whole-file warnings.
    pub line: usize,
    pub message: String,
}

/// Loader output together with the warnings raised while producing it.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

/// One synset from one source Wordnet.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Synset {
    pub id: OffsetPos,
    pub lang: Lang,
    /// Normalized, non-empty, duplicate-free lemmas in source order.
    pub words: Vec<String>,
    pub source: String,
}

impl Synset {
    /// Builds a synset from raw lemmas, normalizing and deduplicating them.
    /// Returns `None` if no lemma survives normalization.
    pub fn from_raw<I, S>(id: OffsetPos, lang: Lang, source: &str, raw: I) -> Option<Synset>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut words: Vec<String> = Vec::new();
        for lemma in raw {
            if let Some(w) = normalize_lemma(lemma.as_ref()) {
                if !words.contains(&w) {
                    words.push(w);
                }
            }
        }
        if words.is_empty() {
            return None;
        }
        Some(Synset {
            id,
            lang,
            words,
            source: source.to_string(),
        })
    }
}

/// All synsets of one Wordnet, keyed by offset-pos.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordnetTable {
    pub name: String,
    pub lang: Lang,
    entries: BTreeMap<OffsetPos, Synset>,
}

impl WordnetTable {
    pub fn new(name: &str, lang: Lang) -> Self {
        WordnetTable {
            name: name.to_string(),
            lang,
            entries: BTreeMap::new(),
        }
    }

    /// Inserts a synset, failing if its id is already present or if its
    /// language disagrees with the table's.
    pub fn insert(&mut self, synset: Synset) -> Result<(), DataError> {
        if synset.lang != self.lang {
            return Err(DataError::Integrity(format!(
                "synset {} is {} but table {} is {}",
                synset.id, synset.lang, self.name, self.lang
            )));
        }
        if self.entries.contains_key(&synset.id) {
            return Err(DataError::Integrity(format!(
                "duplicate synset {} in {}",
                synset.id, self.name
            )));
        }
        self.entries.insert(synset.id, synset);
        Ok(())
    }

    /// Merges another fragment of the same Wordnet (e.g. `data.verb` into a
    /// table built from `data.noun`).
    pub fn extend(&mut self, other: WordnetTable) -> Result<(), DataError> {
        for (_, synset) in other.entries {
            self.insert(synset)?;
        }
        Ok(())
    }

    /// The same table under another name; synset sources follow.
    pub fn renamed(mut self, name: &str) -> WordnetTable {
        self.name = name.to_string();
        for synset in self.entries.values_mut() {
            synset.source = name.to_string();
        }
        self
    }

    pub fn get(&self, id: &OffsetPos) -> Option<&Synset> {
        self.entries.get(id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = &OffsetPos> {
        self.entries.keys()
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.entries.values()
    }

    pub(crate) fn entry_mut(&mut self, id: OffsetPos) -> Option<&mut Synset> {
        self.entries.get_mut(&id)
    }
}
