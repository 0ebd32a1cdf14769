//! Word translation behind a single contract.
//!
//! Every provider returns normalized lemmas; an empty list means "no
//! translation" and is not an error. Machine-translation style providers
//! split comma/semicolon separated alternatives into separate lemmas.

mod cache;
mod dictionary;
mod http;
mod mock;
mod pivot;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::wn_data::{normalize_lemma, Lang};

pub use cache::{cached, CachedProvider, TranslationCache};
pub use dictionary::DictionaryProvider;
pub use http::{HttpProvider, HttpProviderConfig};
pub use mock::MockProvider;
pub use pivot::pivot_translate;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProviderError {
    #[error("provider {provider} does not support {pair}")]
    Unsupported { provider: String, pair: LangPair },
    #[error("no provider assigned for {0}")]
    Unassigned(LangPair),
    #[error("provider {provider} transport failure: {message}")]
    Transport { provider: String, message: String },
    #[error("translation cache: {0}")]
    Cache(String),
}

impl ProviderError {
    /// Transport failures may succeed on retry; capability errors never do.
    pub fn is_retryable(&self) -> bool {
        matches!(self, ProviderError::Transport { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LangPair {
    pub src: Lang,
    pub dst: Lang,
}

impl LangPair {
    pub fn new(src: Lang, dst: Lang) -> Self {
        LangPair { src, dst }
    }
}

impl fmt::Display for LangPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.dst)
    }
}

/// Which language pairs a provider can translate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Capabilities {
    Pairs(BTreeSet<LangPair>),
    /// Any `L -> L` pair.
    SameLanguage,
}

impl Capabilities {
    pub fn supports(&self, src: &Lang, dst: &Lang) -> bool {
        match self {
            Capabilities::Pairs(pairs) => pairs.contains(&LangPair::new(src.clone(), dst.clone())),
            Capabilities::SameLanguage => src == dst,
        }
    }
}

pub trait TranslationProvider: Send + Sync {
    fn name(&self) -> &str;

    fn capabilities(&self) -> Capabilities;

    fn supports(&self, src: &Lang, dst: &Lang) -> bool {
        self.capabilities().supports(src, dst)
    }

    /// Translates one lemma. Must be deterministic for a fixed provider state.
    fn translate(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError>;
}

pub(crate) fn ensure_supported(
    provider: &(impl TranslationProvider + ?Sized),
    src: &Lang,
    dst: &Lang,
) -> Result<(), ProviderError> {
    if provider.supports(src, dst) {
        Ok(())
    } else {
        Err(ProviderError::Unsupported {
            provider: provider.name().to_string(),
            pair: LangPair::new(src.clone(), dst.clone()),
        })
    }
}

/// Splits raw MT output on commas and semicolons and normalizes each piece.
pub fn split_alternatives<'a, I>(raw: I) -> Vec<String>
where
    I: IntoIterator<Item = &'a str>,
{
    raw.into_iter()
        .flat_map(|s| s.split([',', ';', '，', '；', '、', '،', '؛']))
        .filter_map(normalize_lemma)
        .collect()
}

/// Returns the word itself for any same-language pair.
#[derive(Debug, Clone, Default)]
pub struct IdentityProvider;

impl TranslationProvider for IdentityProvider {
    fn name(&self) -> &str {
        "identity"
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::SameLanguage
    }

    fn translate(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError> {
        ensure_supported(self, src, dst)?;
        Ok(normalize_lemma(word).into_iter().collect())
    }
}

/// Provider assignments per language pair.
#[derive(Clone, Default)]
pub struct ProviderRegistry {
    assignments: BTreeMap<LangPair, Arc<dyn TranslationProvider>>,
}

impl ProviderRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Assigns `provider` to `src -> dst`, checking its capabilities.
    pub fn assign(
        &mut self,
        src: Lang,
        dst: Lang,
        provider: Arc<dyn TranslationProvider>,
    ) -> Result<(), ProviderError> {
        ensure_supported(provider.as_ref(), &src, &dst)?;
        self.assignments.insert(LangPair::new(src, dst), provider);
        Ok(())
    }

    pub fn get(
        &self,
        src: &Lang,
        dst: &Lang,
    ) -> Result<Arc<dyn TranslationProvider>, ProviderError> {
        self.assignments
            .get(&LangPair::new(src.clone(), dst.clone()))
            .cloned()
            .ok_or_else(|| ProviderError::Unassigned(LangPair::new(src.clone(), dst.clone())))
    }

    pub fn pairs(&self) -> impl Iterator<Item = &LangPair> {
        self.assignments.keys()
    }
}

impl fmt::Debug for ProviderRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(
                self.assignments
                    .iter()
                    .map(|(pair, p)| (pair.to_string(), p.name().to_string())),
            )
            .finish()
    }
}
