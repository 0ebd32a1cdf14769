use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;
use std::sync::atomic::{AtomicUsize, Ordering};

use parking_lot::Mutex;

use super::{
    ensure_supported, split_alternatives, Capabilities, LangPair, ProviderError,
    TranslationProvider,
};
use crate::wn_data::{normalize_lemma, DataError, Lang};

/// Offline stand-in for a machine translator, driven by a fixed table.
///
/// Raw table values go through the same alternative splitting as live MT
/// output. Pairs marked as identity echo the input word.
#[derive(Debug, Default)]
pub struct MockProvider {
    name: String,
    pairs: BTreeSet<LangPair>,
    identity: BTreeSet<Lang>,
    table: HashMap<(LangPair, String), Vec<String>>,
    failures: Mutex<HashMap<String, usize>>,
    hits: AtomicUsize,
}

impl MockProvider {
    pub fn new(name: &str) -> Self {
        MockProvider {
            name: name.to_string(),
            ..Default::default()
        }
    }

    /// Declares a supported pair with no entries (every lookup misses).
    pub fn with_pair(mut self, src: &Lang, dst: &Lang) -> Self {
        self.pairs.insert(LangPair::new(src.clone(), dst.clone()));
        self
    }

    pub fn with_identity(mut self, lang: &Lang) -> Self {
        self.identity.insert(lang.clone());
        self.pairs.insert(LangPair::new(lang.clone(), lang.clone()));
        self
    }

    /// Adds raw MT output for `word`; values may hold comma-separated alternatives.
    pub fn with_entry(mut self, src: &Lang, dst: &Lang, word: &str, raw: &[&str]) -> Self {
        self.insert(src, dst, word, raw.iter().map(|s| s.to_string()).collect());
        self
    }

    /// Makes the next `times` lookups of `word` fail with a transport error.
    pub fn with_transient_failures(self, word: &str, times: usize) -> Self {
        self.failures
            .lock()
            .insert(normalize_lemma(word).unwrap_or_default(), times);
        self
    }

    fn insert(&mut self, src: &Lang, dst: &Lang, word: &str, raw: Vec<String>) {
        let pair = LangPair::new(src.clone(), dst.clone());
        self.pairs.insert(pair.clone());
        let key = normalize_lemma(word).unwrap_or_default();
        self.table.entry((pair, key)).or_default().extend(raw);
    }

    /// Loads a table from `src\tdst\tword\ttranslation[\ttranslation...]` lines.
    /// Lines starting with `#` are comments; `L\tL\t*` declares an identity pair.
    pub fn from_tsv<R: BufRead>(name: &str, reader: R) -> Result<Self, DataError> {
        let mut mock = MockProvider::new(name);
        for (idx, line) in reader.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| match e.kind() {
                std::io::ErrorKind::InvalidData => DataError::Encoding { line: lineno },
                _ => DataError::Io(e),
            })?;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() < 3 {
                return Err(DataError::parse(
                    lineno,
                    "expected src, dst and word fields",
                ));
            }
            let src = Lang::new(fields[0].trim())?;
            let dst = Lang::new(fields[1].trim())?;
            if fields[2] == "*" && src == dst {
                mock = mock.with_identity(&src);
                continue;
            }
            let raw = fields[3..].iter().map(|s| s.to_string()).collect();
            mock.insert(&src, &dst, fields[2], raw);
        }
        Ok(mock)
    }

    /// Number of translate calls that reached this provider.
    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::SeqCst)
    }
}

impl TranslationProvider for MockProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        Capabilities::Pairs(self.pairs.clone())
    }

    fn translate(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError> {
        ensure_supported(self, src, dst)?;
        self.hits.fetch_add(1, Ordering::SeqCst);
        let Some(key) = normalize_lemma(word) else {
            return Ok(Vec::new());
        };
        {
            let mut failures = self.failures.lock();
            if let Some(left) = failures.get_mut(&key) {
                if *left > 0 {
                    *left -= 1;
                    return Err(ProviderError::Transport {
                        provider: self.name.clone(),
                        message: format!("injected failure for {key:?}"),
                    });
                }
            }
        }
        if src == dst && self.identity.contains(src) {
            return Ok(vec![key]);
        }
        let pair = LangPair::new(src.clone(), dst.clone());
        Ok(self
            .table
            .get(&(pair, key))
            .map(|raw| split_alternatives(raw.iter().map(String::as_str)))
            .unwrap_or_default())
    }
}
