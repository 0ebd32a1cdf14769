use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};

use super::{Capabilities, ProviderError, TranslationProvider};
use crate::wn_data::{normalize_lemma, Lang};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct CacheKey {
    provider: String,
    src: String,
    dst: String,
    word: String,
}

/// Append-only translation cache.
///
/// On disk, one record per line: `provider\tsrc\tdst\tword[\ttranslation...]`.
/// A record with no translations caches a miss. When a key appears more
/// than once, the first record wins.
pub struct TranslationCache {
    path: Option<PathBuf>,
    entries: RwLock<HashMap<CacheKey, Vec<String>>>,
    writer: Mutex<Option<File>>,
}

impl TranslationCache {
    pub fn in_memory() -> Self {
        TranslationCache {
            path: None,
            entries: RwLock::new(HashMap::new()),
            writer: Mutex::new(None),
        }
    }

    /// Opens (creating if needed) a cache file and loads its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, ProviderError> {
        let path = path.as_ref().to_path_buf();
        let io_err = |e: std::io::Error| ProviderError::Cache(format!("{}: {e}", path.display()));
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io_err)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(io_err)?;
                if line.is_empty() {
                    continue;
                }
                let fields: Vec<&str> = line.split('\t').collect();
                if fields.len() < 4 {
                    return Err(ProviderError::Cache(format!(
                        "{}: line {}: truncated record",
                        path.display(),
                        idx + 1
                    )));
                }
                let key = CacheKey {
                    provider: fields[0].to_string(),
                    src: fields[1].to_string(),
                    dst: fields[2].to_string(),
                    word: fields[3].to_string(),
                };
                entries
                    .entry(key)
                    .or_insert_with(|| fields[4..].iter().map(|s| s.to_string()).collect());
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io_err)?;
        Ok(TranslationCache {
            path: Some(path),
            entries: RwLock::new(entries),
            writer: Mutex::new(Some(file)),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.read().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.read().is_empty()
    }

    fn get(&self, key: &CacheKey) -> Option<Vec<String>> {
        self.entries.read().get(key).cloned()
    }

    /// Stores a record unless the key is already present. Returns the
    /// cached value, which is the earlier one if another writer got there first.
    fn put(&self, key: CacheKey, translations: Vec<String>) -> Result<Vec<String>, ProviderError> {
        let mut writer = self.writer.lock();
        if let Some(existing) = self.get(&key) {
            return Ok(existing);
        }
        if let Some(file) = writer.as_mut() {
            let line = render_record(&key, &translations);
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| ProviderError::Cache(e.to_string()))?;
        }
        self.entries.write().insert(key, translations.clone());
        Ok(translations)
    }

    /// Writes every record, sorted by key, to `out`.
    pub fn export_sorted(&self, out: impl AsRef<Path>) -> Result<(), ProviderError> {
        let io_err = |e: std::io::Error| ProviderError::Cache(e.to_string());
        let entries = self.entries.read();
        let mut keys: Vec<&CacheKey> = entries.keys().collect();
        keys.sort();
        let mut w = BufWriter::new(File::create(out).map_err(io_err)?);
        for key in keys {
            w.write_all(render_record(key, &entries[key]).as_bytes())
                .map_err(io_err)?;
        }
        w.flush().map_err(io_err)
    }
}

fn render_record(key: &CacheKey, translations: &[String]) -> String {
    let mut line = format!("{}\t{}\t{}\t{}", key.provider, key.src, key.dst, key.word);
    for t in translations {
        line.push('\t');
        line.push_str(t);
    }
    line.push('\n');
    line
}

/// A provider whose lookups are served from a [`TranslationCache`] when
/// possible and recorded there otherwise.
pub struct CachedProvider {
    inner: Arc<dyn TranslationProvider>,
    cache: Arc<TranslationCache>,
}

/// Wraps `provider` so its results are persisted in `cache` and replayed.
pub fn cached(
    provider: Arc<dyn TranslationProvider>,
    cache: Arc<TranslationCache>,
) -> CachedProvider {
    CachedProvider {
        inner: provider,
        cache,
    }
}

impl TranslationProvider for CachedProvider {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn capabilities(&self) -> Capabilities {
        self.inner.capabilities()
    }

    fn translate(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError> {
        super::ensure_supported(self, src, dst)?;
        let Some(word) = normalize_lemma(word) else {
            return Ok(Vec::new());
        };
        let key = CacheKey {
            provider: self.inner.name().to_string(),
            src: src.to_string(),
            dst: dst.to_string(),
            word,
        };
        if let Some(hit) = self.cache.get(&key) {
            return Ok(hit);
        }
        let fresh = self.inner.translate(&key.word, src, dst)?;
        self.cache.put(key, fresh)
    }
}
