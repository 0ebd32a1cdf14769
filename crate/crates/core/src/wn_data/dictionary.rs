use std::collections::HashMap;
use std::io::BufRead;

use super::{normalize_lemma, DataError, Lang, Loaded, Warning};

/// A headword → translations dictionary loaded from a TSV file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilingualDictionary {
    pub src_lang: Lang,
    pub dst_lang: Lang,
    entries: HashMap<String, Vec<String>>,
    entry_count: usize,
}

impl BilingualDictionary {
    pub fn new(src_lang: Lang, dst_lang: Lang) -> Self {
        BilingualDictionary {
            src_lang,
            dst_lang,
            entries: HashMap::new(),
            entry_count: 0,
        }
    }

    /// Adds a pair after normalizing both sides. Returns whether the pair
    /// was new.
    pub fn add(&mut self, headword: &str, translation: &str) -> bool {
        let (Some(head), Some(trans)) = (normalize_lemma(headword), normalize_lemma(translation))
        else {
            return false;
        };
        let list = self.entries.entry(head).or_default();
        if list.contains(&trans) {
            return false;
        }
        list.push(trans);
        self.entry_count += 1;
        true
    }

    /// Translations for an exact (normalized) headword, in first-seen order.
    pub fn lookup(&self, headword: &str) -> &[String] {
        normalize_lemma(headword)
            .and_then(|h| self.entries.get(&h))
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Number of distinct (headword, translation) pairs.
    pub fn entry_count(&self) -> usize {
        self.entry_count
    }

    pub fn headword_count(&self) -> usize {
        self.entries.len()
    }
}

/// Parses `headword\ttranslation[\ttranslation...]` lines.
///
/// Lines without a tab are skipped and reported as warnings.
pub fn parse_dictionary_tsv<R: BufRead>(
    reader: R,
    src_lang: Lang,
    dst_lang: Lang,
) -> Result<Loaded<BilingualDictionary>, DataError> {
    let mut dict = BilingualDictionary::new(src_lang, dst_lang);
    let mut warnings = Vec::new();

    for (idx, line) in reader.split(b'\n').enumerate() {
        let lineno = idx + 1;
        let bytes = line?;
        let line = std::str::from_utf8(&bytes).map_err(|_| DataError::Encoding { line: lineno })?;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let Some((head, rest)) = line.split_once('\t') else {
            warnings.push(Warning {
                line: lineno,
                message: "no tab separator; line skipped".into(),
            });
            continue;
        };
        for translation in rest.split('\t') {
            dict.add(head, translation);
        }
    }

    if !warnings.is_empty() {
        log::warn!(
            "dictionary {}->{}: skipped {} lines without a tab",
            dict.src_lang,
            dict.dst_lang,
            warnings.len()
        );
    }
    Ok(Loaded {
        value: dict,
        warnings,
    })
}
