use std::collections::BTreeSet;
use std::sync::Arc;

use super::{ensure_supported, Capabilities, LangPair, ProviderError, TranslationProvider};
use crate::wn_data::{BilingualDictionary, Lang};

/// Translates exact normalized headword matches through one dictionary.
#[derive(Debug, Clone)]
pub struct DictionaryProvider {
    name: String,
    dict: Arc<BilingualDictionary>,
}

impl DictionaryProvider {
    pub fn new(name: &str, dict: Arc<BilingualDictionary>) -> Self {
        DictionaryProvider {
            name: name.to_string(),
            dict,
        }
    }

    pub fn dictionary(&self) -> &BilingualDictionary {
        &self.dict
    }
}

impl TranslationProvider for DictionaryProvider {
    fn name(&self) -> &str {
        &self.name
    }

    fn capabilities(&self) -> Capabilities {
        let pair = LangPair::new(self.dict.src_lang.clone(), self.dict.dst_lang.clone());
        Capabilities::Pairs(BTreeSet::from([pair]))
    }

    fn translate(&self, word: &str, src: &Lang, dst: &Lang) -> Result<Vec<String>, ProviderError> {
        ensure_supported(self, src, dst)?;
        Ok(self.dict.lookup(word).to_vec())
    }
}
