#![allow(dead_code)]

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::sync::Arc;

use wnsynth::lexicon::Approach;
use wnsynth::pipeline::PipelineConfig;
use wnsynth::providers::{DictionaryProvider, MockProvider, ProviderRegistry, TranslationProvider};
use wnsynth::wn_data::{parse_dictionary_tsv, parse_omw_tab, parse_wndb, Lang, Pos, WordnetTable};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/mini")
        .join(name)
}

pub fn lang(code: &str) -> Lang {
    Lang::new(code).unwrap()
}

pub fn open(name: &str) -> BufReader<File> {
    BufReader::new(File::open(fixture(name)).unwrap())
}

/// The four-wordnet mini suite plus its mock MT table and dictionary.
pub struct Suite {
    pub pwn: WordnetTable,
    pub fwn: WordnetTable,
    pub jwn: WordnetTable,
    pub wwn: WordnetTable,
    pub mt: Arc<MockProvider>,
    pub dict: Arc<DictionaryProvider>,
}

impl Suite {
    pub fn load() -> Suite {
        let mut pwn = parse_wndb(open("data.noun"), Pos::Noun).unwrap().value;
        pwn.extend(parse_wndb(open("data.verb"), Pos::Verb).unwrap().value)
            .unwrap();
        let omw = |file: &str, name: &str, code: &str| {
            parse_omw_tab(open(file), name, &lang(code)).unwrap().value
        };
        let dict = parse_dictionary_tsv(open("dict-eng-vie.tsv"), lang("eng"), lang("vie"))
            .unwrap()
            .value;
        Suite {
            pwn,
            fwn: omw("wn-data-fin.tab", "FWN", "fin"),
            jwn: omw("wn-data-jpn.tab", "JWN", "jpn"),
            wwn: omw("wn-data-fra.tab", "WWN", "fra"),
            mt: Arc::new(MockProvider::from_tsv("mt", open("mt.tsv")).unwrap()),
            dict: Arc::new(DictionaryProvider::new("dict-eng-vie", Arc::new(dict))),
        }
    }

    pub fn all(&self) -> Vec<&WordnetTable> {
        vec![&self.pwn, &self.fwn, &self.jwn, &self.wwn]
    }

    /// Direct MT for every source language, or MT into English followed by
    /// the dictionary for IWND.
    pub fn registry(&self, approach: Approach) -> ProviderRegistry {
        let mt: Arc<dyn TranslationProvider> = self.mt.clone();
        let mut reg = ProviderRegistry::new();
        match approach {
            Approach::Dr | Approach::Iw => {
                for src in ["eng", "fin", "jpn", "fra"] {
                    reg.assign(lang(src), lang("vie"), mt.clone()).unwrap();
                }
            }
            Approach::Iwnd => {
                for src in ["fin", "jpn", "fra"] {
                    reg.assign(lang(src), lang("eng"), mt.clone()).unwrap();
                }
                reg.assign(lang("eng"), lang("vie"), self.dict.clone())
                    .unwrap();
            }
        }
        reg
    }

    pub fn config(&self, approach: Approach) -> PipelineConfig {
        PipelineConfig::new(approach, lang("vie"), self.registry(approach))
    }
}
