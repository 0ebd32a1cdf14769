//! Candidate generation over aligned Wordnet tables.
//!
//! Each approach walks the union of offset-pos keys in ascending order and
//! builds one [`CandidateSet`] per synset that yields at least one
//! translation. Synsets are processed independently on a bounded worker
//! pool; transport failures are retried and then quarantined to the run
//! report, while capability errors abort the run.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};
use std::sync::Arc;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{Approach, Candidate, CandidateSet, GeneratedWordnet, LexiconError};
use crate::providers::{
    pivot_translate, IdentityProvider, LangPair, ProviderError, ProviderRegistry,
    TranslationProvider,
};
use crate::ranking::{rank_and_select, SelectionOutcome};
use crate::wn_data::{Lang, OffsetPos, WordnetTable};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Provider(#[from] ProviderError),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub approach: Approach,
    pub target_lang: Lang,
    /// Hub language for IWND.
    pub pivot_lang: Lang,
    pub providers: ProviderRegistry,
    /// Upper bound on synsets translated concurrently.
    pub workers: usize,
    /// Extra attempts after a transport failure.
    pub retries: usize,
    pub retry_backoff: Duration,
}

impl PipelineConfig {
    pub fn new(approach: Approach, target_lang: Lang, providers: ProviderRegistry) -> Self {
        PipelineConfig {
            approach,
            target_lang,
            pivot_lang: Lang::new("eng").expect("valid code"),
            providers,
            workers: 1,
            retries: 2,
            retry_backoff: Duration::ZERO,
        }
    }

    /// Language pairs that need an assigned provider for these wordnets.
    pub fn required_pairs(&self, wordnets: &[&WordnetTable]) -> BTreeSet<LangPair> {
        let target = &self.target_lang;
        let pivot = &self.pivot_lang;
        let mut pairs = BTreeSet::new();
        for wn in wordnets {
            match self.approach {
                Approach::Dr | Approach::Iw => {
                    pairs.insert(LangPair::new(wn.lang.clone(), target.clone()));
                }
                Approach::Iwnd => {
                    if &wn.lang != pivot {
                        pairs.insert(LangPair::new(wn.lang.clone(), pivot.clone()));
                    }
                    pairs.insert(LangPair::new(pivot.clone(), target.clone()));
                }
            }
        }
        pairs
    }

    fn validate(
        &self,
        expected: Approach,
        wordnets: &[&WordnetTable],
    ) -> Result<(), PipelineError> {
        if self.approach != expected {
            return Err(PipelineError::Config(format!(
                "configured approach {} but {} was requested",
                self.approach, expected
            )));
        }
        if wordnets.is_empty() {
            return Err(PipelineError::Config("no intermediate wordnets".into()));
        }
        if expected == Approach::Dr && (wordnets.len() != 1 || wordnets[0].lang.as_str() != "eng") {
            return Err(PipelineError::Config(
                "DR takes exactly the English PWN table".into(),
            ));
        }
        let mut names = BTreeSet::new();
        for wn in wordnets {
            if !names.insert(wn.name.as_str()) {
                return Err(PipelineError::Config(format!(
                    "wordnet {} listed twice",
                    wn.name
                )));
            }
        }
        for pair in self.required_pairs(wordnets) {
            self.providers.get(&pair.src, &pair.dst)?;
        }
        Ok(())
    }
}

/// Outcome of generation for one synset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum SynsetStatus {
    Generated { tokens: usize },
    Empty,
    Error { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub id: OffsetPos,
    #[serde(flatten)]
    pub status: SynsetStatus,
}

/// Per-synset audit trail of one generation run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub records: Vec<ReportRecord>,
}

impl RunReport {
    pub fn count(&self, pred: impl Fn(&SynsetStatus) -> bool) -> usize {
        self.records.iter().filter(|r| pred(&r.status)).count()
    }

    pub fn errors(&self) -> impl Iterator<Item = &ReportRecord> {
        self.records
            .iter()
            .filter(|r| matches!(r.status, SynsetStatus::Error { .. }))
    }

    /// One JSON object per line, in offset-pos order.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        for record in &self.records {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generation {
    pub approach: Approach,
    pub target_lang: Lang,
    pub candidates: BTreeMap<OffsetPos, CandidateSet>,
    pub report: RunReport,
}

impl Generation {
    /// Ranks and selects every candidate set, in offset-pos order.
    pub fn outcomes(&self) -> Vec<SelectionOutcome> {
        self.candidates.values().map(rank_and_select).collect()
    }

    /// The accepted words of this run, with provenance.
    pub fn select(&self) -> GeneratedWordnet {
        GeneratedWordnet::from_outcomes(self.target_lang.clone(), self.approach, &self.outcomes())
    }
}

pub fn generate_dr(pwn: &WordnetTable, cfg: &PipelineConfig) -> Result<Generation, PipelineError> {
    cfg.validate(Approach::Dr, &[pwn])?;
    run(&[pwn], cfg)
}

pub fn generate_iw(
    wordnets: &[&WordnetTable],
    cfg: &PipelineConfig,
) -> Result<Generation, PipelineError> {
    cfg.validate(Approach::Iw, wordnets)?;
    run(wordnets, cfg)
}

pub fn generate_iwnd(
    wordnets: &[&WordnetTable],
    cfg: &PipelineConfig,
) -> Result<Generation, PipelineError> {
    cfg.validate(Approach::Iwnd, wordnets)?;
    run(wordnets, cfg)
}

/// Dispatches on `cfg.approach`.
pub fn generate(
    wordnets: &[&WordnetTable],
    cfg: &PipelineConfig,
) -> Result<Generation, PipelineError> {
    match cfg.approach {
        Approach::Dr => match wordnets {
            [pwn] => generate_dr(pwn, cfg),
            _ => Err(PipelineError::Config(
                "DR takes exactly the English PWN table".into(),
            )),
        },
        Approach::Iw => generate_iw(wordnets, cfg),
        Approach::Iwnd => generate_iwnd(wordnets, cfg),
    }
}

/// Translation route for one source wordnet.
enum Route {
    Direct(Arc<dyn TranslationProvider>),
    Pivot {
        first: Arc<dyn TranslationProvider>,
        second: Arc<dyn TranslationProvider>,
    },
}

fn run(wordnets: &[&WordnetTable], cfg: &PipelineConfig) -> Result<Generation, PipelineError> {
    let routes = wordnets
        .iter()
        .map(|wn| route_for(wn, cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let ids: Vec<OffsetPos> = wordnets
        .iter()
        .flat_map(|wn| wn.ids().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers.max(1))
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    let results: Vec<(OffsetPos, Result<Option<CandidateSet>, ProviderError>)> =
        pool.install(|| {
            ids.par_iter()
                .map(|id| (*id, synset_candidates(*id, wordnets, &routes, cfg)))
                .collect()
        });

    let mut candidates = BTreeMap::new();
    let mut report = RunReport::default();
    for (id, result) in results {
        let status = match result {
            Ok(Some(cs)) => {
                let tokens = cs.num_candidates();
                candidates.insert(id, cs);
                SynsetStatus::Generated { tokens }
            }
            Ok(None) => SynsetStatus::Empty,
            Err(e) if e.is_retryable() => {
                log::warn!("{id}: skipped after retries: {e}");
                SynsetStatus::Error {
                    message: e.to_string(),
                }
            }
            Err(e) => return Err(e.into()),
        };
        report.records.push(ReportRecord { id, status });
    }

    Ok(Generation {
        approach: cfg.approach,
        target_lang: cfg.target_lang.clone(),
        candidates,
        report,
    })
}

fn route_for(wn: &WordnetTable, cfg: &PipelineConfig) -> Result<Route, PipelineError> {
    Ok(match cfg.approach {
        Approach::Dr | Approach::Iw => {
            Route::Direct(cfg.providers.get(&wn.lang, &cfg.target_lang)?)
        }
        Approach::Iwnd => {
            let first: Arc<dyn TranslationProvider> = if wn.lang == cfg.pivot_lang {
                Arc::new(IdentityProvider)
            } else {
                cfg.providers.get(&wn.lang, &cfg.pivot_lang)?
            };
            Route::Pivot {
                first,
                second: cfg.providers.get(&cfg.pivot_lang, &cfg.target_lang)?,
            }
        }
    })
}

fn synset_candidates(
    id: OffsetPos,
    wordnets: &[&WordnetTable],
    routes: &[Route],
    cfg: &PipelineConfig,
) -> Result<Option<CandidateSet>, ProviderError> {
    let mut candidates = Vec::new();
    for (wn, route) in wordnets.iter().zip(routes) {
        let Some(synset) = wn.get(&id) else {
            continue;
        };
        for word in &synset.words {
            match route {
                Route::Direct(provider) => {
                    let out =
                        with_retries(cfg, || provider.translate(word, &wn.lang, &cfg.target_lang))?;
                    candidates.extend(out.into_iter().map(|t| Candidate {
                        word: t,
                        source_wordnet: wn.name.clone(),
                        source_word: word.clone(),
                        pivot_word: None,
                    }));
                }
                Route::Pivot { first, second } => {
                    let out = with_retries(cfg, || {
                        pivot_translate(
                            word,
                            &wn.lang,
                            &cfg.target_lang,
                            &cfg.pivot_lang,
                            first.as_ref(),
                            second.as_ref(),
                        )
                    })?;
                    candidates.extend(out.into_iter().map(|(t, pivot)| Candidate {
                        word: t,
                        source_wordnet: wn.name.clone(),
                        source_word: word.clone(),
                        pivot_word: Some(pivot),
                    }));
                }
            }
        }
    }
    if candidates.is_empty() {
        return Ok(None);
    }
    // The configured wordnet count always covers the distinct sources here.
    let cs = CandidateSet::new(id, cfg.target_lang.clone(), candidates, wordnets.len())
        .expect("every source wordnet is configured");
    Ok(Some(cs))
}

fn with_retries<T>(
    cfg: &PipelineConfig,
    mut f: impl FnMut() -> Result<T, ProviderError>,
) -> Result<T, ProviderError> {
    let mut attempt = 0;
    loop {
        match f() {
            Err(e) if e.is_retryable() && attempt < cfg.retries => {
                attempt += 1;
                if !cfg.retry_backoff.is_zero() {
                    std::thread::sleep(cfg.retry_backoff * attempt as u32);
                }
            }
            other => return other,
        }
    }
}
