use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use anyhow::{anyhow, Context};
use serde::Serialize;
use wnsynth::assembly::{
    coverage_report, merge_wordnets, write_tab, CoverageReport, PWN_SYNSET_TOTAL,
};
use wnsynth::pipeline::{generate, PipelineConfig, PipelineError, ReportRecord};
use wnsynth::providers::{
    cached, DictionaryProvider, HttpProvider, HttpProviderConfig, IdentityProvider, LangPair,
    MockProvider, ProviderError, ProviderRegistry, TranslationCache, TranslationProvider,
};
use wnsynth::wn_data::{
    parse_dictionary_tsv, parse_omw_tab, parse_wndb, Lang, Warning, WordnetTable,
};
use wnsynth::{Approach, GeneratedWordnet};
use wnsynth_review::ProvenanceLine;

use crate::config::{parse_pair, wndb_pos, BuildConfig, Format, ProviderSpec};
use crate::{CliError, ResultExt};

/// Everything that determines the artifacts of a build. Serialized into
/// every output file.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunManifest {
    pub config: String,
    pub resources: BTreeMap<String, Vec<String>>,
    pub cache: Option<String>,
    pub runs: Vec<ManifestRun>,
    pub target_lang: Lang,
    pub pivot_lang: Lang,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ManifestRun {
    pub approach: Approach,
    pub wordnets: Vec<String>,
    pub assign: BTreeMap<String, String>,
}

impl RunManifest {
    fn new(
        config_path: &Path,
        config: &BuildConfig,
        target: &Lang,
        pivot: &Lang,
    ) -> anyhow::Result<Self> {
        let display = |p: &Path| p.display().to_string();
        let mut resources = BTreeMap::new();
        for wn in &config.wordnets {
            resources.insert(
                format!("wordnet:{}", wn.name),
                wn.paths.iter().map(|p| display(p)).collect(),
            );
        }
        for p in &config.providers {
            let paths = p.path().map(display).into_iter().collect();
            resources.insert(format!("provider:{}", p.name()), paths);
        }
        let runs = config
            .runs
            .iter()
            .map(|r| {
                let mut assign = config.assign.clone();
                assign.extend(r.assign.clone());
                Ok(ManifestRun {
                    approach: r.approach()?,
                    wordnets: r.wordnets.clone(),
                    assign,
                })
            })
            .collect::<anyhow::Result<_>>()?;
        Ok(RunManifest {
            config: display(config_path),
            resources,
            cache: config.cache.as_deref().map(display),
            runs,
            target_lang: target.clone(),
            pivot_lang: pivot.clone(),
            seed: config.seed,
            workers: config.workers,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub target_lang: Option<String>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub cache: Option<PathBuf>,
}

/// Paths of the files written by a build.
#[derive(Debug)]
pub struct BuildOutput {
    pub export: PathBuf,
    pub coverage: Vec<CoverageReport>,
}

pub fn run_build(config_path: &Path, overrides: Overrides) -> Result<BuildOutput, CliError> {
    let mut config = BuildConfig::load(config_path).input()?;
    if let Some(lang) = overrides.target_lang {
        config.target_lang = lang;
    }
    if let Some(seed) = overrides.seed {
        config.seed = seed;
    }
    if let Some(workers) = overrides.workers {
        config.workers = workers;
    }
    if overrides.out_dir.is_some() {
        config.out_dir = overrides.out_dir;
    }
    if overrides.cache.is_some() {
        config.cache = overrides.cache;
    }
    config.validate().input()?;

    let target = config.target_lang().input()?;
    let pivot = config
        .pivot_lang()
        .input()?
        .unwrap_or_else(|| Lang::new("eng").expect("valid code"));
    let manifest = RunManifest::new(config_path, &config, &target, &pivot).input()?;
    let manifest_json = manifest.to_json();

    let tables = load_wordnets(&config).input()?;
    let cache = match &config.cache {
        Some(path) => Some(Arc::new(TranslationCache::open(path).input()?)),
        None => None,
    };
    let providers = load_providers(&config, cache.as_ref()).input()?;

    let mut parts = Vec::new();
    let mut reports: Vec<(Approach, Vec<ReportRecord>)> = Vec::new();
    for (run, planned) in config.runs.iter().zip(&manifest.runs) {
        let approach = planned.approach;
        let mut registry = ProviderRegistry::new();
        for (pair, name) in &planned.assign {
            let (src, dst) = parse_pair(pair).input()?;
            registry
                .assign(src, dst, providers[name.as_str()].clone())
                .map_err(|e| CliError::Input(anyhow!("pair {pair}: {e}")))?;
        }
        let mut cfg = PipelineConfig::new(approach, target.clone(), registry);
        cfg.pivot_lang = pivot.clone();
        cfg.workers = config.workers;
        if let Some(retries) = config.retries {
            cfg.retries = retries;
        }
        cfg.retry_backoff = Duration::from_millis(200);
        let selected: Vec<&WordnetTable> =
            run.wordnets.iter().map(|n| &tables[n.as_str()]).collect();

        log::info!("{approach}: generating over {}", run.wordnets.join(", "));
        let generation = generate(&selected, &cfg).map_err(classify)?;
        let errors = generation.report.errors().count();
        if errors > 0 {
            log::warn!("{approach}: {errors} synsets skipped after transport failures");
        }
        let gw = generation.select();
        log::info!(
            "{approach}: {} candidate sets, {} synsets accepted",
            generation.candidates.len(),
            gw.len()
        );
        reports.push((approach, generation.report.records));
        parts.push(gw);
    }

    let merged = merge_wordnets(&parts).runtime()?;
    let pwn_total = config.pwn_total.unwrap_or(PWN_SYNSET_TOTAL);
    let mut coverage: Vec<CoverageReport> = parts
        .iter()
        .map(|p| coverage_report(p, pwn_total))
        .collect();
    if parts.len() > 1 {
        coverage.push(coverage_report(&merged, pwn_total));
    }

    let out_dir = config.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))
        .runtime()?;
    let export = out_dir.join(format!("wn-data-{target}.tab"));
    let name = config
        .name
        .clone()
        .unwrap_or_else(|| format!("wnsynth-{target}"));
    write_artifacts(
        &out_dir,
        &export,
        &name,
        &merged,
        &coverage,
        &reports,
        &manifest_json,
    )
    .runtime()?;

    if let Some(cache) = &cache {
        log::info!("translation cache holds {} records", cache.len());
    }
    Ok(BuildOutput { export, coverage })
}

fn classify(err: PipelineError) -> CliError {
    match &err {
        PipelineError::Provider(ProviderError::Transport { .. } | ProviderError::Cache(_))
        | PipelineError::Pool(_) => CliError::Runtime(err.into()),
        _ => CliError::Input(err.into()),
    }
}

fn report_warnings(source: &Path, warnings: &[Warning]) {
    for w in warnings {
        log::warn!("{}: line {}: {}", source.display(), w.line, w.message);
    }
}

fn load_wordnets(config: &BuildConfig) -> anyhow::Result<BTreeMap<&str, WordnetTable>> {
    let mut tables = BTreeMap::new();
    for spec in &config.wordnets {
        let lang = Lang::new(&spec.lang)?;
        let mut table = WordnetTable::new(&spec.name, lang.clone());
        for path in &spec.paths {
            let reader = BufReader::new(
                File::open(path).with_context(|| format!("opening {}", path.display()))?,
            );
            let loaded = match spec.format {
                Format::Wndb => {
                    if lang.as_str() != "eng" {
                        anyhow::bail!("wordnet {}: WNDB files are English", spec.name);
                    }
                    parse_wndb(reader, wndb_pos(path)?).map(|mut loaded| {
                        loaded.value = loaded.value.renamed(&spec.name);
                        loaded
                    })
                }
                Format::Omw => parse_omw_tab(reader, &spec.name, &lang),
            }
            .with_context(|| format!("loading {}", path.display()))?;
            report_warnings(path, &loaded.warnings);
            table
                .extend(loaded.value)
                .with_context(|| format!("merging {}", path.display()))?;
        }
        log::info!("wordnet {}: {} synsets", spec.name, table.len());
        tables.insert(spec.name.as_str(), table);
    }
    Ok(tables)
}

fn load_providers(
    config: &BuildConfig,
    cache: Option<&Arc<TranslationCache>>,
) -> anyhow::Result<BTreeMap<String, Arc<dyn TranslationProvider>>> {
    let mut out = BTreeMap::new();
    for spec in &config.providers {
        let provider: Arc<dyn TranslationProvider> = match spec {
            ProviderSpec::Identity { .. } => {
                out.insert(
                    spec.name().to_string(),
                    Arc::new(IdentityProvider) as Arc<dyn TranslationProvider>,
                );
                continue;
            }
            ProviderSpec::Mock { name, path } => {
                let reader = BufReader::new(
                    File::open(path).with_context(|| format!("opening {}", path.display()))?,
                );
                Arc::new(
                    MockProvider::from_tsv(name, reader)
                        .with_context(|| format!("loading {}", path.display()))?,
                )
            }
            ProviderSpec::Dictionary {
                name,
                path,
                src,
                dst,
            } => {
                let reader = BufReader::new(
                    File::open(path).with_context(|| format!("opening {}", path.display()))?,
                );
                let loaded = parse_dictionary_tsv(reader, Lang::new(src)?, Lang::new(dst)?)
                    .with_context(|| format!("loading {}", path.display()))?;
                report_warnings(path, &loaded.warnings);
                Arc::new(DictionaryProvider::new(name, Arc::new(loaded.value)))
            }
            ProviderSpec::Http {
                name,
                endpoint,
                api_key_env,
                pairs,
                qps,
                max_in_flight,
                timeout_secs,
            } => {
                let api_key = match api_key_env {
                    Some(var) => Some(
                        std::env::var(var)
                            .with_context(|| format!("provider {name}: ${var} is not set"))?,
                    ),
                    None => None,
                };
                let pairs = pairs
                    .iter()
                    .map(|p| parse_pair(p).map(|(s, d)| LangPair::new(s, d)))
                    .collect::<anyhow::Result<_>>()?;
                Arc::new(HttpProvider::new(HttpProviderConfig {
                    name: name.clone(),
                    endpoint: endpoint.clone(),
                    api_key,
                    pairs,
                    qps: *qps,
                    max_in_flight: max_in_flight.unwrap_or(4),
                    timeout: Duration::from_secs(timeout_secs.unwrap_or(30)),
                })?)
            }
        };
        let provider = match cache {
            Some(cache) => {
                Arc::new(cached(provider, cache.clone())) as Arc<dyn TranslationProvider>
            }
            None => provider,
        };
        out.insert(spec.name().to_string(), provider);
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportLine<'a> {
    approach: Approach,
    #[serde(flatten)]
    record: &'a ReportRecord,
}

fn write_artifacts(
    out_dir: &Path,
    export: &Path,
    name: &str,
    merged: &GeneratedWordnet,
    coverage: &[CoverageReport],
    reports: &[(Approach, Vec<ReportRecord>)],
    manifest: &str,
) -> anyhow::Result<()> {
    let create = |path: &Path| -> anyhow::Result<BufWriter<File>> {
        Ok(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ))
    };
    let manifest_line = format!("{{\"manifest\":{manifest}}}");

    write_tab(
        merged,
        name,
        &[("manifest", manifest.to_string())],
        create(export)?,
    )?;

    let mut txt = create(&out_dir.join("coverage.txt"))?;
    writeln!(txt, "# manifest={manifest}")?;
    for report in coverage {
        writeln!(txt, "{report}")?;
    }
    txt.flush()?;

    let mut jsonl = create(&out_dir.join("coverage.jsonl"))?;
    writeln!(jsonl, "{manifest_line}")?;
    for report in coverage {
        writeln!(jsonl, "{}", report.to_json_line())?;
    }
    jsonl.flush()?;

    let mut run_report = create(&out_dir.join("run-report.jsonl"))?;
    writeln!(run_report, "{manifest_line}")?;
    for (approach, records) in reports {
        for record in records {
            serde_json::to_writer(
                &mut run_report,
                &ReportLine {
                    approach: *approach,
                    record,
                },
            )?;
            run_report.write_all(b"\n")?;
        }
    }
    run_report.flush()?;

    let mut provenance = create(&out_dir.join("provenance.jsonl"))?;
    writeln!(provenance, "{manifest_line}")?;
    for id in merged.entries().keys() {
        let line = ProvenanceLine {
            id: *id,
            provenance: merged.provenance(id).to_vec(),
        };
        serde_json::to_writer(&mut provenance, &line)?;
        provenance.write_all(b"\n")?;
    }
    provenance.flush()?;
    Ok(())
}
