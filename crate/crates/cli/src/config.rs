//! Declarative build configuration.
//!
//! ```toml
//! target_lang = "vie"
//! seed = 7
//! workers = 4
//! out_dir = "out"
//! cache = "cache.tsv"
//!
//! [[wordnets]]
//! name = "PWN"
//! lang = "eng"
//! format = "wndb"                  # or "omw"
//! paths = ["data.noun", "data.verb"]
//!
//! [[providers]]
//! name = "mt"
//! kind = "mock"                    # mock | dictionary | identity | http
//! path = "mt.tsv"
//!
//! [assign]                         # "src-dst" = provider name
//! "eng-vie" = "mt"
//!
//! [[runs]]
//! approach = "IW"
//! wordnets = ["PWN"]
//! assign = { "eng-vie" = "mt" }    # optional per-run override
//! ```
//!
//! Relative paths are resolved against the directory holding the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use serde::Deserialize;
use wnsynth::wn_data::{Lang, Pos};
use wnsynth::Approach;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildConfig {
    pub target_lang: String,
    #[serde(default)]
    pub pivot_lang: Option<String>,
    /// Export name written into the tab header.
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub retries: Option<usize>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub cache: Option<PathBuf>,
    #[serde(default)]
    pub pwn_total: Option<usize>,
    pub wordnets: Vec<WordnetSpec>,
    #[serde(default)]
    pub providers: Vec<ProviderSpec>,
    #[serde(default)]
    pub assign: BTreeMap<String, String>,
    pub runs: Vec<RunSpec>,
}

fn default_workers() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Wndb,
    Omw,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordnetSpec {
    pub name: String,
    pub lang: String,
    pub format: Format,
    pub paths: Vec<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProviderSpec {
    Mock {
        name: String,
        path: PathBuf,
    },
    Dictionary {
        name: String,
        path: PathBuf,
        src: String,
        dst: String,
    },
    Identity {
        name: String,
    },
    Http {
        name: String,
        endpoint: String,
        /// Environment variable holding the API key.
        #[serde(default)]
        api_key_env: Option<String>,
        pairs: Vec<String>,
        #[serde(default)]
        qps: Option<f64>,
        #[serde(default)]
        max_in_flight: Option<usize>,
        #[serde(default)]
        timeout_secs: Option<u64>,
    },
}

impl ProviderSpec {
    pub fn name(&self) -> &str {
        match self {
            ProviderSpec::Mock { name, .. }
            | ProviderSpec::Dictionary { name, .. }
            | ProviderSpec::Identity { name }
            | ProviderSpec::Http { name, .. } => name,
        }
    }

    pub fn path(&self) -> Option<&Path> {
        match self {
            ProviderSpec::Mock { path, .. } | ProviderSpec::Dictionary { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub approach: String,
    pub wordnets: Vec<String>,
    #[serde(default)]
    pub assign: BTreeMap<String, String>,
}

impl RunSpec {
    pub fn approach(&self) -> anyhow::Result<Approach> {
        self.approach.parse().map_err(|_| {
            anyhow!(
                "unknown approach {:?} (expected DR, IW or IWND)",
                self.approach
            )
        })
    }
}

impl BuildConfig {
    pub fn load(path: &Path) -> anyhow::Result<BuildConfig> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut config: BuildConfig =
            toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.resolve_paths(base);
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for wn in &mut self.wordnets {
            wn.paths.iter_mut().for_each(join);
        }
        for provider in &mut self.providers {
            match provider {
                ProviderSpec::Mock { path, .. } | ProviderSpec::Dictionary { path, .. } => {
                    join(path)
                }
                _ => {}
            }
        }
        if let Some(out) = &mut self.out_dir {
            join(out);
        }
        if let Some(cache) = &mut self.cache {
            join(cache);
        }
    }

    pub fn target_lang(&self) -> anyhow::Result<Lang> {
        Lang::new(&self.target_lang).map_err(|e| anyhow!("target_lang: {e}"))
    }

    pub fn pivot_lang(&self) -> anyhow::Result<Option<Lang>> {
        self.pivot_lang
            .as_deref()
            .map(|l| Lang::new(l).map_err(|e| anyhow!("pivot_lang: {e}")))
            .transpose()
    }

    /// Checks cross references before any resource is read.
    pub fn validate(&self) -> anyhow::Result<()> {
        self.target_lang()?;
        self.pivot_lang()?;
        if self.workers == 0 {
            bail!("workers must be at least 1");
        }
        if self.runs.is_empty() {
            bail!("no [[runs]] configured");
        }
        let mut names = BTreeMap::new();
        for wn in &self.wordnets {
            Lang::new(&wn.lang).map_err(|e| anyhow!("wordnet {}: {e}", wn.name))?;
            if wn.paths.is_empty() {
                bail!("wordnet {} lists no paths", wn.name);
            }
            if names.insert(wn.name.as_str(), ()).is_some() {
                bail!("wordnet {} defined twice", wn.name);
            }
        }
        let mut providers = BTreeMap::new();
        for p in &self.providers {
            if providers.insert(p.name(), ()).is_some() {
                bail!("provider {} defined twice", p.name());
            }
        }
        let check_assign = |assign: &BTreeMap<String, String>| -> anyhow::Result<()> {
            for (pair, provider) in assign {
                parse_pair(pair)?;
                if !providers.contains_key(provider.as_str()) {
                    bail!("pair {pair} assigned to undefined provider {provider}");
                }
            }
            Ok(())
        };
        check_assign(&self.assign)?;
        for run in &self.runs {
            run.approach()?;
            check_assign(&run.assign)?;
            for name in &run.wordnets {
                if !names.contains_key(name.as_str()) {
                    bail!("run {} names undefined wordnet {name}", run.approach);
                }
            }
        }
        Ok(())
    }
}

/// Parses `"eng-vie"`.
pub fn parse_pair(pair: &str) -> anyhow::Result<(Lang, Lang)> {
    let (src, dst) = pair
        .split_once('-')
        .ok_or_else(|| anyhow!("language pair {pair:?} must look like \"eng-vie\""))?;
    let src = Lang::new(src).map_err(|e| anyhow!("pair {pair}: {e}"))?;
    let dst = Lang::new(dst).map_err(|e| anyhow!("pair {pair}: {e}"))?;
    Ok((src, dst))
}

/// Part of speech of a WNDB file, from its `data.<pos>` name.
pub fn wndb_pos(path: &Path) -> anyhow::Result<Pos> {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    Ok(match ext {
        "noun" => Pos::Noun,
        "verb" => Pos::Verb,
        "adj" => Pos::Adjective,
        "adv" => Pos::Adverb,
        _ => bail!(
            "{}: WNDB files must be named data.noun/verb/adj/adv",
            path.display()
        ),
    })
}
