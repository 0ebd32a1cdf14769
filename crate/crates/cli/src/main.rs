mod build;
mod config;

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use wnsynth::assembly::{sample_eval_set, table_to_generated, CoverageReport, PWN_SYNSET_TOTAL};
use wnsynth::wn_data::{parse_omw_tab_with_header, OmwHeader, WordnetTable};
use wnsynth::Approach;
use wnsynth_review::{AppState, RatingsLog, ReviewData};

use build::{run_build, Overrides};

/// Builds Wordnets for new languages from PWN-aligned Wordnets and
/// translation providers, and serves them for review.
#[derive(Parser)]
#[command(name = "wnsynth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate, rank, select and export a Wordnet as described by a config file.
    Build {
        #[arg(long, short)]
        config: PathBuf,
        #[arg(long)]
        target_lang: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Translation cache file, created if missing.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Print synset count and coverage of a tab export.
    Stats {
        export: PathBuf,
        #[arg(long, default_value_t = PWN_SYNSET_TOTAL)]
        pwn_total: usize,
        /// Print a JSON object instead of a text line.
        #[arg(long)]
        json: bool,
    },
    /// Draw synsets for human rating and write a rating template.
    Sample {
        export: PathBuf,
        #[arg(short, long, default_value_t = 500)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Serve an export over HTTP for review and rating.
    Serve {
        export: PathBuf,
        #[arg(long)]
        ratings: PathBuf,
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: String,
        /// Provenance sidecar written by `build`.
        #[arg(long)]
        provenance: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes 1 and 2.
#[derive(Debug)]
pub enum CliError {
    /// Bad input, configuration or provider capability.
    Input(anyhow::Error),
    /// Failure while running (I/O, network, worker pool).
    Runtime(anyhow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

pub trait ResultExt<T> {
    fn input(self) -> Result<T, CliError>;
    fn runtime(self) -> Result<T, CliError>;
}

impl<T, E: Into<anyhow::Error>> ResultExt<T> for Result<T, E> {
    fn input(self) -> Result<T, CliError> {
        self.map_err(|e| CliError::Input(e.into()))
    }

    fn runtime(self) -> Result<T, CliError> {
        self.map_err(|e| CliError::Runtime(e.into()))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (CliError::Input(e) | CliError::Runtime(e)) = &err;
            eprintln!("error: {e:#}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Build {
            config,
            target_lang,
            seed,
            workers,
            out_dir,
            cache,
        } => {
            let out = run_build(
                &config,
                Overrides {
                    target_lang,
                    seed,
                    workers,
                    out_dir,
                    cache,
                },
            )?;
            let mut stdout = io::stdout().lock();
            for report in &out.coverage {
                writeln!(stdout, "{report}").runtime()?;
            }
            writeln!(stdout, "wrote {}", out.export.display()).runtime()?;
            Ok(())
        }
        Command::Stats {
            export,
            pwn_total,
            json,
        } => {
            if pwn_total == 0 {
                return Err(CliError::Input(anyhow::anyhow!(
                    "--pwn-total must be positive"
                )));
            }
            let (header, table) = read_export(&export).input()?;
            let approaches = header_approaches(&header);
            let report =
                CoverageReport::new(table.lang.clone(), approaches, table.len(), pwn_total);
            if json {
                println!("{}", report.to_json_line());
            } else {
                println!("{report}");
            }
            Ok(())
        }
        Command::Sample {
            export,
            n,
            seed,
            out,
        } => {
            let (_, table) = read_export(&export).input()?;
            let sample = sample_eval_set(&table_to_generated(&table), n, seed);
            match out {
                Some(path) => {
                    let file = File::create(&path)
                        .with_context(|| format!("creating {}", path.display()))
                        .runtime()?;
                    sample.write_template(BufWriter::new(file)).runtime()?;
                    eprintln!(
                        "wrote {} synsets to {}",
                        sample.entries.len(),
                        path.display()
                    );
                }
                None => sample.write_template(io::stdout().lock()).runtime()?,
            }
            Ok(())
        }
        Command::Serve {
            export,
            ratings,
            bind,
            provenance,
        } => serve(&export, &ratings, &bind, provenance.as_deref()),
    }
}

fn read_export(path: &Path) -> anyhow::Result<(OmwHeader, WordnetTable)> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let (header, loaded) = parse_omw_tab_with_header(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok((header, loaded.value))
}

/// Approaches named by an `approach=DR+IW` header field.
fn header_approaches(header: &OmwHeader) -> Vec<Approach> {
    header
        .extra
        .iter()
        .filter_map(|f| f.strip_prefix("approach="))
        .flat_map(|list| list.split('+'))
        .filter_map(|a| a.parse().ok())
        .collect()
}

fn serve(
    export: &Path,
    ratings: &Path,
    bind: &str,
    provenance: Option<&Path>,
) -> Result<(), CliError> {
    let data = ReviewData::load(export, provenance).input()?;
    let log = RatingsLog::open(ratings).input()?;
    log::info!(
        "{} synsets, {} stored ratings",
        data.entries.len(),
        log.len()
    );

    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .runtime()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .with_context(|| format!("binding {bind}"))
            .runtime()?;
        let addr = listener.local_addr().runtime()?;
        println!("listening on http://{addr}");
        io::stdout().flush().runtime()?;
        let shutdown = async {
            if tokio::signal::ctrl_c().await.is_ok() {
                log::info!("shutting down");
            }
        };
        wnsynth_review::serve(listener, AppState::new(data, log), shutdown)
            .await
            .runtime()
    })
}
