use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use wnsynth::assembly::{aggregate_scores, ScoreSummary};
use wnsynth::lexicon::Provenance;
use wnsynth::wn_data::{parse_omw_tab_with_header, Lang, OffsetPos};

use crate::ServiceError;

/// Generated synsets being reviewed, loaded from a tab export and an
/// optional provenance sidecar.
#[derive(Debug, Clone)]
pub struct ReviewData {
    pub name: String,
    pub lang: Lang,
    pub entries: BTreeMap<OffsetPos, Vec<String>>,
    pub provenance: BTreeMap<OffsetPos, Vec<Provenance>>,
}

/// One line of the provenance sidecar written by `wnsynth build`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProvenanceLine {
    pub id: OffsetPos,
    pub provenance: Vec<Provenance>,
}

impl ReviewData {
    pub fn load(export: &Path, provenance: Option<&Path>) -> Result<Self, ServiceError> {
        let file = File::open(export).map_err(|e| ServiceError::Io(export.to_path_buf(), e))?;
        let (header, loaded) = parse_omw_tab_with_header(BufReader::new(file))
            .map_err(|e| ServiceError::InvalidExport(format!("{}: {e}", export.display())))?;
        let table = loaded.value;
        if table.is_empty() {
            return Err(ServiceError::InvalidExport(format!(
                "{}: no synsets",
                export.display()
            )));
        }
        let entries = table.synsets().map(|s| (s.id, s.words.clone())).collect();

        let mut prov = BTreeMap::new();
        if let Some(path) = provenance {
            let file = File::open(path).map_err(|e| ServiceError::Io(path.to_path_buf(), e))?;
            for (idx, line) in BufReader::new(file).lines().enumerate() {
                let line = line.map_err(|e| ServiceError::Io(path.to_path_buf(), e))?;
                if line.trim().is_empty() {
                    continue;
                }
                // The sidecar may start with a manifest record; skip anything
                // that is not a provenance line.
                let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| {
                    ServiceError::InvalidExport(format!("{}:{}: {e}", path.display(), idx + 1))
                })?;
                if value.get("manifest").is_some() {
                    continue;
                }
                let record: ProvenanceLine = serde_json::from_value(value).map_err(|e| {
                    ServiceError::InvalidExport(format!("{}:{}: {e}", path.display(), idx + 1))
                })?;
                prov.insert(record.id, record.provenance);
            }
        }

        Ok(ReviewData {
            name: header.name,
            lang: table.lang.clone(),
            entries,
            provenance: prov,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatingRecord {
    pub offset_pos: OffsetPos,
    pub target_lang: Lang,
    pub words: Vec<String>,
    pub score: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comment: Option<String>,
    pub rater: String,
    pub timestamp: String,
}

impl RatingRecord {
    pub fn timestamp_now() -> String {
        let now: DateTime<Utc> = Utc::now();
        now.to_rfc3339_opts(SecondsFormat::Millis, true)
    }
}

/// Append-only JSONL ratings log. Writes are serialized; the in-memory copy
/// is rebuilt from the file on open.
pub struct RatingsLog {
    path: PathBuf,
    file: Mutex<File>,
    records: RwLock<Vec<RatingRecord>>,
}

impl RatingsLog {
    pub fn open(path: impl AsRef<Path>) -> Result<Self, ServiceError> {
        let path = path.as_ref().to_path_buf();
        let io = |e| ServiceError::Io(path.clone(), e);
        let mut records = Vec::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path).map_err(io)?);
            for (idx, line) in reader.lines().enumerate() {
                let line = line.map_err(io)?;
                if line.trim().is_empty() {
                    continue;
                }
                let record: RatingRecord = serde_json::from_str(&line).map_err(|e| {
                    ServiceError::InvalidLog(format!("{}:{}: {e}", path.display(), idx + 1))
                })?;
                if !(1..=5).contains(&record.score) {
                    return Err(ServiceError::InvalidLog(format!(
                        "{}:{}: score {} outside 1..=5",
                        path.display(),
                        idx + 1,
                        record.score
                    )));
                }
                records.push(record);
            }
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(io)?;
        Ok(RatingsLog {
            path,
            file: Mutex::new(file),
            records: RwLock::new(records),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, record: RatingRecord) -> Result<RatingRecord, ServiceError> {
        let mut line = serde_json::to_string(&record).expect("record serializes");
        line.push('\n');
        let mut file = self.file.lock().expect("ratings writer poisoned");
        file.write_all(line.as_bytes())
            .and_then(|_| file.flush())
            .map_err(|e| ServiceError::Io(self.path.clone(), e))?;
        self.records
            .write()
            .expect("ratings poisoned")
            .push(record.clone());
        Ok(record)
    }

    pub fn len(&self) -> usize {
        self.records.read().expect("ratings poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn summary(&self) -> ScoreSummary {
        let records = self.records.read().expect("ratings poisoned");
        aggregate_scores(records.iter().map(|r| (r.offset_pos, r.score as i64)))
            .expect("stored scores are validated on append")
    }
}
