use std::io::{BufRead, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::AssemblyError;
use crate::lexicon::GeneratedWordnet;
use crate::wn_data::{DataError, OffsetPos};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalEntry {
    pub id: OffsetPos,
    pub words: Vec<String>,
    /// Filled in by a rater, 1..=5.
    pub score: Option<u8>,
}

/// Synsets drawn for human rating.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalSample {
    pub seed: u64,
    pub requested: usize,
    /// In offset-pos order.
    pub entries: Vec<EvalEntry>,
}

impl EvalSample {
    pub fn ids(&self) -> impl Iterator<Item = OffsetPos> + '_ {
        self.entries.iter().map(|e| e.id)
    }

    /// Rating template: a header with the seed, then
    /// `offset-pos\tword; word\t<score>` lines with the score left blank.
    pub fn write_template<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "# evaluation sample\tseed={}\trequested={}\tsize={}\tscale=5 excellent,4 good,3 average,2 fair,1 bad",
            self.seed,
            self.requested,
            self.entries.len()
        )?;
        for e in &self.entries {
            let score = e.score.map(|s| s.to_string()).unwrap_or_default();
            writeln!(out, "{}\t{}\t{}", e.id, e.words.join("; "), score)?;
        }
        out.flush()
    }

    /// Reads `(offset-pos, score)` pairs back from a filled-in template,
    /// skipping rows whose score is still blank.
    pub fn read_scores<R: BufRead>(reader: R) -> Result<Vec<(OffsetPos, i64)>, AssemblyError> {
        let mut out = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let bad = |msg: &str| {
                AssemblyError::Integrity(DataError::parse(idx + 1, msg.to_string()).to_string())
            };
            let fields: Vec<&str> = line.split('\t').collect();
            let id: OffsetPos = fields[0].parse().map_err(|_| bad("malformed offset-pos"))?;
            let score = fields.get(2).map(|s| s.trim()).unwrap_or("");
            if score.is_empty() {
                continue;
            }
            let score: i64 = score.parse().map_err(|_| bad("score is not an integer"))?;
            out.push((id, score));
        }
        Ok(out)
    }
}

/// Draws `min(n, |gw|)` synsets uniformly without replacement. The same
/// seed always selects the same synsets.
pub fn sample_eval_set(gw: &GeneratedWordnet, n: usize, seed: u64) -> EvalSample {
    let all: Vec<(&OffsetPos, &Vec<String>)> = gw.entries().iter().collect();
    let amount = n.min(all.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, all.len(), amount).into_vec();
    picked.sort_unstable();
    EvalSample {
        seed,
        requested: n,
        entries: picked
            .into_iter()
            .map(|i| EvalEntry {
                id: *all[i].0,
                words: all[i].1.clone(),
                score: None,
            })
            .collect(),
    }
}
