use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::AssemblyError;
use crate::lexicon::{format_hundredths, round_half_up_hundredths};
use crate::wn_data::OffsetPos;

/// Ratings of one synset on the 1..=5 scale.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeanScore {
    pub count: usize,
    pub sum: u64,
    /// Two-decimal mean, half-up.
    pub mean: String,
}

impl MeanScore {
    fn new(count: usize, sum: u64) -> Self {
        MeanScore {
            count,
            sum,
            mean: format_hundredths(round_half_up_hundredths(sum as u128, count as u128)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OverallScore {
    pub rated_synsets: usize,
    pub ratings: usize,
    /// Mean of the per-synset means, two decimals.
    pub mean: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoreSummary {
    pub per_synset: BTreeMap<OffsetPos, MeanScore>,
    /// `None` when nothing has been rated.
    pub overall: Option<OverallScore>,
}

impl fmt::Display for ScoreSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.overall {
            Some(o) => write!(
                f,
                "average {} over {} synsets ({} ratings)",
                o.mean, o.rated_synsets, o.ratings
            ),
            None => f.write_str("no data"),
        }
    }
}

/// Per-synset means and the overall mean across rated synsets. Every score
/// must be in 1..=5.
pub fn aggregate_scores<I>(ratings: I) -> Result<ScoreSummary, AssemblyError>
where
    I: IntoIterator<Item = (OffsetPos, i64)>,
{
    let mut totals: BTreeMap<OffsetPos, (usize, u64)> = BTreeMap::new();
    for (id, score) in ratings {
        if !(1..=5).contains(&score) {
            return Err(AssemblyError::ScoreOutOfRange { id, score });
        }
        let t = totals.entry(id).or_default();
        t.0 += 1;
        t.1 += score as u64;
    }
    if totals.is_empty() {
        return Ok(ScoreSummary::default());
    }

    let mut mean_of_means = BigRational::from_integer(0.into());
    for (count, sum) in totals.values() {
        mean_of_means += BigRational::new((*sum).into(), (*count).into());
    }
    mean_of_means /= BigRational::from_integer(totals.len().into());
    let hundredths: num_bigint::BigInt =
        (mean_of_means.numer() * 200u32 + mean_of_means.denom()) / (mean_of_means.denom() * 2u32);
    let hundredths: u128 = hundredths.try_into().expect("mean is at most 5");

    let ratings = totals.values().map(|(c, _)| c).sum();
    Ok(ScoreSummary {
        overall: Some(OverallScore {
            rated_synsets: totals.len(),
            ratings,
            mean: format_hundredths(hundredths),
        }),
        per_synset: totals
            .into_iter()
            .map(|(id, (count, sum))| (id, MeanScore::new(count, sum)))
            .collect(),
    })
}
