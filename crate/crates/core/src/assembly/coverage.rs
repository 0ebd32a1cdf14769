use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lexicon::{format_hundredths, round_half_up_hundredths, Approach, GeneratedWordnet};
use crate::wn_data::Lang;

/// PWN 3.0 synsets linked across the Open Multilingual Wordnet.
pub const PWN_SYNSET_TOTAL: usize = 117_659;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoverageReport {
    pub target_lang: Lang,
    pub approaches: Vec<Approach>,
    pub synset_count: usize,
    pub pwn_synset_total: usize,
    /// Percentage rounded half-up to two decimals, e.g. `"63.94"`.
    pub coverage_percent: String,
}

impl CoverageReport {
    pub fn new(
        target_lang: Lang,
        approaches: Vec<Approach>,
        synset_count: usize,
        pwn_total: usize,
    ) -> Self {
        assert!(pwn_total > 0, "PWN total must be positive");
        let hundredths = round_half_up_hundredths(synset_count as u128 * 100, pwn_total as u128);
        CoverageReport {
            target_lang,
            approaches,
            synset_count,
            pwn_synset_total: pwn_total,
            coverage_percent: format_hundredths(hundredths),
        }
    }

    /// Coverage as a float, for tolerance checks.
    pub fn coverage_value(&self) -> f64 {
        self.coverage_percent.parse().unwrap_or(f64::NAN)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for CoverageReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let approaches: Vec<&str> = self.approaches.iter().map(|a| a.as_str()).collect();
        let approaches = if approaches.is_empty() {
            "-".to_string()
        } else {
            approaches.join("+")
        };
        write!(
            f,
            "lang {}  approach {}  synsets {}  coverage {}% of {}",
            self.target_lang,
            approaches,
            group_thousands(self.synset_count),
            self.coverage_percent,
            group_thousands(self.pwn_synset_total)
        )
    }
}

fn group_thousands(n: usize) -> String {
    let digits = n.to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(c);
    }
    out
}

/// Synset count and percentage of `pwn_total` covered by `gw`.
///
/// # Panics
///
/// If `pwn_total` is zero.
pub fn coverage_report(gw: &GeneratedWordnet, pwn_total: usize) -> CoverageReport {
    CoverageReport::new(
        gw.target_lang().clone(),
        gw.approaches().iter().copied().collect(),
        gw.len(),
        pwn_total,
    )
}
