use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use unicode_normalization::UnicodeNormalization;

use super::DataError;

/// ISO 639-3 language code (three lowercase ASCII letters).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lang(String);

impl Lang {
    pub fn new(code: &str) -> Result<Self, DataError> {
        if code.len() == 3 && code.bytes().all(|b| b.is_ascii_lowercase()) {
            Ok(Lang(code.to_string()))
        } else {
            Err(DataError::InvalidLang(code.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Lang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Lang {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lang::new(s)
    }
}

impl Serialize for Lang {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Lang {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Lang::new(&s).map_err(serde::de::Error::custom)
    }
}

/// Canonical lemma form: NFC, outer whitespace trimmed, inner whitespace runs
/// collapsed to one space, and lowercased when every letter is Latin script.
/// Returns `None` when nothing is left.
pub fn normalize_lemma(raw: &str) -> Option<String> {
    let composed: String = raw.nfc().collect();
    let mut collapsed = String::with_capacity(composed.len());
    for part in composed.split_whitespace() {
        if !collapsed.is_empty() {
            collapsed.push(' ');
        }
        collapsed.push_str(part);
    }
    if collapsed.is_empty() {
        return None;
    }
    if collapsed
        .chars()
        .filter(|c| c.is_alphabetic())
        .all(is_latin)
    {
        collapsed = collapsed.to_lowercase().nfc().collect();
    }
    Some(collapsed)
}

// Basic Latin through Latin Extended-B, IPA, and Latin Extended Additional
// (the Vietnamese precomposed letters live in the last block).
fn is_latin(c: char) -> bool {
    matches!(c as u32,
        0x0041..=0x005A
        | 0x0061..=0x007A
        | 0x00AA
        | 0x00BA
        | 0x00C0..=0x024F
        | 0x0250..=0x02AF
        | 0x1D00..=0x1D7F
        | 0x1E00..=0x1EFF
        | 0x2C60..=0x2C7F
        | 0xA720..=0xA7FF
        | 0xFF21..=0xFF3A
        | 0xFF41..=0xFF5A)
}
