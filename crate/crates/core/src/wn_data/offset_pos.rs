use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::DataError;

/// Part of speech as used by PWN 3.0 data files. Adjective satellites (`s`)
/// stay distinct from head adjectives (`a`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pos {
    Noun,
    Verb,
    Adjective,
    AdjectiveSatellite,
    Adverb,
}

impl Pos {
    pub const ALL: [Pos; 5] = [
        Pos::Noun,
        Pos::Verb,
        Pos::Adjective,
        Pos::AdjectiveSatellite,
        Pos::Adverb,
    ];

    pub fn symbol(self) -> char {
        match self {
            Pos::Noun => 'n',
            Pos::Verb => 'v',
            Pos::Adjective => 'a',
            Pos::AdjectiveSatellite => 's',
            Pos::Adverb => 'r',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pos> {
        match c {
            'n' => Some(Pos::Noun),
            'v' => Some(Pos::Verb),
            'a' => Some(Pos::Adjective),
            's' => Some(Pos::AdjectiveSatellite),
            'r' => Some(Pos::Adverb),
            _ => None,
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Pos {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Pos::from_symbol(c),
            _ => None,
        }
        .ok_or_else(|| DataError::InvalidPos(s.to_string()))
    }
}

/// PWN 3.0 synset key: an 8-digit byte offset plus a part of speech,
/// rendered as `00006802-v`.
///
/// Ordering is by offset first, then part of speech.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OffsetPos {
    offset: u32,
    pos: Pos,
}

impl OffsetPos {
    pub const MAX_OFFSET: u32 = 99_999_999;

    pub fn new(offset: u32, pos: Pos) -> Result<Self, DataError> {
        if offset > Self::MAX_OFFSET {
            return Err(DataError::InvalidOffsetPos(format!("{offset}-{pos}")));
        }
        Ok(OffsetPos { offset, pos })
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn pos(&self) -> Pos {
        self.pos
    }

    /// Parses a bare 8-digit offset field.
    pub fn parse_offset(s: &str) -> Option<u32> {
        if s.len() == 8 && s.bytes().all(|b| b.is_ascii_digit()) {
            s.parse().ok()
        } else {
            None
        }
    }
}

impl fmt::Display for OffsetPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:08}-{}", self.offset, self.pos)
    }
}

impl FromStr for OffsetPos {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let invalid = || DataError::InvalidOffsetPos(s.to_string());
        let (offset, pos) = s.split_once('-').ok_or_else(invalid)?;
        let offset = OffsetPos::parse_offset(offset).ok_or_else(invalid)?;
        let pos = pos.parse::<Pos>().map_err(|_| invalid())?;
        Ok(OffsetPos { offset, pos })
    }
}

impl Serialize for OffsetPos {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for OffsetPos {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
