use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    Vep,
    Krl,
}

impl Language {
    pub fn code(self) -> &'static str {
        match self {
            Language::Vep => "vep",
            Language::Krl => "krl",
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "vep" => Ok(Language::Vep),
            "krl" => Ok(Language::Krl),
            other => Err(format!("unknown language code '{other}'")),
        }
    }
}

/// Part of speech of a dictionary entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Adjective,
    Verb,
}

impl Pos {
    pub fn code(self) -> &'static str {
        match self {
            Pos::Noun => "noun",
            Pos::Adjective => "adjective",
            Pos::Verb => "verb",
        }
    }

    /// Nouns and adjectives share one declension table.
    pub fn is_nominal(self) -> bool {
        matches!(self, Pos::Noun | Pos::Adjective)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "noun" => Ok(Pos::Noun),
            "adjective" => Ok(Pos::Adjective),
            "verb" => Ok(Pos::Verb),
            other => Err(format!("unknown part of speech '{other}'")),
        }
    }
}
