use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Ordered feature/value pairs naming one paradigm slot, e.g.
/// `case=genitive;number=sg`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gramset(Vec<(String, String)>);

impl Gramset {
    pub fn new<I, F, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (F, V)>,
        F: Into<String>,
        V: Into<String>,
    {
        Gramset(
            pairs
                .into_iter()
                .map(|(f, v)| (f.into(), v.into()))
                .collect(),
        )
    }

    /// Shorthand for the two-feature nominal gramsets.
    pub fn case_number(case: &str, number: &str) -> Self {
        Gramset::new([("case", case), ("number", number)])
    }

    pub fn get(&self, feature: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(f, _)| f == feature)
            .map(|(_, v)| v.as_str())
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.0
    }

    pub fn values(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(|(_, v)| v.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Dotted slot key as written in rule files (`genitive.sg`).
    pub fn key(&self) -> String {
        self.values().collect::<Vec<_>>().join(".")
    }

    /// Readable label such as `approximative I singular`.
    pub fn label(&self) -> String {
        self.values().map(value_label).collect::<Vec<_>>().join(" ")
    }
}

/// Readable form of a feature value: underscores become spaces, a trailing
/// 1-3 becomes a roman numeral and common abbreviations are expanded.
pub fn value_label(value: &str) -> String {
    match value {
        "sg" => return "singular".into(),
        "pl" => return "plural".into(),
        "1sg" => return "1st person singular".into(),
        "2sg" => return "2nd person singular".into(),
        "3sg" => return "3rd person singular".into(),
        "1pl" => return "1st person plural".into(),
        "2pl" => return "2nd person plural".into(),
        "3pl" => return "3rd person plural".into(),
        _ => {}
    }
    let words: Vec<String> = value
        .split('_')
        .filter(|w| !w.is_empty())
        .map(|w| match w {
            "1" => "I".to_string(),
            "2" => "II".to_string(),
            "3" => "III".to_string(),
            other => other.to_string(),
        })
        .collect();
    words.join(" ")
}

impl fmt::Display for Gramset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (feature, value)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{feature}={value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid gramset '{input}': {reason}")]
pub struct GramsetParseError {
    pub input: String,
    pub reason: String,
}

impl FromStr for Gramset {
    type Err = GramsetParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GramsetParseError {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let s = s.trim();
        if s.is_empty() {
            return Ok(Gramset::default());
        }
        let mut pairs: Vec<(String, String)> = Vec::new();
        for part in s.split(';') {
            let (f, v) = part.split_once('=').ok_or_else(|| err("expected feature=value"))?;
            let (f, v) = (f.trim(), v.trim());
            if f.is_empty() || v.is_empty() {
                return Err(err("empty feature or value"));
            }
            if pairs.iter().any(|(seen, _)| seen == f) {
                return Err(err("repeated feature"));
            }
            pairs.push((f.to_string(), v.to_string()));
        }
        Ok(Gramset(pairs))
    }
}

impl Serialize for Gramset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Gramset {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        let g = Gramset::case_number("genitive", "sg");
        assert_eq!(g.to_string(), "case=genitive;number=sg");
        assert_eq!("case=genitive;number=sg".parse::<Gramset>().unwrap(), g);
        assert!("case".parse::<Gramset>().is_err());
        assert!("case=a;case=b".parse::<Gramset>().is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(
            Gramset::case_number("approximative_1", "sg").label(),
            "approximative I singular"
        );
        assert_eq!(
            Gramset::case_number("essive_instructive", "pl").label(),
            "essive instructive plural"
        );
        assert_eq!(value_label("terminative_3"), "terminative III");
    }
}
