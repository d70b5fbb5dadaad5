//! Line-oriented rule files.
//!
//! ```text
//! # comment
//! language: vep
//! pos: noun
//! template: vep-decl-stems
//! params: base, nom, gen, part, part_pl
//! features: case, number
//! lemma: nominative.sg
//! stem sg = base + gen strip n label "vowel stem"
//! genitive.sg = sg + "n"
//! comitative.sg = form(genitive.sg) + "ke"
//! illative.sg = UNKNOWN
//! terminative_3.pl = NONEXISTENT
//! ```
//!
//! The full grammar is described in `rules/README.md`.

use thiserror::Error;

use super::table::{validate_rule_table, RuleTable, SlotRecipe, SlotRule, StemRule, Violation};
use super::Gramset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing header '{0}:'")]
    MissingHeader(&'static str),
    #[error("rule table is invalid: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    Str(String),
    Plus,
    Dot,
    Eq,
    Open,
    Close,
}

fn tokenize(text: &str) -> Result<Vec<Token>, String> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some('"') => break,
                        Some(ch) => s.push(ch),
                        None => return Err("unterminated string literal".into()),
                    }
                }
                tokens.push(Token::Str(s));
            }
            '+' | '.' | '=' | '(' | ')' => {
                chars.next();
                tokens.push(match c {
                    '+' => Token::Plus,
                    '.' => Token::Dot,
                    '=' => Token::Eq,
                    '(' => Token::Open,
                    _ => Token::Close,
                });
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&ch) = chars.peek() {
                    if !is_ident_char(ch) {
                        break;
                    }
                    s.push(ch);
                    chars.next();
                }
                tokens.push(Token::Ident(s));
            }
            other => return Err(format!("unexpected character '{other}'")),
        }
    }
    Ok(tokens)
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-'
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn ident(&mut self, what: &str) -> Result<String, String> {
        match self.next() {
            Some(Token::Ident(s)) => Ok(s),
            _ => Err(format!("expected {what}")),
        }
    }

    fn expect(&mut self, token: Token, what: &str) -> Result<(), String> {
        if self.next() == Some(token) {
            Ok(())
        } else {
            Err(format!("expected {what}"))
        }
    }

    fn key(&mut self) -> Result<Vec<String>, String> {
        let mut values = vec![self.ident("slot key")?];
        while self.peek() == Some(&Token::Dot) {
            self.next();
            values.push(self.ident("feature value after '.'")?);
        }
        Ok(values)
    }

    fn optional_suffix(&mut self) -> Result<String, String> {
        if self.peek() == Some(&Token::Plus) {
            self.next();
            match self.next() {
                Some(Token::Str(s)) => Ok(s),
                _ => Err("expected quoted suffix after '+'".into()),
            }
        } else {
            Ok(String::new())
        }
    }
}

struct RawSlot {
    line: usize,
    key: Vec<String>,
    recipe: RawRecipe,
}

enum RawRecipe {
    Stem(String, String),
    Form(Vec<String>, String),
    Unknown,
    Nonexistent,
}

fn parse_stem(rest: &str) -> Result<StemRule, String> {
    let mut c = Cursor {
        tokens: tokenize(rest)?,
        pos: 0,
    };
    let role = c.ident("stem role")?;
    c.expect(Token::Eq, "'=' after stem role")?;
    let mut parts = vec![c.ident("parameter role")?];
    while c.peek() == Some(&Token::Plus) {
        c.next();
        parts.push(c.ident("parameter role after '+'")?);
    }
    let mut strip = None;
    let mut label = None;
    while !c.at_end() {
        match c.next() {
            Some(Token::Ident(word)) if word == "strip" && strip.is_none() => {
                let text = match c.next() {
                    Some(Token::Ident(s)) | Some(Token::Str(s)) => s,
                    _ => return Err("expected a character after 'strip'".into()),
                };
                let mut chars = text.chars();
                match (chars.next(), chars.next()) {
                    (Some(ch), None) => strip = Some(ch),
                    _ => return Err("'strip' takes exactly one character".into()),
                }
            }
            Some(Token::Ident(word)) if word == "label" && label.is_none() => match c.next() {
                Some(Token::Str(s)) => label = Some(s),
                _ => return Err("expected quoted text after 'label'".into()),
            },
            _ => return Err("unexpected trailing tokens in stem rule".into()),
        }
    }
    Ok(StemRule {
        role,
        parts,
        strip,
        label,
    })
}

fn parse_slot(line: usize, text: &str) -> Result<RawSlot, String> {
    let mut c = Cursor {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let key = c.key()?;
    c.expect(Token::Eq, "'=' after slot key")?;
    let head = c.ident("recipe")?;
    let recipe = match head.as_str() {
        "UNKNOWN" => RawRecipe::Unknown,
        "NONEXISTENT" => RawRecipe::Nonexistent,
        "form" if c.peek() == Some(&Token::Open) => {
            c.next();
            let target = c.key()?;
            c.expect(Token::Close, "')' after referenced slot")?;
            RawRecipe::Form(target, c.optional_suffix()?)
        }
        _ => RawRecipe::Stem(head, c.optional_suffix()?),
    };
    if !c.at_end() {
        return Err("unexpected trailing tokens in slot rule".into());
    }
    Ok(RawSlot { line, key, recipe })
}

fn split_list(value: &str) -> Vec<String> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

fn gramset_for(features: &[String], values: &[String]) -> Option<Gramset> {
    if values.is_empty() || values.len() > features.len() {
        return None;
    }
    Some(Gramset::new(
        features.iter().cloned().zip(values.iter().cloned()),
    ))
}

/// Parses and validates a rule file.
pub fn load_rule_table(document: &str) -> Result<RuleTable, RuleFileError> {
    let syntax = |line: usize, message: String| RuleFileError::Syntax { line, message };

    let mut language = None;
    let mut pos = None;
    let mut template = None;
    let mut params = None;
    let mut features = None;
    let mut lemma: Option<(usize, Vec<String>)> = None;
    let mut stems = Vec::new();
    let mut raw_slots = Vec::new();

    for (idx, raw_line) in document.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("stem ") {
            stems.push(parse_stem(rest).map_err(|m| syntax(line_no, m))?);
            continue;
        }
        let header = line
            .split_once(':')
            .filter(|(k, _)| !k.is_empty() && k.chars().all(|c| c.is_ascii_alphabetic()));
        if let Some((key, value)) = header {
            let value = value.trim();
            match key {
                "language" => {
                    language = Some(value.parse().map_err(|m| syntax(line_no, m))?)
                }
                "pos" => pos = Some(value.parse().map_err(|m| syntax(line_no, m))?),
                "template" => template = Some(value.to_string()),
                "params" => params = Some(split_list(value)),
                "features" => features = Some(split_list(value)),
                "lemma" => {
                    let mut c = Cursor {
                        tokens: tokenize(value).map_err(|m| syntax(line_no, m))?,
                        pos: 0,
                    };
                    let key = c.key().map_err(|m| syntax(line_no, m))?;
                    if !c.at_end() {
                        return Err(syntax(line_no, "unexpected text after lemma slot".into()));
                    }
                    lemma = Some((line_no, key));
                }
                other => return Err(syntax(line_no, format!("unknown header '{other}'"))),
            }
            continue;
        }
        raw_slots.push(parse_slot(line_no, line).map_err(|m| syntax(line_no, m))?);
    }

    let language = language.ok_or(RuleFileError::MissingHeader("language"))?;
    let pos = pos.ok_or(RuleFileError::MissingHeader("pos"))?;
    let template_name = template.ok_or(RuleFileError::MissingHeader("template"))?;
    let param_roles = params.ok_or(RuleFileError::MissingHeader("params"))?;
    let features = features.unwrap_or_else(|| vec!["case".into(), "number".into()]);

    let to_gramset = |line: usize, values: &[String]| {
        gramset_for(&features, values).ok_or_else(|| {
            syntax(
                line,
                format!(
                    "slot key '{}' needs 1..={} values for features ({})",
                    values.join("."),
                    features.len(),
                    features.join(", ")
                ),
            )
        })
    };

    let lemma_slot = match &lemma {
        Some((line, key)) => Some(to_gramset(*line, key)?),
        None => None,
    };

    let mut slots = Vec::with_capacity(raw_slots.len());
    for raw in &raw_slots {
        let gramset = to_gramset(raw.line, &raw.key)?;
        let recipe = match &raw.recipe {
            RawRecipe::Stem(stem, suffix) => SlotRecipe::StemPlusSuffix {
                stem: stem.clone(),
                suffix: suffix.clone(),
            },
            RawRecipe::Form(target, suffix) => SlotRecipe::FormPlusSuffix {
                form: to_gramset(raw.line, target)?,
                suffix: suffix.clone(),
            },
            RawRecipe::Unknown => SlotRecipe::Unknown,
            RawRecipe::Nonexistent => SlotRecipe::Nonexistent,
        };
        slots.push(SlotRule { gramset, recipe });
    }

    let table = RuleTable {
        language,
        pos,
        template_name,
        param_roles,
        features,
        lemma_slot,
        stem_rules: stems,
        slots,
    };
    validate_rule_table(&table).map_err(RuleFileError::Invalid)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::table::Violation;

    const HEADER: &str = "language: vep\npos: noun\ntemplate: vep-decl-stems\nparams: base, a\n";

    #[test]
    fn self_reference_is_a_cycle() {
        let doc = format!("{HEADER}genitive.sg = form(genitive.sg) + \"x\"\n");
        match load_rule_table(&doc) {
            Err(RuleFileError::Invalid(v)) => {
                assert!(v.iter().any(|x| matches!(x, Violation::Cycle { .. })))
            }
            other => panic!("expected cycle, got {other:?}"),
        }
    }

    #[test]
    fn syntax_error_reports_line() {
        let doc = format!("{HEADER}\n# fine\ngenitive.sg = base + n\n");
        assert_eq!(
            load_rule_table(&doc),
            Err(RuleFileError::Syntax {
                line: 7,
                message: "expected quoted suffix after '+'".into()
            })
        );
    }

    #[test]
    fn missing_header() {
        assert_eq!(
            load_rule_table("language: vep\n"),
            Err(RuleFileError::MissingHeader("pos"))
        );
    }

    #[test]
    fn parses_every_recipe_shape() {
        let doc = format!(
            "{HEADER}stem s = base + a strip n label \"vowel stem\"\n\
             nominative.sg = a\n\
             genitive.sg = s + \"n\"\n\
             comitative.sg = form(genitive.sg) + \"ke\"\n\
             accusative.sg = form(genitive.sg)\n\
             illative.sg = UNKNOWN\n\
             terminative_3.pl = NONEXISTENT\n"
        );
        let t = load_rule_table(&doc).unwrap();
        assert_eq!(t.stem_rules[0].strip, Some('n'));
        assert_eq!(t.stem_rules[0].label.as_deref(), Some("vowel stem"));
        assert_eq!(t.slots.len(), 6);
        assert_eq!(
            t.slots[2].recipe,
            SlotRecipe::FormPlusSuffix {
                form: Gramset::case_number("genitive", "sg"),
                suffix: "ke".into()
            }
        );
        assert_eq!(t.slots[5].recipe, SlotRecipe::Nonexistent);
    }

    #[test]
    fn key_with_too_many_values() {
        let doc = format!("{HEADER}a.b.c = base\n");
        assert!(matches!(
            load_rule_table(&doc),
            Err(RuleFileError::Syntax { line: 5, .. })
        ));
    }
}
