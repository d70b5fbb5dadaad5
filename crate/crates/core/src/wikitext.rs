//! Template invocations in MediaWiki source text.
//!
//! Only the outermost `{{...}}` invocations are returned. Anything nested in
//! an argument stays in that argument as raw text. HTML comments are dropped
//! and `<nowiki>` content is treated as plain text before any brace or pipe
//! is interpreted.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A parsed `{{name|arg|key=value}}` invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateInvocation {
    pub name: String,
    pub positional: Vec<String>,
    pub named: BTreeMap<String, String>,
    /// Byte range of the invocation in the text it was parsed from.
    pub span: Range<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl TemplateInvocation {
    pub fn kind(&self) -> Option<InflectionKind> {
        InflectionKind::from_template_name(&self.name)
    }

    /// Same invocation with its span moved by `offset` bytes.
    pub fn shifted(mut self, offset: usize) -> Self {
        self.span = self.span.start + offset..self.span.end + offset;
        self
    }
}

/// The inflection templates this crate knows how to turn into paradigms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InflectionKind {
    VepsNominal,
    VepsVerb,
    KarelianStaticNominal,
}

impl InflectionKind {
    pub const ALL: [InflectionKind; 3] = [
        InflectionKind::VepsNominal,
        InflectionKind::VepsVerb,
        InflectionKind::KarelianStaticNominal,
    ];

    pub fn template_name(self) -> &'static str {
        match self {
            InflectionKind::VepsNominal => "vep-decl-stems",
            InflectionKind::VepsVerb => "vep-conj-stems",
            InflectionKind::KarelianStaticNominal => "krl-decl",
        }
    }

    /// Maps a template name (optionally prefixed with `Template:`) to its kind.
    pub fn from_template_name(name: &str) -> Option<Self> {
        let name = name.trim();
        let name = name
            .strip_prefix("Template:")
            .or_else(|| name.strip_prefix("template:"))
            .unwrap_or(name)
            .trim();
        Self::ALL.into_iter().find(|k| k.template_name() == name)
    }

    pub fn is_dynamic(self) -> bool {
        !matches!(self, InflectionKind::KarelianStaticNominal)
    }
}

impl fmt::Display for InflectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.template_name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WikitextError {
    #[error("malformed template invocation: {0}")]
    Malformed(String),
    #[error("template invocation has an empty name")]
    EmptyName,
}

/// Result of scanning a page: invocations in document order plus non-fatal
/// warnings about fragments that could not be parsed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Extraction {
    pub invocations: Vec<TemplateInvocation>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy)]
struct Unit {
    offset: usize,
    ch: char,
    /// False for characters inside `<nowiki>`; those never act as syntax.
    structural: bool,
}

fn starts_with_ci(haystack: &str, needle: &str) -> bool {
    haystack.len() >= needle.len()
        && haystack.as_bytes()[..needle.len()].eq_ignore_ascii_case(needle.as_bytes())
}

fn find_ci(haystack: &str, needle: &str) -> Option<usize> {
    let hay = haystack.as_bytes();
    let pat = needle.as_bytes();
    if pat.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - pat.len()).find(|&i| hay[i..i + pat.len()].eq_ignore_ascii_case(pat))
}

/// Splits text into characters, dropping comments and `<nowiki>` tags.
fn units(text: &str) -> Vec<Unit> {
    let mut out = Vec::with_capacity(text.len());
    let mut i = 0;
    while i < text.len() {
        let rest = &text[i..];
        if rest.starts_with("<!--") {
            // An unterminated comment runs to the end of the text.
            i = match rest[4..].find("-->") {
                Some(end) => i + 4 + end + 3,
                None => text.len(),
            };
            continue;
        }
        if starts_with_ci(rest, "<nowiki/>") || starts_with_ci(rest, "<nowiki />") {
            i += if starts_with_ci(rest, "<nowiki/>") { 9 } else { 10 };
            continue;
        }
        if starts_with_ci(rest, "<nowiki>") {
            if let Some(close) = find_ci(&rest[8..], "</nowiki>") {
                let body_start = i + 8;
                let body = &text[body_start..body_start + close];
                out.extend(body.char_indices().map(|(o, ch)| Unit {
                    offset: body_start + o,
                    ch,
                    structural: false,
                }));
                i = body_start + close + 9;
                continue;
            }
        }
        let ch = rest.chars().next().expect("non-empty remainder");
        out.push(Unit {
            offset: i,
            ch,
            structural: true,
        });
        i += ch.len_utf8();
    }
    out
}

fn is_pair(units: &[Unit], i: usize, ch: char) -> bool {
    i + 1 < units.len()
        && units[i].structural
        && units[i + 1].structural
        && units[i].ch == ch
        && units[i + 1].ch == ch
}

/// Returns every top-level template invocation in `source`, in document order.
///
/// An opening `{{` that is never closed is reported as a warning and scanning
/// resumes right after it, so templates inside the dangling fragment are
/// still found.
pub fn extract_templates(source: &str) -> Extraction {
    let units = units(source);
    let mut extraction = Extraction::default();
    let mut i = 0;
    while i < units.len() {
        if !is_pair(&units, i, '{') {
            i += 1;
            continue;
        }
        let open = i;
        let mut depth = 1usize;
        let mut j = i + 2;
        let mut close = None;
        while j < units.len() {
            if is_pair(&units, j, '{') {
                depth += 1;
                j += 2;
            } else if is_pair(&units, j, '}') {
                depth -= 1;
                j += 2;
                if depth == 0 {
                    close = Some(j);
                    break;
                }
            } else {
                j += 1;
            }
        }
        match close {
            Some(end_unit) => {
                let start = units[open].offset;
                let end = units[end_unit - 1].offset + 1;
                match parse_invocation(&source[start..end]) {
                    Ok(inv) => extraction.invocations.push(inv.shifted(start)),
                    Err(e) => extraction
                        .warnings
                        .push(format!("skipped template at byte {start}: {e}")),
                }
                i = end_unit;
            }
            None => {
                extraction.warnings.push(format!(
                    "unclosed '{{{{' at byte {}; fragment skipped",
                    units[open].offset
                ));
                i = open + 2;
            }
        }
    }
    extraction
}

/// Parses one invocation. `raw` must be exactly `{{...}}` with balanced
/// braces; the returned span is `0..raw.len()`.
pub fn parse_invocation(raw: &str) -> Result<TemplateInvocation, WikitextError> {
    if raw.len() < 4 || !raw.starts_with("{{") || !raw.ends_with("}}") {
        return Err(WikitextError::Malformed(
            "text is not delimited by '{{' and '}}'".into(),
        ));
    }
    let units = units(raw);
    let n = units.len();
    if n < 4 || !is_pair(&units, 0, '{') || !is_pair(&units, n - 2, '}') {
        return Err(WikitextError::Malformed(
            "outer braces are hidden inside a comment or nowiki section".into(),
        ));
    }

    let body = &units[2..n - 2];
    let mut args: Vec<(String, Option<usize>)> = vec![(String::new(), None)];
    let mut braces = 0usize;
    let mut links = 0usize;
    let mut k = 0;
    while k < body.len() {
        let u = body[k];
        let current = args.last_mut().expect("at least one argument");
        if is_pair(body, k, '{') {
            braces += 1;
            current.0.push_str("{{");
            k += 2;
            continue;
        }
        if is_pair(body, k, '}') {
            if braces == 0 {
                return Err(WikitextError::Malformed(
                    "'}}' closes the invocation before its end".into(),
                ));
            }
            braces -= 1;
            current.0.push_str("}}");
            k += 2;
            continue;
        }
        if is_pair(body, k, '[') {
            links += 1;
            current.0.push_str("[[");
            k += 2;
            continue;
        }
        if is_pair(body, k, ']') && links > 0 {
            links -= 1;
            current.0.push_str("]]");
            k += 2;
            continue;
        }
        let top_level = u.structural && braces == 0 && links == 0;
        if top_level && u.ch == '|' {
            args.push((String::new(), None));
        } else {
            if top_level && u.ch == '=' && current.1.is_none() {
                current.1 = Some(current.0.len());
            }
            current.0.push(u.ch);
        }
        k += 1;
    }
    if braces != 0 {
        return Err(WikitextError::Malformed("unbalanced nested braces".into()));
    }

    let mut args = args.into_iter();
    let (name, _) = args.next().expect("name slot");
    let name = name.trim().to_string();
    if name.is_empty() {
        return Err(WikitextError::EmptyName);
    }

    let mut positional = Vec::new();
    let mut named = BTreeMap::new();
    let mut warnings = Vec::new();
    for (text, eq) in args {
        match eq {
            Some(at) if !text[..at].trim().is_empty() => {
                let key = text[..at].trim().to_string();
                let value = text[at + 1..].trim().to_string();
                if named.insert(key.clone(), value).is_some() {
                    warnings.push(format!("duplicate named argument '{key}'; later value kept"));
                }
            }
            _ => positional.push(text.trim().to_string()),
        }
    }

    Ok(TemplateInvocation {
        name,
        positional,
        named,
        span: 0..raw.len(),
        warnings,
    })
}

/// Keeps the invocations of templates that map to an [`InflectionKind`].
pub fn find_inflection_invocations(
    invocations: &[TemplateInvocation],
) -> Vec<(TemplateInvocation, InflectionKind)> {
    invocations
        .iter()
        .filter_map(|inv| inv.kind().map(|kind| (inv.clone(), kind)))
        .collect()
}
