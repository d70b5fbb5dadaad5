//! Batch front end: read page sources from files or the wiki, generate the
//! paradigms of every inflection template on them and merge the result into
//! a dictionary store.

pub mod config;
pub mod fetch;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use wikiparadigm_core::dictionary::{governing_kind, UpsertOptions};
use wikiparadigm_core::wikitext::{extract_templates, find_inflection_invocations};
use wikiparadigm_core::{EntryKey, InflectionKind, Language, Paradigm, Pos, RuleSet, Store};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Remote,
    File,
}

/// Wikitext of one page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PageSource {
    pub title: String,
    pub text: String,
    pub origin: Origin,
}

/// Reads page sources from files and directories (one level deep). Titles
/// come from file names without extension; pages are returned sorted by
/// path. Unreadable paths become warnings.
pub fn ingest_paths<P: AsRef<Path>>(paths: &[P]) -> (Vec<PageSource>, Vec<String>) {
    let mut files: Vec<PathBuf> = Vec::new();
    let mut warnings = Vec::new();
    for path in paths {
        let path = path.as_ref();
        if path.is_dir() {
            match std::fs::read_dir(path) {
                Ok(entries) => files.extend(
                    entries
                        .filter_map(Result::ok)
                        .map(|e| e.path())
                        .filter(|p| p.is_file()),
                ),
                Err(e) => warnings.push(format!("{}: {e}", path.display())),
            }
        } else {
            files.push(path.to_path_buf());
        }
    }
    files.sort();
    files.dedup();

    let mut pages = Vec::new();
    for file in files {
        let title = file
            .file_stem()
            .map(|s| s.to_string_lossy().trim().to_string())
            .unwrap_or_default();
        if title.is_empty() || title.starts_with('.') {
            warnings.push(format!("{}: no page title in file name", file.display()));
            continue;
        }
        match std::fs::read_to_string(&file) {
            Ok(text) => pages.push(PageSource {
                title,
                text,
                origin: Origin::File,
            }),
            Err(e) => warnings.push(format!("{}: {e}", file.display())),
        }
    }
    (pages, warnings)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BatchOptions {
    /// Store generated forms as accepted instead of pending review.
    pub auto_accept: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub pages_processed: usize,
    pub lemmas_created: usize,
    pub forms_created: usize,
    pub gramsets_attached: usize,
    pub forms_unchanged: usize,
    pub conflicts_open: usize,
    pub warnings: Vec<String>,
}

impl BatchReport {
    /// True when the run changed nothing in the store.
    pub fn is_zero_delta(&self) -> bool {
        self.lemmas_created == 0 && self.forms_created == 0 && self.gramsets_attached == 0
    }
}

struct Generated {
    key: EntryKey,
    paradigm: Paradigm,
    template_text: String,
}

fn language_of(kind: InflectionKind) -> Language {
    match kind {
        InflectionKind::VepsNominal | InflectionKind::VepsVerb => Language::Vep,
        InflectionKind::KarelianStaticNominal => Language::Krl,
    }
}

/// Part of speech named by the last heading before `offset`, if any.
fn heading_pos(text: &str, offset: usize) -> Option<Pos> {
    text[..offset]
        .lines()
        .rev()
        .map(str::trim)
        .filter(|l| l.starts_with('=') && l.ends_with('='))
        .find_map(|l| match l.trim_matches('=').trim().to_lowercase().as_str() {
            "noun" | "proper noun" => Some(Pos::Noun),
            "adjective" => Some(Pos::Adjective),
            "verb" => Some(Pos::Verb),
            _ => None,
        })
}

fn default_pos(kind: InflectionKind) -> Pos {
    match kind {
        InflectionKind::VepsVerb => Pos::Verb,
        _ => Pos::Noun,
    }
}

fn prepare(page: &PageSource, rules: &RuleSet) -> (Vec<Generated>, Vec<String>) {
    let mut warnings: Vec<String> = Vec::new();
    let extraction = extract_templates(&page.text);
    warnings.extend(extraction.warnings.iter().map(|w| format!("{}: {w}", page.title)));
    let found = find_inflection_invocations(&extraction.invocations);
    if found.is_empty() {
        warnings.push(format!("{}: no inflection template found", page.title));
    }

    let mut out = Vec::new();
    for (inv, kind) in found {
        let template_text = page.text[inv.span.clone()].to_string();
        let paradigm = match rules.paradigm_for(&inv, kind) {
            Ok(p) => p,
            Err(e) => {
                warnings.push(format!("{}: {template_text}: {e}", page.title));
                continue;
            }
        };
        let language = language_of(kind);
        let pos = heading_pos(&page.text, inv.span.start)
            .filter(|&p| governing_kind(language, p) == Some(kind))
            .unwrap_or_else(|| default_pos(kind));
        if paradigm.lemma != page.title {
            warnings.push(format!(
                "{}: {} generates lemma '{}'",
                page.title,
                kind.template_name(),
                paradigm.lemma
            ));
        }
        out.push(Generated {
            key: EntryKey::new(paradigm.lemma.clone(), language, pos),
            paradigm,
            template_text,
        });
    }

    let mut per_key: BTreeMap<(Language, Pos), usize> = BTreeMap::new();
    for g in &out {
        *per_key.entry((g.key.language, g.key.pos)).or_default() += 1;
    }
    for ((language, pos), n) in per_key.into_iter().filter(|(_, n)| *n > 1) {
        warnings.push(format!(
            "{}: {n} inflection templates for {language} {pos}; each was processed",
            page.title
        ));
    }
    (out, warnings)
}

/// Extracts and generates every page in parallel, then merges the results
/// into `store` one page at a time in input order. A failing page only adds
/// warnings.
pub fn run_batch(
    pages: &[PageSource],
    store: &mut Store,
    rules: &RuleSet,
    options: BatchOptions,
) -> BatchReport {
    store.set_slot_orders(rules.slot_orders());
    let prepared: Vec<_> = pages.par_iter().map(|p| (p, prepare(p, rules))).collect();

    let mut report = BatchReport::default();
    for (page, (generated, warnings)) in prepared {
        report.pages_processed += 1;
        report.warnings.extend(warnings);
        for g in generated {
            let upsert = UpsertOptions {
                create: true,
                accept: options.auto_accept,
                template_args: Some(g.template_text),
            };
            match store.upsert_generated(&g.key, &g.paradigm, &upsert) {
                Ok(m) => {
                    report.lemmas_created += usize::from(m.lemma_created);
                    report.forms_created += m.created;
                    report.gramsets_attached += m.gramsets_attached;
                    report.forms_unchanged += m.unchanged;
                    report.conflicts_open += m.open_conflicts();
                }
                Err(e) => report.warnings.push(format!("{}: {e}", page.title)),
            }
        }
    }
    report
}
