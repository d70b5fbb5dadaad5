//! Lemma/word-form store and the merge of generated paradigms into it.
//!
//! Merging is conservative. A generated form is attached to an untagged
//! form with the same surface, or inserted as new. When a form already
//! holds the slot with a different surface, a [`Conflict`] is recorded and
//! left for a human to resolve.

mod io;
mod persist;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::lang::{Language, Pos};
use crate::morphology::{Gramset, Paradigm};
use crate::wikitext::InflectionKind;

pub use io::{export_dictionary, import_dictionary, Format, TSV_HEADER};
pub use persist::{OpenError, StoreDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Generated,
    Preexisting,
    Manual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Accepted,
    Pending,
}

impl Status {
    pub fn code(self) -> &'static str {
        match self {
            Status::Accepted => "accepted",
            Status::Pending => "pending",
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordForm {
    pub surface: String,
    /// `None` for legacy forms recorded without grammatical information.
    pub gramset: Option<Gramset>,
    pub source: Source,
    pub status: Status,
    /// Set on both forms when a conflict was resolved by keeping both.
    #[serde(default, skip_serializing_if = "is_false")]
    pub variant: bool,
}

impl WordForm {
    pub fn new(surface: impl Into<String>, gramset: Option<Gramset>, source: Source) -> Self {
        WordForm {
            surface: surface.into(),
            gramset,
            source,
            status: Status::Accepted,
            variant: false,
        }
    }

    fn same(&self, surface: &str, gramset: Option<&Gramset>) -> bool {
        self.surface == surface && self.gramset.as_ref() == gramset
    }
}

/// Store key of a lemma entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntryKey {
    pub lemma: String,
    pub language: Language,
    pub pos: Pos,
}

impl EntryKey {
    pub fn new(lemma: impl Into<String>, language: Language, pos: Pos) -> Self {
        EntryKey {
            lemma: lemma.into(),
            language,
            pos,
        }
    }
}

impl fmt::Display for EntryKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {})", self.lemma, self.language, self.pos)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaEntry {
    pub id: u64,
    pub lemma: String,
    pub language: Language,
    pub pos: Pos,
    pub forms: Vec<WordForm>,
    /// The template text the forms were generated from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template_args: Option<String>,
}

impl LemmaEntry {
    pub fn key(&self) -> EntryKey {
        EntryKey::new(self.lemma.clone(), self.language, self.pos)
    }

    /// The inflection template whose slot order governs this entry.
    pub fn governing_kind(&self) -> Option<InflectionKind> {
        governing_kind(self.language, self.pos)
    }
}

pub fn governing_kind(language: Language, pos: Pos) -> Option<InflectionKind> {
    match (language, pos.is_nominal()) {
        (Language::Vep, true) => Some(InflectionKind::VepsNominal),
        (Language::Vep, false) => Some(InflectionKind::VepsVerb),
        (Language::Krl, true) => Some(InflectionKind::KarelianStaticNominal),
        (Language::Krl, false) => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    KeepExisting,
    TakeIncoming,
    KeepBoth,
    Unresolved,
}

impl std::str::FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "keep_existing" => Ok(Resolution::KeepExisting),
            "take_incoming" => Ok(Resolution::TakeIncoming),
            "keep_both" => Ok(Resolution::KeepBoth),
            "unresolved" => Ok(Resolution::Unresolved),
            other => Err(format!("unknown resolution '{other}'")),
        }
    }
}

/// A generated form that disagrees with the form already stored in its slot.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conflict {
    pub id: u64,
    pub entry_id: u64,
    pub gramset: Gramset,
    pub existing_surface: String,
    pub incoming_surface: String,
    pub resolution: Resolution,
}

impl Conflict {
    pub fn is_open(&self) -> bool {
        self.resolution == Resolution::Unresolved
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeReport {
    pub created: usize,
    pub gramsets_attached: usize,
    pub unchanged: usize,
    pub conflicts: Vec<Conflict>,
    #[serde(default)]
    pub lemma_created: bool,
}

impl MergeReport {
    pub fn open_conflicts(&self) -> usize {
        self.conflicts.iter().filter(|c| c.is_open()).count()
    }
}

#[derive(Debug, Clone, Default)]
pub struct UpsertOptions {
    /// Create the entry when its key is not in the store.
    pub create: bool,
    /// Mark every form of the paradigm as accepted.
    pub accept: bool,
    pub template_args: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum DuplicateGroup {
    /// Several entries share one store key (legacy imports).
    Entries { key: EntryKey, entry_ids: Vec<u64> },
    /// An untagged form whose surface also appears with a gramset.
    Forms {
        entry_id: u64,
        surface: String,
        tagged: Vec<Gramset>,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DedupeReport {
    pub entries_merged: usize,
    pub forms_removed: usize,
}

#[derive(Debug, Error)]
pub enum DictionaryError {
    #[error("no entry for {0}")]
    MissingLemma(EntryKey),
    #[error("{kind} paradigm cannot be stored under {key}")]
    KindMismatch { kind: InflectionKind, key: EntryKey },
    #[error("no conflict with id {0}")]
    UnknownConflict(u64),
    #[error("conflict {0} is already resolved")]
    AlreadyResolved(u64),
    #[error("'unresolved' is not a resolution")]
    InvalidResolution,
    #[error("no entry with id {0}")]
    UnknownEntry(u64),
    #[error("row {row}: {message}")]
    Import { row: usize, message: String },
}

/// In-memory dictionary.
#[derive(Debug, Clone, Default)]
pub struct Store {
    entries: Vec<LemmaEntry>,
    conflicts: Vec<Conflict>,
    next_entry_id: u64,
    next_conflict_id: u64,
    slot_orders: BTreeMap<InflectionKind, Vec<Gramset>>,
}

impl PartialEq for Store {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.conflicts == other.conflicts
    }
}

impl Store {
    pub fn new() -> Self {
        Store {
            next_entry_id: 1,
            next_conflict_id: 1,
            ..Default::default()
        }
    }

    pub(crate) fn from_parts(entries: Vec<LemmaEntry>, conflicts: Vec<Conflict>) -> Self {
        let next_entry_id = entries.iter().map(|e| e.id).max().unwrap_or(0) + 1;
        let next_conflict_id = conflicts.iter().map(|c| c.id).max().unwrap_or(0) + 1;
        Store {
            entries,
            conflicts,
            next_entry_id,
            next_conflict_id,
            slot_orders: BTreeMap::new(),
        }
    }

    /// Slot order per template, used to order forms on export.
    pub fn set_slot_orders(&mut self, orders: BTreeMap<InflectionKind, Vec<Gramset>>) {
        self.slot_orders = orders;
    }

    pub fn slot_orders(&self) -> &BTreeMap<InflectionKind, Vec<Gramset>> {
        &self.slot_orders
    }

    pub fn entries(&self) -> &[LemmaEntry] {
        &self.entries
    }

    pub fn conflicts(&self) -> &[Conflict] {
        &self.conflicts
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, id: u64) -> Option<&LemmaEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn find(&self, key: &EntryKey) -> Option<&LemmaEntry> {
        self.entries
            .iter()
            .filter(|e| e.lemma == key.lemma && e.language == key.language && e.pos == key.pos)
            .min_by_key(|e| e.id)
    }

    pub fn conflict(&self, id: u64) -> Option<&Conflict> {
        self.conflicts.iter().find(|c| c.id == id)
    }

    /// Adds an entry with a fresh id, even if its key already exists.
    /// Legacy imports go through here; duplicates surface in
    /// [`Store::find_duplicates`].
    pub fn push_entry(
        &mut self,
        key: EntryKey,
        forms: Vec<WordForm>,
        template_args: Option<String>,
    ) -> u64 {
        let id = self.next_entry_id.max(1);
        self.next_entry_id = id + 1;
        self.entries.push(LemmaEntry {
            id,
            lemma: key.lemma,
            language: key.language,
            pos: key.pos,
            forms,
            template_args,
        });
        id
    }

    /// Appends every entry of `other` under fresh ids.
    pub fn absorb(&mut self, other: Store) {
        let mut remap = HashMap::new();
        for entry in other.entries {
            let old = entry.id;
            let id = self.push_entry(entry.key(), entry.forms, entry.template_args);
            remap.insert(old, id);
        }
        for mut conflict in other.conflicts {
            if let Some(&id) = remap.get(&conflict.entry_id) {
                conflict.entry_id = id;
                conflict.id = self.next_conflict_id.max(1);
                self.next_conflict_id = conflict.id + 1;
                self.conflicts.push(conflict);
            }
        }
    }

    /// Merges the defined forms of `paradigm` into the entry at `key`.
    pub fn upsert_generated(
        &mut self,
        key: &EntryKey,
        paradigm: &Paradigm,
        options: &UpsertOptions,
    ) -> Result<MergeReport, DictionaryError> {
        if governing_kind(key.language, key.pos) != Some(paradigm.kind) {
            return Err(DictionaryError::KindMismatch {
                kind: paradigm.kind,
                key: key.clone(),
            });
        }
        let mut report = MergeReport::default();
        let idx = match self.find(key).map(|e| e.id) {
            Some(id) => self.entries.iter().position(|e| e.id == id).expect("found"),
            None if options.create => {
                self.push_entry(key.clone(), Vec::new(), None);
                report.lemma_created = true;
                self.entries.len() - 1
            }
            None => return Err(DictionaryError::MissingLemma(key.clone())),
        };
        let entry_id = self.entries[idx].id;

        if options.template_args.is_some() {
            self.entries[idx].template_args = options.template_args.clone();
        }

        for (gramset, surface) in paradigm.defined_forms() {
            let forms = &mut self.entries[idx].forms;
            if let Some(form) = forms.iter_mut().find(|f| f.same(surface, Some(gramset))) {
                if options.accept {
                    form.status = Status::Accepted;
                }
                report.unchanged += 1;
                continue;
            }
            if let Some(existing) = forms.iter().find(|f| f.gramset.as_ref() == Some(gramset)) {
                let existing_surface = existing.surface.clone();
                let recorded = self.conflicts.iter().find(|c| {
                    c.entry_id == entry_id
                        && &c.gramset == gramset
                        && c.existing_surface == existing_surface
                        && c.incoming_surface == surface
                });
                let conflict = match recorded {
                    Some(c) => c.clone(),
                    None => {
                        let c = Conflict {
                            id: self.next_conflict_id.max(1),
                            entry_id,
                            gramset: gramset.clone(),
                            existing_surface,
                            incoming_surface: surface.to_string(),
                            resolution: Resolution::Unresolved,
                        };
                        self.next_conflict_id = c.id + 1;
                        self.conflicts.push(c.clone());
                        c
                    }
                };
                report.conflicts.push(conflict);
                continue;
            }
            if let Some(form) = forms.iter_mut().find(|f| f.same(surface, None)) {
                form.gramset = Some(gramset.clone());
                if options.accept {
                    form.status = Status::Accepted;
                }
                report.gramsets_attached += 1;
                continue;
            }
            forms.push(WordForm {
                surface: surface.to_string(),
                gramset: Some(gramset.clone()),
                source: Source::Generated,
                status: if options.accept {
                    Status::Accepted
                } else {
                    Status::Pending
                },
                variant: false,
            });
            report.created += 1;
        }
        Ok(report)
    }

    /// Applies a human decision to an open conflict and returns the entry.
    pub fn resolve_conflict(
        &mut self,
        id: u64,
        resolution: Resolution,
    ) -> Result<LemmaEntry, DictionaryError> {
        if resolution == Resolution::Unresolved {
            return Err(DictionaryError::InvalidResolution);
        }
        let ci = self
            .conflicts
            .iter()
            .position(|c| c.id == id)
            .ok_or(DictionaryError::UnknownConflict(id))?;
        if !self.conflicts[ci].is_open() {
            return Err(DictionaryError::AlreadyResolved(id));
        }
        let conflict = self.conflicts[ci].clone();
        let entry = self
            .entries
            .iter_mut()
            .find(|e| e.id == conflict.entry_id)
            .ok_or(DictionaryError::UnknownEntry(conflict.entry_id))?;
        let gramset = Some(&conflict.gramset);
        let existing = entry
            .forms
            .iter()
            .position(|f| f.same(&conflict.existing_surface, gramset));
        let incoming = entry
            .forms
            .iter()
            .position(|f| f.same(&conflict.incoming_surface, gramset));

        match resolution {
            Resolution::KeepExisting | Resolution::Unresolved => {}
            Resolution::TakeIncoming => match (existing, incoming) {
                (Some(e), Some(_)) => {
                    entry.forms.remove(e);
                }
                (Some(e), None) => {
                    let form = &mut entry.forms[e];
                    form.surface = conflict.incoming_surface.clone();
                    form.source = Source::Generated;
                    form.status = Status::Accepted;
                }
                (None, None) => entry.forms.push(WordForm::new(
                    conflict.incoming_surface.clone(),
                    Some(conflict.gramset.clone()),
                    Source::Generated,
                )),
                (None, Some(_)) => {}
            },
            Resolution::KeepBoth => {
                if let Some(e) = existing {
                    entry.forms[e].variant = true;
                }
                match incoming {
                    Some(i) => entry.forms[i].variant = true,
                    None => {
                        let mut form = WordForm::new(
                            conflict.incoming_surface.clone(),
                            Some(conflict.gramset.clone()),
                            Source::Generated,
                        );
                        form.variant = true;
                        entry.forms.push(form);
                    }
                }
            }
        }
        self.conflicts[ci].resolution = resolution;
        Ok(entry.clone())
    }

    /// Lists entries sharing a key and untagged forms that duplicate a
    /// tagged form of the same entry.
    pub fn find_duplicates(&self) -> Vec<DuplicateGroup> {
        let mut by_key: BTreeMap<EntryKey, Vec<u64>> = BTreeMap::new();
        for e in &self.entries {
            by_key.entry(e.key()).or_default().push(e.id);
        }
        let mut groups: Vec<DuplicateGroup> = by_key
            .into_iter()
            .filter(|(_, ids)| ids.len() > 1)
            .map(|(key, mut entry_ids)| {
                entry_ids.sort_unstable();
                DuplicateGroup::Entries { key, entry_ids }
            })
            .collect();

        let mut entries: Vec<&LemmaEntry> = self.entries.iter().collect();
        entries.sort_by_key(|e| e.id);
        for e in entries {
            let mut seen: Vec<&str> = Vec::new();
            for form in e.forms.iter().filter(|f| f.gramset.is_none()) {
                if seen.contains(&form.surface.as_str()) {
                    continue;
                }
                seen.push(&form.surface);
                let tagged: Vec<Gramset> = e
                    .forms
                    .iter()
                    .filter(|f| f.surface == form.surface)
                    .filter_map(|f| f.gramset.clone())
                    .collect();
                if !tagged.is_empty() {
                    groups.push(DuplicateGroup::Forms {
                        entry_id: e.id,
                        surface: form.surface.clone(),
                        tagged,
                    });
                }
            }
        }
        groups
    }

    /// Folds duplicate entries into the one with the lowest id and drops
    /// untagged forms whose surface is already tagged in the same entry.
    pub fn remove_duplicates(&mut self) -> DedupeReport {
        let mut report = DedupeReport::default();
        let mut keep: BTreeMap<EntryKey, usize> = BTreeMap::new();
        let mut order: Vec<usize> = (0..self.entries.len()).collect();
        order.sort_by_key(|&i| self.entries[i].id);
        let mut dropped = Vec::new();
        for i in order {
            let key = self.entries[i].key();
            match keep.get(&key) {
                None => {
                    keep.insert(key, i);
                }
                Some(&target) => {
                    let donor = std::mem::take(&mut self.entries[i].forms);
                    let donor_args = self.entries[i].template_args.take();
                    let (from_id, to_id) = (self.entries[i].id, self.entries[target].id);
                    let entry = &mut self.entries[target];
                    for form in donor {
                        if entry
                            .forms
                            .iter()
                            .any(|f| f.same(&form.surface, form.gramset.as_ref()))
                        {
                            report.forms_removed += 1;
                        } else {
                            entry.forms.push(form);
                        }
                    }
                    if entry.template_args.is_none() {
                        entry.template_args = donor_args;
                    }
                    for c in self.conflicts.iter_mut().filter(|c| c.entry_id == from_id) {
                        c.entry_id = to_id;
                    }
                    dropped.push(from_id);
                    report.entries_merged += 1;
                }
            }
        }
        self.entries.retain(|e| !dropped.contains(&e.id));

        for entry in &mut self.entries {
            let tagged: Vec<String> = entry
                .forms
                .iter()
                .filter(|f| f.gramset.is_some())
                .map(|f| f.surface.clone())
                .collect();
            let mut kept: Vec<WordForm> = Vec::with_capacity(entry.forms.len());
            for form in entry.forms.drain(..) {
                let redundant = (form.gramset.is_none() && tagged.contains(&form.surface))
                    || kept.iter().any(|k| k.same(&form.surface, form.gramset.as_ref()));
                if redundant {
                    report.forms_removed += 1;
                } else {
                    kept.push(form);
                }
            }
            entry.forms = kept;
        }
        report
    }

    /// Case-insensitive lemma prefix search, ordered by lemma then id.
    pub fn search(&self, prefix: &str, language: Option<Language>, pos: Option<Pos>) -> Vec<&LemmaEntry> {
        let prefix = prefix.to_lowercase();
        let mut hits: Vec<&LemmaEntry> = self
            .entries
            .iter()
            .filter(|e| e.lemma.to_lowercase().starts_with(&prefix))
            .filter(|e| language.is_none_or(|l| e.language == l))
            .filter(|e| pos.is_none_or(|p| e.pos == p))
            .collect();
        hits.sort_by(|a, b| (&a.lemma, a.language, a.pos, a.id).cmp(&(&b.lemma, b.language, b.pos, b.id)));
        hits
    }

    /// Forms of `entry` in export order: by the governing table's slot order,
    /// untagged and unlisted gramsets last, ties in storage order.
    pub fn ordered_forms<'a>(&self, entry: &'a LemmaEntry) -> Vec<&'a WordForm> {
        let order = entry
            .governing_kind()
            .and_then(|k| self.slot_orders.get(&k));
        let rank: HashMap<&Gramset, usize> = order
            .map(|o| o.iter().enumerate().map(|(i, g)| (g, i)).collect())
            .unwrap_or_default();
        let mut forms: Vec<&WordForm> = entry.forms.iter().collect();
        forms.sort_by_key(|f| {
            f.gramset
                .as_ref()
                .and_then(|g| rank.get(g).copied())
                .unwrap_or(usize::MAX)
        });
        forms
    }

    /// Entries in export order: by lemma, language, pos, then id.
    pub fn ordered_entries(&self) -> Vec<&LemmaEntry> {
        let mut entries: Vec<&LemmaEntry> = self.entries.iter().collect();
        entries.sort_by(|a, b| {
            (&a.lemma, a.language, a.pos, a.id).cmp(&(&b.lemma, b.language, b.pos, b.id))
        });
        entries
    }
}
