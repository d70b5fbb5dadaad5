use std::collections::HashMap;
use std::str::FromStr;

use super::{
    DictionaryError, EntryKey, Language, LemmaEntry, Pos, Source, Status, Store, WordForm,
};
use crate::morphology::Gramset;

pub const TSV_HEADER: &str = "lemma\tlanguage\tpos\tsurface\tgramset\tstatus";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// One row per form; see [`TSV_HEADER`].
    Tsv,
    /// One JSON [`LemmaEntry`] per line.
    Structured,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tsv" => Ok(Format::Tsv),
            "structured" | "ndjson" | "jsonl" => Ok(Format::Structured),
            other => Err(format!("unknown format '{other}' (expected tsv or structured)")),
        }
    }
}

/// Serializes the dictionary. Output order is deterministic.
pub fn export_dictionary(store: &Store, format: Format) -> Vec<u8> {
    let mut out = String::new();
    match format {
        Format::Tsv => {
            out.push_str(TSV_HEADER);
            out.push('\n');
            for entry in store.ordered_entries() {
                for form in store.ordered_forms(entry) {
                    let gramset = form.gramset.as_ref().map(ToString::to_string);
                    out.push_str(&format!(
                        "{}\t{}\t{}\t{}\t{}\t{}\n",
                        entry.lemma,
                        entry.language,
                        entry.pos,
                        form.surface,
                        gramset.unwrap_or_default(),
                        form.status.code()
                    ));
                }
            }
        }
        Format::Structured => {
            for entry in store.ordered_entries() {
                let record = LemmaEntry {
                    forms: store.ordered_forms(entry).into_iter().cloned().collect(),
                    ..entry.clone()
                };
                out.push_str(&serde_json::to_string(&record).expect("entry serializes"));
                out.push('\n');
            }
        }
    }
    out.into_bytes()
}

fn import_error(row: usize, message: impl Into<String>) -> DictionaryError {
    DictionaryError::Import {
        row,
        message: message.into(),
    }
}

/// Reads a dictionary. TSV rows become preexisting forms, untagged when the
/// gramset column is empty; rows sharing a key form one entry. Structured
/// records keep their ids and sources.
pub fn import_dictionary(bytes: &[u8], format: Format) -> Result<Store, DictionaryError> {
    let text = std::str::from_utf8(bytes).map_err(|e| import_error(0, format!("not UTF-8: {e}")))?;
    match format {
        Format::Tsv => import_tsv(text),
        Format::Structured => import_structured(text),
    }
}

fn import_tsv(text: &str) -> Result<Store, DictionaryError> {
    let mut store = Store::new();
    let mut index: HashMap<EntryKey, usize> = HashMap::new();
    let mut entries: Vec<(EntryKey, Vec<WordForm>)> = Vec::new();

    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || (row == 1 && line == TSV_HEADER) {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 6 {
            return Err(import_error(
                row,
                format!("expected 6 tab-separated columns, found {}", cols.len()),
            ));
        }
        let lemma = cols[0].trim();
        let surface = cols[3].trim();
        if lemma.is_empty() || surface.is_empty() {
            return Err(import_error(row, "lemma and surface must not be empty"));
        }
        let language = Language::from_str(cols[1]).map_err(|m| import_error(row, m))?;
        let pos = Pos::from_str(cols[2]).map_err(|m| import_error(row, m))?;
        let gramset = if cols[4].trim().is_empty() {
            None
        } else {
            Some(Gramset::from_str(cols[4]).map_err(|e| import_error(row, e.to_string()))?)
        };
        let status = match cols[5].trim() {
            "accepted" | "" => Status::Accepted,
            "pending" => Status::Pending,
            other => return Err(import_error(row, format!("unknown status '{other}'"))),
        };

        let key = EntryKey::new(lemma, language, pos);
        let slot = *index.entry(key.clone()).or_insert_with(|| {
            entries.push((key, Vec::new()));
            entries.len() - 1
        });
        let forms = &mut entries[slot].1;
        if forms.iter().any(|f| f.same(surface, gramset.as_ref())) {
            continue;
        }
        forms.push(WordForm {
            surface: surface.to_string(),
            gramset,
            source: Source::Preexisting,
            status,
            variant: false,
        });
    }
    for (key, forms) in entries {
        store.push_entry(key, forms, None);
    }
    Ok(store)
}

fn import_structured(text: &str) -> Result<Store, DictionaryError> {
    let mut entries: Vec<LemmaEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let row = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let entry: LemmaEntry =
            serde_json::from_str(line).map_err(|e| import_error(row, e.to_string()))?;
        if entry.lemma.is_empty() {
            return Err(import_error(row, "empty lemma"));
        }
        if entry.forms.iter().any(|f| f.surface.is_empty()) {
            return Err(import_error(row, "empty surface"));
        }
        if entries.iter().any(|e| e.id == entry.id) {
            return Err(import_error(row, format!("duplicate entry id {}", entry.id)));
        }
        entries.push(entry);
    }
    Ok(Store::from_parts(entries, Vec::new()))
}
