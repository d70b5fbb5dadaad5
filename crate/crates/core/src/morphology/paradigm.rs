use serde::{Deserialize, Serialize};

use super::Gramset;
use crate::wikitext::InflectionKind;

/// Content of one paradigm cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "surface", rename_all = "lowercase")]
pub enum FormValue {
    Surface(String),
    /// Exists in the language, but the rules cannot generate it (`?`).
    Unknown,
    /// Does not exist in the language (`—`).
    Nonexistent,
}

impl FormValue {
    pub fn surface(&self) -> Option<&str> {
        match self {
            FormValue::Surface(s) => Some(s),
            _ => None,
        }
    }

    /// Table cell text: the surface, `?` or `—`.
    pub fn cell(&self) -> &str {
        match self {
            FormValue::Surface(s) => s,
            FormValue::Unknown => "?",
            FormValue::Nonexistent => "—",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParadigmSlot {
    pub gramset: Gramset,
    #[serde(flatten)]
    pub value: FormValue,
}

/// A generated inflection table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paradigm {
    pub lemma: String,
    pub kind: InflectionKind,
    pub slots: Vec<ParadigmSlot>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SlotCounts {
    pub surface: usize,
    pub unknown: usize,
    pub nonexistent: usize,
}

impl Paradigm {
    pub fn get(&self, gramset: &Gramset) -> Option<&FormValue> {
        self.slots
            .iter()
            .find(|s| &s.gramset == gramset)
            .map(|s| &s.value)
    }

    /// Surface of the `case`/`number` slot, if it has one.
    pub fn surface(&self, case: &str, number: &str) -> Option<&str> {
        self.get(&Gramset::case_number(case, number))
            .and_then(FormValue::surface)
    }

    /// Slots with a surface form, in table order.
    pub fn defined_forms(&self) -> impl Iterator<Item = (&Gramset, &str)> {
        self.slots
            .iter()
            .filter_map(|s| s.value.surface().map(|v| (&s.gramset, v)))
    }

    pub fn counts(&self) -> SlotCounts {
        let mut c = SlotCounts::default();
        for slot in &self.slots {
            match slot.value {
                FormValue::Surface(_) => c.surface += 1,
                FormValue::Unknown => c.unknown += 1,
                FormValue::Nonexistent => c.nonexistent += 1,
            }
        }
        c
    }

    /// Plain-text table. Two-feature paradigms (case × number) are laid out
    /// as a grid with one row per case; anything else is one line per slot.
    pub fn render_table(&self) -> String {
        let mut out = format!("{} ({})\n", self.lemma, self.kind);
        let grid = !self.slots.is_empty() && self.slots.iter().all(|s| s.gramset.len() == 2);
        if !grid {
            for slot in &self.slots {
                out.push_str(&format!("{}\t{}\n", slot.gramset.label(), slot.value.cell()));
            }
            return out;
        }
        let mut rows: Vec<String> = Vec::new();
        let mut columns: Vec<String> = Vec::new();
        for slot in &self.slots {
            let mut values = slot.gramset.values();
            let row = values.next().unwrap_or_default().to_string();
            let col = values.next().unwrap_or_default().to_string();
            if !rows.contains(&row) {
                rows.push(row);
            }
            if !columns.contains(&col) {
                columns.push(col);
            }
        }
        out.push('\t');
        out.push_str(
            &columns
                .iter()
                .map(|c| super::gramset::value_label(c))
                .collect::<Vec<_>>()
                .join("\t"),
        );
        out.push('\n');
        for row in &rows {
            out.push_str(&super::gramset::value_label(row));
            for col in &columns {
                let cell = self
                    .slots
                    .iter()
                    .find(|s| {
                        let mut v = s.gramset.values();
                        v.next() == Some(row.as_str()) && v.next() == Some(col.as_str())
                    })
                    .map(|s| s.value.cell())
                    .unwrap_or("");
                out.push('\t');
                out.push_str(cell);
            }
            out.push('\n');
        }
        out
    }
}
