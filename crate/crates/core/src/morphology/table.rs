use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use super::Gramset;
use crate::lang::{Language, Pos};
use crate::wikitext::InflectionKind;

/// How a named stem is built from template parameters: the parameter values
/// concatenated in order, optionally with one required trailing character
/// removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StemRule {
    pub role: String,
    pub parts: Vec<String>,
    pub strip: Option<char>,
    /// Prose name used when rules are rendered for linguists.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SlotRecipe {
    /// A stem (or raw parameter) followed by a literal suffix.
    StemPlusSuffix { stem: String, suffix: String },
    /// Another slot's surface followed by a literal suffix.
    FormPlusSuffix { form: Gramset, suffix: String },
    /// The form exists but these rules cannot produce it.
    Unknown,
    /// The language has no such form.
    Nonexistent,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotRule {
    pub gramset: Gramset,
    pub recipe: SlotRecipe,
}

impl SlotRule {
    pub fn new(gramset: Gramset, recipe: SlotRecipe) -> Self {
        SlotRule { gramset, recipe }
    }
}

/// A declarative paradigm recipe for one dynamic template.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleTable {
    pub language: Language,
    /// `noun` tables also serve adjectives.
    pub pos: Pos,
    pub template_name: String,
    pub param_roles: Vec<String>,
    pub features: Vec<String>,
    /// Slot whose surface becomes the paradigm's lemma.
    pub lemma_slot: Option<Gramset>,
    pub stem_rules: Vec<StemRule>,
    pub slots: Vec<SlotRule>,
}

impl RuleTable {
    /// The inflection template this table implements, if it is one of the
    /// known dynamic templates.
    pub fn kind(&self) -> Option<InflectionKind> {
        InflectionKind::from_template_name(&self.template_name)
    }

    pub fn stem(&self, role: &str) -> Option<&StemRule> {
        self.stem_rules.iter().find(|s| s.role == role)
    }

    pub fn slot_index(&self, gramset: &Gramset) -> Option<usize> {
        self.slots.iter().position(|s| &s.gramset == gramset)
    }

    pub fn gramsets(&self) -> impl Iterator<Item = &Gramset> {
        self.slots.iter().map(|s| &s.gramset)
    }

    /// Slot indices in an order where every form reference is evaluated
    /// before the slot that uses it. Ties keep table order.
    pub fn evaluation_order(&self) -> Result<Vec<usize>, Vec<Gramset>> {
        let index: HashMap<&Gramset, usize> = self
            .slots
            .iter()
            .enumerate()
            .map(|(i, s)| (&s.gramset, i))
            .collect();
        let deps: Vec<Option<usize>> = self
            .slots
            .iter()
            .map(|s| match &s.recipe {
                SlotRecipe::FormPlusSuffix { form, .. } => index.get(form).copied(),
                _ => None,
            })
            .collect();

        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut marks = vec![Mark::New; self.slots.len()];
        let mut order = Vec::with_capacity(self.slots.len());
        for root in 0..self.slots.len() {
            let mut chain = Vec::new();
            let mut cur = Some(root);
            while let Some(i) = cur {
                match marks[i] {
                    Mark::Done => break,
                    Mark::Active => {
                        let start = chain.iter().position(|&c| c == i).unwrap_or(0);
                        let mut cycle: Vec<Gramset> = chain[start..]
                            .iter()
                            .map(|&c: &usize| self.slots[c].gramset.clone())
                            .collect();
                        cycle.push(self.slots[i].gramset.clone());
                        return Err(cycle);
                    }
                    Mark::New => {
                        marks[i] = Mark::Active;
                        chain.push(i);
                        cur = deps[i];
                    }
                }
            }
            // Each slot has at most one dependency, so the chain unwinds in
            // reverse: deepest dependency first.
            for &i in chain.iter().rev() {
                marks[i] = Mark::Done;
                order.push(i);
            }
        }
        Ok(order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    DuplicateSlot { gramset: Gramset },
    Cycle { path: Vec<Gramset> },
    UnknownFormReference { slot: Gramset, target: Gramset },
    UnknownStemRole { slot: Gramset, stem: String },
    UnknownParameter { stem: String, param: String },
    DuplicateStem { role: String },
    DuplicateParameter { role: String },
    AmbiguousRole { role: String },
    EmptyStem { role: String },
    FeatureMismatch { slot: Gramset },
    UnknownLemmaSlot { gramset: Gramset },
    UnknownTemplate { name: String },
    TemplateMismatch { name: String, language: Language, pos: Pos },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSlot { gramset } => write!(f, "duplicate slot {}", gramset.key()),
            Violation::Cycle { path } => {
                let keys: Vec<_> = path.iter().map(Gramset::key).collect();
                write!(f, "cyclic form references: {}", keys.join(" -> "))
            }
            Violation::UnknownFormReference { slot, target } => write!(
                f,
                "slot {} references missing slot {}",
                slot.key(),
                target.key()
            ),
            Violation::UnknownStemRole { slot, stem } => {
                write!(f, "slot {} uses undeclared stem '{stem}'", slot.key())
            }
            Violation::UnknownParameter { stem, param } => {
                write!(f, "stem '{stem}' uses undeclared parameter '{param}'")
            }
            Violation::DuplicateStem { role } => write!(f, "stem '{role}' declared twice"),
            Violation::DuplicateParameter { role } => write!(f, "parameter '{role}' declared twice"),
            Violation::AmbiguousRole { role } => {
                write!(f, "'{role}' is both a parameter and a stem")
            }
            Violation::EmptyStem { role } => write!(f, "stem '{role}' has no parts"),
            Violation::FeatureMismatch { slot } => write!(
                f,
                "slot {} does not fit the declared features",
                slot.key()
            ),
            Violation::UnknownLemmaSlot { gramset } => {
                write!(f, "lemma slot {} is not in the table", gramset.key())
            }
            Violation::UnknownTemplate { name } => {
                write!(f, "template '{name}' is not a known dynamic inflection template")
            }
            Violation::TemplateMismatch { name, language, pos } => write!(
                f,
                "template '{name}' does not belong to language {language} / pos {pos}"
            ),
        }
    }
}

/// Checks a table for structural problems. Returns every violation found.
pub fn validate_rule_table(table: &RuleTable) -> Result<(), Vec<Violation>> {
    let mut violations = Vec::new();

    match table.kind() {
        Some(kind) if kind.is_dynamic() => {
            let expected_pos = if kind == InflectionKind::VepsVerb {
                Pos::Verb
            } else {
                Pos::Noun
            };
            if table.language != Language::Vep || table.pos != expected_pos {
                violations.push(Violation::TemplateMismatch {
                    name: table.template_name.clone(),
                    language: table.language,
                    pos: table.pos,
                });
            }
        }
        _ => violations.push(Violation::UnknownTemplate {
            name: table.template_name.clone(),
        }),
    }

    let mut params = HashSet::new();
    for role in &table.param_roles {
        if !params.insert(role.as_str()) {
            violations.push(Violation::DuplicateParameter { role: role.clone() });
        }
    }

    let mut stems = HashSet::new();
    for stem in &table.stem_rules {
        if !stems.insert(stem.role.as_str()) {
            violations.push(Violation::DuplicateStem {
                role: stem.role.clone(),
            });
        }
        if params.contains(stem.role.as_str()) {
            violations.push(Violation::AmbiguousRole {
                role: stem.role.clone(),
            });
        }
        if stem.parts.is_empty() {
            violations.push(Violation::EmptyStem {
                role: stem.role.clone(),
            });
        }
        for part in &stem.parts {
            if !params.contains(part.as_str()) {
                violations.push(Violation::UnknownParameter {
                    stem: stem.role.clone(),
                    param: part.clone(),
                });
            }
        }
    }

    let mut seen = HashSet::new();
    for slot in &table.slots {
        if !seen.insert(&slot.gramset) {
            violations.push(Violation::DuplicateSlot {
                gramset: slot.gramset.clone(),
            });
        }
        let fits = !slot.gramset.is_empty()
            && slot.gramset.len() <= table.features.len()
            && slot
                .gramset
                .pairs()
                .iter()
                .zip(&table.features)
                .all(|((f, _), declared)| f == declared);
        if !fits {
            violations.push(Violation::FeatureMismatch {
                slot: slot.gramset.clone(),
            });
        }
        match &slot.recipe {
            SlotRecipe::StemPlusSuffix { stem, .. } => {
                if !stems.contains(stem.as_str()) && !params.contains(stem.as_str()) {
                    violations.push(Violation::UnknownStemRole {
                        slot: slot.gramset.clone(),
                        stem: stem.clone(),
                    });
                }
            }
            SlotRecipe::FormPlusSuffix { form, .. } => {
                if table.slot_index(form).is_none() {
                    violations.push(Violation::UnknownFormReference {
                        slot: slot.gramset.clone(),
                        target: form.clone(),
                    });
                }
            }
            SlotRecipe::Unknown | SlotRecipe::Nonexistent => {}
        }
    }

    if let Some(lemma) = &table.lemma_slot {
        if table.slot_index(lemma).is_none() {
            violations.push(Violation::UnknownLemmaSlot {
                gramset: lemma.clone(),
            });
        }
    }

    if let Err(path) = table.evaluation_order() {
        violations.push(Violation::Cycle { path });
    }

    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}
