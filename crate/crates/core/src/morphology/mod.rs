//! Paradigm generation.
//!
//! Dynamic templates are expanded by a [`RuleTable`] loaded from a rule file;
//! the engine itself knows nothing about Veps. The Karelian static template
//! already lists its forms, so it is only mapped onto gramsets.

mod engine;
mod gramset;
mod karelian;
mod paradigm;
mod render;
mod rulefile;
mod stems;
mod table;

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

pub use engine::generate_paradigm;
pub use gramset::{value_label, Gramset, GramsetParseError};
pub use karelian::{karelian_gramsets, materialize_static_paradigm, KARELIAN_ARITY, KARELIAN_CASES};
pub use paradigm::{FormValue, Paradigm, ParadigmSlot, SlotCounts};
pub use render::render_rules_document;
pub use rulefile::{load_rule_table, RuleFileError};
pub use stems::{derive_stems, StemSet};
pub use table::{validate_rule_table, RuleTable, SlotRecipe, SlotRule, StemRule, Violation};

use crate::wikitext::{InflectionKind, TemplateInvocation};

/// Source of the shipped Veps nominal rule file.
pub const VEPS_NOMINAL_RULES: &str = include_str!("../../rules/vep-decl-stems.rules");
/// Source of the shipped Veps verb rule file.
pub const VEPS_VERB_RULES: &str = include_str!("../../rules/vep-conj-stems.rules");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphologyError {
    #[error("{template}: expected {expected} arguments, got {got} ({detail})")]
    Arity {
        template: String,
        expected: usize,
        got: usize,
        detail: String,
    },
    #[error("parameter {position} ({role}) is empty")]
    EmptyParameter { position: usize, role: String },
    #[error("parameter {position} ({role}) = '{value}' must end in '{expected}'")]
    StemDerivation {
        position: usize,
        role: String,
        value: String,
        expected: char,
    },
    #[error("rule table is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidTable(Vec<Violation>),
    #[error("slot {0} would be empty")]
    EmptySurface(Gramset),
    #[error("expected template '{expected}', found '{found}'")]
    WrongTemplate { expected: String, found: String },
    #[error("no rule table loaded for template '{0}'")]
    NoRuleTable(InflectionKind),
}

/// The shipped Veps nominal table.
pub fn veps_nominal_table() -> RuleTable {
    load_rule_table(VEPS_NOMINAL_RULES).expect("shipped nominal rules are valid")
}

/// The shipped Veps verb table.
pub fn veps_verb_table() -> RuleTable {
    load_rule_table(VEPS_VERB_RULES).expect("shipped verb rules are valid")
}

#[derive(Debug, Error)]
pub enum RuleSetError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: RuleFileError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Rule tables for the dynamic templates, keyed by kind.
#[derive(Debug, Clone, Default)]
pub struct RuleSet {
    tables: BTreeMap<InflectionKind, RuleTable>,
}

impl RuleSet {
    pub fn shipped() -> Self {
        let mut set = RuleSet::default();
        set.insert(veps_nominal_table());
        set.insert(veps_verb_table());
        set
    }

    /// Shipped tables, overridden by any `*.rules` file in `dir`.
    pub fn with_overrides(dir: &Path) -> Result<Self, RuleSetError> {
        let mut set = RuleSet::shipped();
        let entries = std::fs::read_dir(dir).map_err(|source| RuleSetError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let mut paths: Vec<_> = entries
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|e| e == "rules"))
            .collect();
        paths.sort();
        for path in paths {
            let text = std::fs::read_to_string(&path).map_err(|source| RuleSetError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let table = load_rule_table(&text).map_err(|source| RuleSetError::File {
                path: path.display().to_string(),
                source,
            })?;
            set.insert(table);
        }
        Ok(set)
    }

    /// Adds or replaces the table for its template. Tables for unknown
    /// templates are ignored.
    pub fn insert(&mut self, table: RuleTable) {
        if let Some(kind) = table.kind() {
            self.tables.insert(kind, table);
        }
    }

    pub fn get(&self, kind: InflectionKind) -> Option<&RuleTable> {
        self.tables.get(&kind)
    }

    pub fn tables(&self) -> impl Iterator<Item = &RuleTable> {
        self.tables.values()
    }

    /// Builds the paradigm for a recognized inflection invocation.
    pub fn paradigm_for(
        &self,
        invocation: &TemplateInvocation,
        kind: InflectionKind,
    ) -> Result<Paradigm, MorphologyError> {
        if kind == InflectionKind::KarelianStaticNominal {
            return materialize_static_paradigm(invocation);
        }
        let table = self.get(kind).ok_or(MorphologyError::NoRuleTable(kind))?;
        generate_paradigm(table, &invocation.positional)
    }

    /// Slot order for each kind, used to sort exported forms.
    pub fn slot_orders(&self) -> BTreeMap<InflectionKind, Vec<Gramset>> {
        let mut orders: BTreeMap<_, _> = self
            .tables
            .iter()
            .map(|(k, t)| (*k, t.gramsets().cloned().collect()))
            .collect();
        orders.insert(
            InflectionKind::KarelianStaticNominal,
            karelian_gramsets().collect(),
        );
        orders
    }
}
