//! Core building blocks for expanding a Veps/Karelian corpus dictionary from
//! Wiktionary inflection templates.
//!
//! - [`wikitext`] finds and parses template invocations in page source.
//! - [`morphology`] turns template arguments into full paradigms using
//!   editable rule tables, and materializes the Karelian static template.
//! - [`dictionary`] stores lemmas and word forms, merges generated paradigms
//!   and tracks conflicts that need a human decision.

pub mod dictionary;
mod lang;
pub mod morphology;
pub mod wikitext;

pub use dictionary::{
    Conflict, DuplicateGroup, EntryKey, LemmaEntry, MergeReport, Resolution, Store, WordForm,
};
pub use lang::{Language, Pos};
pub use morphology::{FormValue, Gramset, Paradigm, RuleSet, RuleTable};
pub use wikitext::{InflectionKind, TemplateInvocation};
