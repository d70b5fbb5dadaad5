//! Random stores seeded with legacy forms around a generated paradigm.

use proptest::prelude::*;
use wikiparadigm_core::dictionary::{
    export_dictionary, import_dictionary, Format, Source, Store, UpsertOptions, WordForm,
};
use wikiparadigm_core::morphology::{generate_paradigm, veps_nominal_table, Gramset, Paradigm};
use wikiparadigm_core::{EntryKey, Language, Pos};

pub fn paradigm() -> impl Strategy<Value = Paradigm> {
    ("[a-z]{1,3}", "[a-z]{1,2}", "[ae]", "[a-z]{1,2}", "[ie]").prop_map(|(b, n, g, p, pp)| {
        let params = [b, n, format!("{g}n"), p, format!("{pp}d")];
        generate_paradigm(&veps_nominal_table(), &params).unwrap()
    })
}

/// Legacy forms: surfaces drawn from the paradigm (some tagged, some not)
/// plus a few foreign ones.
pub fn legacy(p: &Paradigm) -> impl Strategy<Value = Vec<WordForm>> {
    let defined: Vec<(Gramset, String)> = p
        .defined_forms()
        .map(|(g, s)| (g.clone(), s.to_string()))
        .collect();
    let n = defined.len();
    prop::collection::vec((0..n, 0..3u8, "[a-z]{2,5}"), 0..12).prop_map(move |picks| {
        picks
            .into_iter()
            .map(|(i, mode, foreign)| {
                let (g, s) = defined[i].clone();
                match mode {
                    0 => WordForm::new(s, None, Source::Preexisting),
                    1 => WordForm::new(s, Some(g), Source::Preexisting),
                    _ => WordForm::new(foreign, Some(g), Source::Preexisting),
                }
            })
            .fold(Vec::new(), |mut acc: Vec<WordForm>, f| {
                let clash = acc.iter().any(|a| {
                    (a.surface == f.surface && a.gramset == f.gramset)
                        || (f.gramset.is_some() && a.gramset == f.gramset)
                });
                if !clash {
                    acc.push(f);
                }
                acc
            })
    })
}

pub fn scenario() -> impl Strategy<Value = (Paradigm, Vec<WordForm>)> {
    paradigm().prop_flat_map(|p| {
        let forms = legacy(&p);
        (Just(p), forms)
    })
}

pub fn key(p: &Paradigm) -> EntryKey {
    EntryKey::new(p.lemma.clone(), Language::Vep, Pos::Noun)
}

pub fn seeded(p: &Paradigm, forms: Vec<WordForm>) -> Store {
    let mut store = Store::new();
    store.push_entry(key(p), forms, None);
    store
}

pub fn accounted((p, forms): &(Paradigm, Vec<WordForm>)) -> Result<(), TestCaseError> {
    let mut store = seeded(p, forms.clone());
    let r = store.upsert_generated(&key(p), p, &UpsertOptions::default()).unwrap();
    let defined = p.defined_forms().count();
    prop_assert_eq!(defined, 42);
    prop_assert_eq!(r.created + r.gramsets_attached + r.unchanged + r.conflicts.len(), defined);
    Ok(())
}

pub fn idempotent((p, forms): &(Paradigm, Vec<WordForm>)) -> Result<(), TestCaseError> {
    let mut store = seeded(p, forms.clone());
    let first = store.upsert_generated(&key(p), p, &UpsertOptions::default()).unwrap();
    let after_first = store.clone();
    let second = store.upsert_generated(&key(p), p, &UpsertOptions::default()).unwrap();
    prop_assert_eq!(&store, &after_first);
    prop_assert_eq!(second.created, 0);
    prop_assert_eq!(second.gramsets_attached, 0);
    prop_assert_eq!(second.unchanged, first.created + first.gramsets_attached + first.unchanged);
    prop_assert_eq!(second.conflicts, first.conflicts);
    Ok(())
}

pub fn tsv_stable((p, forms): &(Paradigm, Vec<WordForm>)) -> Result<(), TestCaseError> {
    let mut store = seeded(p, forms.clone());
    store.upsert_generated(&key(p), p, &UpsertOptions::default()).unwrap();
    let once = export_dictionary(&store, Format::Tsv);
    let reread = import_dictionary(&once, Format::Tsv).unwrap();
    let twice = export_dictionary(&reread, Format::Tsv);
    prop_assert_eq!(once, twice);
    Ok(())
}

pub fn structured_lossless((p, forms): &(Paradigm, Vec<WordForm>), accept: bool) -> Result<(), TestCaseError> {
    let mut store = seeded(p, forms.clone());
    let opts = UpsertOptions { accept, template_args: Some("{{vep-decl-stems|x}}".into()), ..Default::default() };
    store.upsert_generated(&key(p), p, &opts).unwrap();
    let bytes = export_dictionary(&store, Format::Structured);
    let back = import_dictionary(&bytes, Format::Structured).unwrap();
    prop_assert_eq!(back.entries(), store.entries());
    prop_assert_eq!(export_dictionary(&back, Format::Structured), bytes);
    Ok(())
}
