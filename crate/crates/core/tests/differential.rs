//! The engine against a naive fixpoint evaluator on random acyclic tables.

#[path = "support/fixpoint.rs"]
mod fixpoint;

use fixpoint::{agree, build, case, gramset, Case, Recipe};
use proptest::prelude::*;
use wikiparadigm_core::morphology::{generate_paradigm, FormValue};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn engine_agrees_with_fixpoint(case in case()) {
        agree(&case)?;
    }
}

#[test]
fn unknown_propagates_through_form_references() {
    let case = Case {
        values: vec!["jog".into(), "i".into(), "en".into()],
        stems: vec![(vec![0, 1], false)],
        recipes: vec![
            Recipe::Unknown,
            Recipe::Form(0, "sai".into()),
            Recipe::Form(1, "päi".into()),
            Recipe::Nonexistent,
            Recipe::Form(3, "ke".into()),
            Recipe::Stem(0, "".into()),
        ],
        placement: vec![5, 4, 3, 2, 1, 0],
    };
    let p = generate_paradigm(&build(&case), &case.values).unwrap();
    let at = |i: usize| p.get(&gramset(i)).cloned();
    assert_eq!(at(1), Some(FormValue::Unknown));
    assert_eq!(at(2), Some(FormValue::Unknown));
    assert_eq!(at(4), Some(FormValue::Nonexistent));
    assert_eq!(at(5), Some(FormValue::Surface("jogi".into())));
}
