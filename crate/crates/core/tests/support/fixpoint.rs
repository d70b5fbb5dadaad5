//! Random acyclic rule tables and a naive fixpoint evaluator used as an
//! oracle for the paradigm engine.

use std::collections::HashMap;

use proptest::prelude::*;
use wikiparadigm_core::morphology::{FormValue, Gramset, RuleTable, SlotRecipe, SlotRule, StemRule};
use wikiparadigm_core::{Language, Pos};

const PARAMS: [&str; 3] = ["p1", "p2", "p3"];

#[derive(Debug, Clone)]
pub enum Recipe {
    Stem(usize, String),
    Form(usize, String),
    Unknown,
    Nonexistent,
}

#[derive(Debug, Clone)]
pub struct Case {
    pub values: Vec<String>,
    pub stems: Vec<(Vec<usize>, bool)>,
    /// Recipes in dependency order; `Form(j)` always has `j < i`.
    pub recipes: Vec<Recipe>,
    /// Position of each recipe in the table.
    pub placement: Vec<usize>,
}

pub fn case() -> impl Strategy<Value = Case> {
    let values = prop::collection::vec("[a-z]{1,3}", 3);
    let stems = prop::collection::vec((prop::collection::vec(0..3usize, 1..3), any::<bool>()), 1..4);
    (values, stems, 1..30usize)
        .prop_flat_map(|(values, stems, n)| {
            let n_stems = stems.len();
            let recipes: Vec<_> = (0..n)
                .map(|i| {
                    let suffix = "[a-z]{0,2}";
                    let stem = (0..n_stems, suffix).prop_map(|(s, x)| Recipe::Stem(s, x)).boxed();
                    if i == 0 {
                        prop_oneof![6 => stem, 1 => Just(Recipe::Unknown), 1 => Just(Recipe::Nonexistent)].boxed()
                    } else {
                        let form = (0..i, suffix).prop_map(|(j, x)| Recipe::Form(j, x));
                        prop_oneof![3 => stem, 4 => form, 1 => Just(Recipe::Unknown), 1 => Just(Recipe::Nonexistent)]
                            .boxed()
                    }
                })
                .collect();
            let placement = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            (Just(values), Just(stems), recipes, placement)
        })
        .prop_map(|(values, stems, recipes, placement)| Case {
            values,
            stems,
            recipes,
            placement,
        })
}

pub fn gramset(i: usize) -> Gramset {
    Gramset::case_number(&format!("c{i}"), "sg")
}

pub fn build(case: &Case) -> RuleTable {
    let stem_rules = case
        .stems
        .iter()
        .enumerate()
        .map(|(k, (parts, strip))| {
            let last = &case.values[*parts.last().unwrap()];
            StemRule {
                role: format!("s{k}"),
                parts: parts.iter().map(|&p| PARAMS[p].to_string()).collect(),
                strip: strip.then(|| last.chars().last().unwrap()),
                label: None,
            }
        })
        .collect();
    let mut slots: Vec<Option<SlotRule>> = vec![None; case.recipes.len()];
    for (i, recipe) in case.recipes.iter().enumerate() {
        let recipe = match recipe {
            Recipe::Stem(s, x) => SlotRecipe::StemPlusSuffix {
                stem: format!("s{s}"),
                suffix: x.clone(),
            },
            Recipe::Form(j, x) => SlotRecipe::FormPlusSuffix {
                form: gramset(*j),
                suffix: x.clone(),
            },
            Recipe::Unknown => SlotRecipe::Unknown,
            Recipe::Nonexistent => SlotRecipe::Nonexistent,
        };
        slots[case.placement[i]] = Some(SlotRule::new(gramset(i), recipe));
    }
    RuleTable {
        language: Language::Vep,
        pos: Pos::Noun,
        template_name: "vep-decl-stems".into(),
        param_roles: PARAMS.iter().map(|s| s.to_string()).collect(),
        features: vec!["case".into(), "number".into()],
        lemma_slot: None,
        stem_rules,
        slots: slots.into_iter().map(Option::unwrap).collect(),
    }
}

/// Repeatedly sweeps the recipes, filling any cell whose inputs are known,
/// until nothing changes. `None` marks a surface that came out empty.
pub fn fixpoint(case: &Case) -> Option<HashMap<Gramset, FormValue>> {
    let stems: Vec<String> = case
        .stems
        .iter()
        .map(|(parts, strip)| {
            let joined: String = parts.iter().map(|&p| case.values[p].as_str()).collect();
            let mut chars: Vec<char> = joined.chars().collect();
            if *strip {
                chars.pop();
            }
            chars.into_iter().collect()
        })
        .collect();
    let mut cells: Vec<Option<FormValue>> = vec![None; case.recipes.len()];
    loop {
        let mut changed = false;
        for (i, recipe) in case.recipes.iter().enumerate() {
            if cells[i].is_some() {
                continue;
            }
            let value = match recipe {
                Recipe::Stem(s, x) => Some(FormValue::Surface(format!("{}{}", stems[*s], x))),
                Recipe::Form(j, x) => cells[*j].as_ref().map(|v| match v {
                    FormValue::Surface(s) => FormValue::Surface(format!("{s}{x}")),
                    other => other.clone(),
                }),
                Recipe::Unknown => Some(FormValue::Unknown),
                Recipe::Nonexistent => Some(FormValue::Nonexistent),
            };
            if let Some(v) = value {
                cells[i] = Some(v);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = HashMap::new();
    for (i, cell) in cells.into_iter().enumerate() {
        let cell = cell.expect("acyclic input always converges");
        if cell == FormValue::Surface(String::new()) {
            return None;
        }
        out.insert(gramset(i), cell);
    }
    Some(out)
}

/// Generates `case` with the engine and compares every cell with the oracle.
pub fn agree(case: &Case) -> Result<(), TestCaseError> {
    let table = build(case);
    let expected = fixpoint(case);
    match wikiparadigm_core::morphology::generate_paradigm(&table, &case.values) {
        Ok(p) => {
            let expected = expected.ok_or_else(|| TestCaseError::fail("engine produced a paradigm the oracle rejects"))?;
            prop_assert_eq!(p.slots.len(), case.recipes.len());
            for (slot, rule) in p.slots.iter().zip(&table.slots) {
                prop_assert_eq!(&slot.gramset, &rule.gramset);
                prop_assert_eq!(Some(&slot.value), expected.get(&slot.gramset));
            }
        }
        Err(e) => prop_assert!(expected.is_none(), "engine failed: {}", e),
    }
    Ok(())
}
