use std::collections::HashMap;

use super::table::{validate_rule_table, RuleTable, SlotRecipe, Violation};
use super::{FormValue, Gramset, MorphologyError, Paradigm, ParadigmSlot};

/// Builds every stem declared in `table` from the parameter values.
pub(crate) fn build_stems<S: AsRef<str>>(
    table: &RuleTable,
    params: &[S],
) -> Result<HashMap<String, String>, MorphologyError> {
    let values: HashMap<&str, (usize, &str)> = table
        .param_roles
        .iter()
        .enumerate()
        .map(|(i, role)| (role.as_str(), (i + 1, params[i].as_ref())))
        .collect();

    let mut stems = HashMap::with_capacity(table.stem_rules.len());
    for rule in &table.stem_rules {
        let mut stem = String::new();
        for part in &rule.parts {
            let (_, value) = values[part.as_str()];
            stem.push_str(value);
        }
        if let Some(ch) = rule.strip {
            let last = rule.parts.last().expect("validated stem has parts");
            let (position, value) = values[last.as_str()];
            if !stem.ends_with(ch) {
                return Err(MorphologyError::StemDerivation {
                    position,
                    role: last.clone(),
                    value: value.to_string(),
                    expected: ch,
                });
            }
            stem.pop();
        }
        stems.insert(rule.role.clone(), stem);
    }
    Ok(stems)
}

/// Generates the paradigm described by `table` for one set of template
/// parameters.
///
/// Slots are evaluated so that referenced forms come first. A slot built on
/// an `Unknown` or `Nonexistent` form inherits that value.
pub fn generate_paradigm<S: AsRef<str>>(
    table: &RuleTable,
    params: &[S],
) -> Result<Paradigm, MorphologyError> {
    validate_rule_table(table).map_err(MorphologyError::InvalidTable)?;
    let kind = table.kind().expect("validated table names a known template");
    if params.len() != table.param_roles.len() {
        return Err(MorphologyError::Arity {
            template: table.template_name.clone(),
            expected: table.param_roles.len(),
            got: params.len(),
            detail: format!("parameters are: {}", table.param_roles.join(", ")),
        });
    }
    if let Some(i) = params.iter().position(|p| p.as_ref().trim().is_empty()) {
        return Err(MorphologyError::EmptyParameter {
            position: i + 1,
            role: table.param_roles[i].clone(),
        });
    }
    let order = table
        .evaluation_order()
        .map_err(|path| MorphologyError::InvalidTable(vec![Violation::Cycle { path }]))?;

    let stems = build_stems(table, params)?;
    let raw: HashMap<&str, &str> = table
        .param_roles
        .iter()
        .map(String::as_str)
        .zip(params.iter().map(AsRef::as_ref))
        .collect();
    let index: HashMap<&Gramset, usize> = table
        .slots
        .iter()
        .enumerate()
        .map(|(i, s)| (&s.gramset, i))
        .collect();

    let mut values: Vec<Option<FormValue>> = vec![None; table.slots.len()];
    for i in order {
        let slot = &table.slots[i];
        let value = match &slot.recipe {
            SlotRecipe::StemPlusSuffix { stem, suffix } => {
                let base = stems
                    .get(stem)
                    .map(String::as_str)
                    .or_else(|| raw.get(stem.as_str()).copied())
                    .ok_or_else(|| {
                        MorphologyError::InvalidTable(vec![Violation::UnknownStemRole {
                            slot: slot.gramset.clone(),
                            stem: stem.clone(),
                        }])
                    })?;
                FormValue::Surface(format!("{base}{suffix}"))
            }
            SlotRecipe::FormPlusSuffix { form, suffix } => {
                let target = index.get(form).ok_or_else(|| {
                    MorphologyError::InvalidTable(vec![Violation::UnknownFormReference {
                        slot: slot.gramset.clone(),
                        target: form.clone(),
                    }])
                })?;
                match values[*target].as_ref().expect("dependency evaluated first") {
                    FormValue::Surface(s) => FormValue::Surface(format!("{s}{suffix}")),
                    other => other.clone(),
                }
            }
            SlotRecipe::Unknown => FormValue::Unknown,
            SlotRecipe::Nonexistent => FormValue::Nonexistent,
        };
        if value == FormValue::Surface(String::new()) {
            return Err(MorphologyError::EmptySurface(slot.gramset.clone()));
        }
        values[i] = Some(value);
    }

    let slots: Vec<ParadigmSlot> = table
        .slots
        .iter()
        .zip(values)
        .map(|(rule, value)| ParadigmSlot {
            gramset: rule.gramset.clone(),
            value: value.expect("every slot evaluated"),
        })
        .collect();

    let lemma = table
        .lemma_slot
        .as_ref()
        .and_then(|g| slots.iter().find(|s| &s.gramset == g))
        .and_then(|s| s.value.surface())
        .unwrap_or_else(|| params.first().map(AsRef::as_ref).unwrap_or_default())
        .to_string();

    Ok(Paradigm { lemma, kind, slots })
}
