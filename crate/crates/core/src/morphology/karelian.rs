use super::{FormValue, Gramset, MorphologyError, Paradigm, ParadigmSlot};
use crate::wikitext::{InflectionKind, TemplateInvocation};

/// Row order of the `{{krl-decl}}` table.
pub const KARELIAN_CASES: [&str; 16] = [
    "nominative",
    "genitive",
    "partitive",
    "accusative",
    "inessive",
    "elative",
    "illative",
    "adessive",
    "ablative",
    "allative",
    "essive",
    "translative",
    "instructive",
    "abessive",
    "comitative",
    "prolative",
];

pub const KARELIAN_ARITY: usize = KARELIAN_CASES.len() * 2;

/// Gramsets of the static table in argument order: every singular, then
/// every plural.
pub fn karelian_gramsets() -> impl Iterator<Item = Gramset> {
    ["sg", "pl"].into_iter().flat_map(|number| {
        KARELIAN_CASES
            .iter()
            .map(move |case| Gramset::case_number(case, number))
    })
}

fn is_dash(arg: &str) -> bool {
    matches!(arg, "–" | "-" | "—" | "")
}

/// Reads the forms listed explicitly in a `{{krl-decl}}` invocation.
///
/// A dash (or an empty argument) marks a form the language lacks.
pub fn materialize_static_paradigm(
    invocation: &TemplateInvocation,
) -> Result<Paradigm, MorphologyError> {
    if invocation.kind() != Some(InflectionKind::KarelianStaticNominal) {
        return Err(MorphologyError::WrongTemplate {
            expected: InflectionKind::KarelianStaticNominal.template_name().into(),
            found: invocation.name.clone(),
        });
    }
    if invocation.positional.len() != KARELIAN_ARITY {
        return Err(MorphologyError::Arity {
            template: invocation.name.clone(),
            expected: KARELIAN_ARITY,
            got: invocation.positional.len(),
            detail: format!(
                "expected singular then plural forms for: {}",
                KARELIAN_CASES.join(", ")
            ),
        });
    }
    let slots: Vec<ParadigmSlot> = karelian_gramsets()
        .zip(&invocation.positional)
        .map(|(gramset, arg)| ParadigmSlot {
            gramset,
            value: if is_dash(arg) {
                FormValue::Nonexistent
            } else {
                FormValue::Surface(arg.clone())
            },
        })
        .collect();

    let lemma = invocation
        .named
        .get("title")
        .filter(|t| !t.is_empty())
        .cloned()
        .or_else(|| slots[0].value.surface().map(String::from))
        .unwrap_or_else(|| invocation.positional[0].clone());

    Ok(Paradigm {
        lemma,
        kind: InflectionKind::KarelianStaticNominal,
        slots,
    })
}
