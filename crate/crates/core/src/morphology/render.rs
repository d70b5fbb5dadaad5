use super::gramset::value_label;
use super::table::{RuleTable, SlotRecipe, StemRule};

fn stem_name(table: &RuleTable, role: &str) -> String {
    match table.stem(role) {
        Some(StemRule {
            label: Some(label), ..
        }) => label.clone(),
        Some(_) => format!("{role} stem"),
        None => format!("parameter {role}"),
    }
}

fn with_suffix(head: String, suffix: &str) -> String {
    if suffix.is_empty() {
        head
    } else {
        format!("{head} + {suffix}")
    }
}

/// Describes a rule table in prose, one line per slot grouped by the first
/// feature, for review by linguists.
pub fn render_rules_document(table: &RuleTable) -> String {
    let mut out = format!(
        "# Inflection rules for {{{{{}}}}} ({} {})\n\n",
        table.template_name, table.language, table.pos
    );
    out.push_str(&format!("Parameters: {}\n", table.param_roles.join(", ")));
    for stem in &table.stem_rules {
        let mut line = format!(
            "Stem: {} = {}",
            stem_name(table, &stem.role),
            stem.parts.join(" + ")
        );
        if let Some(ch) = stem.strip {
            line.push_str(&format!(", dropping the final \"{ch}\""));
        }
        out.push_str(&line);
        out.push('\n');
    }

    let mut group: Option<&str> = None;
    for slot in &table.slots {
        let head = slot.gramset.values().next().unwrap_or_default();
        if group != Some(head) {
            out.push_str(&format!("\n## {}\n", value_label(head)));
            group = Some(head);
        }
        let rule = match &slot.recipe {
            SlotRecipe::StemPlusSuffix { stem, suffix } => {
                with_suffix(stem_name(table, stem), suffix)
            }
            SlotRecipe::FormPlusSuffix { form, suffix } => with_suffix(form.label(), suffix),
            SlotRecipe::Unknown => "not generated (requires a linguist rule)".to_string(),
            SlotRecipe::Nonexistent => "no such form".to_string(),
        };
        out.push_str(&format!("- {} = {}\n", slot.gramset.label(), rule));
    }
    out
}
