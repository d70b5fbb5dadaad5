use serde::Serialize;

use super::MorphologyError;

const ROLES: [&str; 5] = [
    "base",
    "nominative ending",
    "genitive ending",
    "partitive ending",
    "partitive plural ending",
];

/// The stems behind a `{{vep-decl-stems|base|nom|gen|part|part_pl}}` call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StemSet {
    pub base: String,
    pub nom_sg: String,
    /// Singular vowel stem: base + genitive ending without its final `n`.
    pub sg_stem: String,
    pub nom_pl: String,
    pub part_pl: String,
    /// Plural stem: base + partitive plural ending without its final `d`.
    pub pl_stem: String,
}

/// Derives the Veps nominal stems from the five template parameters.
pub fn derive_stems<S: AsRef<str>>(params: &[S]) -> Result<StemSet, MorphologyError> {
    if params.len() != 5 {
        return Err(MorphologyError::Arity {
            template: "vep-decl-stems".into(),
            expected: 5,
            got: params.len(),
            detail: format!("parameters are: {}", ROLES.join(", ")),
        });
    }
    let p: Vec<&str> = params.iter().map(|s| s.as_ref().trim()).collect();
    if let Some(i) = p.iter().position(|s| s.is_empty()) {
        return Err(MorphologyError::EmptyParameter {
            position: i + 1,
            role: ROLES[i].into(),
        });
    }
    let strip = |position: usize, ch: char| -> Result<String, MorphologyError> {
        let value = p[position - 1];
        value
            .strip_suffix(ch)
            .map(|rest| format!("{}{rest}", p[0]))
            .ok_or_else(|| MorphologyError::StemDerivation {
                position,
                role: ROLES[position - 1].into(),
                value: value.to_string(),
                expected: ch,
            })
    };
    Ok(StemSet {
        base: p[0].to_string(),
        nom_sg: format!("{}{}", p[0], p[1]),
        sg_stem: strip(3, 'n')?,
        nom_pl: format!("{}{}", p[0], p[3]),
        part_pl: format!("{}{}", p[0], p[4]),
        pl_stem: strip(5, 'd')?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jogi_stems() {
        let s = derive_stems(&["jog", "i", "en", "ed", "id"]).unwrap();
        assert_eq!(s.base, "jog");
        assert_eq!(s.nom_sg, "jogi");
        assert_eq!(s.sg_stem, "joge");
        assert_eq!(s.nom_pl, "joged");
        assert_eq!(s.part_pl, "jogid");
        assert_eq!(s.pl_stem, "jogi");
    }

    #[test]
    fn construction_by_rule() {
        let s = derive_stems(&["x", "i", "en", "ed", "id"]).unwrap();
        assert_eq!((s.sg_stem.as_str(), s.pl_stem.as_str()), ("xe", "xi"));
    }

    #[test]
    fn errors_name_the_parameter() {
        assert!(matches!(
            derive_stems(&["jog", "i", "en", "ed"]),
            Err(MorphologyError::Arity { expected: 5, got: 4, .. })
        ));
        match derive_stems(&["jog", "i", "ea", "ed", "id"]) {
            Err(MorphologyError::StemDerivation { position: 3, expected: 'n', .. }) => {}
            other => panic!("{other:?}"),
        }
        match derive_stems(&["jog", "i", "en", "ed", "it"]) {
            Err(MorphologyError::StemDerivation { position: 5, expected: 'd', .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            derive_stems(&["jog", "", "en", "ed", "id"]),
            Err(MorphologyError::EmptyParameter { position: 2, .. })
        ));
    }
}
