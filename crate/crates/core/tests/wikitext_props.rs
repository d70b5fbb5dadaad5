use std::collections::BTreeMap;

use proptest::prelude::*;
use wikiparadigm_core::wikitext::{extract_templates, parse_invocation};

#[derive(Debug, Clone)]
struct Call {
    name: String,
    positional: Vec<String>,
    named: BTreeMap<String, String>,
}

impl Call {
    fn render(&self) -> String {
        let mut s = format!("{{{{{}", self.name);
        for p in &self.positional {
            s.push('|');
            s.push_str(p);
        }
        for (k, v) in &self.named {
            s.push_str(&format!("|{k}={v}"));
        }
        s.push_str("}}");
        s
    }
}

fn call() -> impl Strategy<Value = Call> {
    (
        "[a-z][a-z-]{0,12}",
        prop::collection::vec("[a-zäöšž]{1,8}", 0..8),
        prop::collection::btree_map("[a-z]{1,5}", "[a-zäöšž ]{0,6}[a-z]", 0..3),
    )
        .prop_map(|(name, positional, named)| Call {
            name,
            positional,
            named,
        })
}

fn filler() -> impl Strategy<Value = String> {
    "[a-zA-Z =\n\\[\\]'*#:]{0,30}"
}

proptest! {
    #[test]
    fn extraction_recovers_every_call(parts in prop::collection::vec((filler(), call()), 0..6), tail in filler()) {
        let mut page = String::new();
        for (text, c) in &parts {
            page.push_str(text);
            page.push_str(&c.render());
        }
        page.push_str(&tail);

        let ex = extract_templates(&page);
        prop_assert!(ex.warnings.is_empty());
        prop_assert_eq!(ex.invocations.len(), parts.len());
        for (inv, (_, c)) in ex.invocations.iter().zip(&parts) {
            prop_assert_eq!(&inv.name, &c.name);
            prop_assert_eq!(&inv.positional, &c.positional);
            let named: BTreeMap<String, String> =
                c.named.iter().map(|(k, v)| (k.clone(), v.trim().to_string())).collect();
            prop_assert_eq!(&inv.named, &named);
            prop_assert_eq!(&page[inv.span.clone()], c.render());
            let alone = parse_invocation(&page[inv.span.clone()]).unwrap().shifted(inv.span.start);
            prop_assert_eq!(&alone, inv);
        }
    }

    #[test]
    fn nested_templates_stay_inside_arguments(outer in call(), inner in call()) {
        let mut with_nested = outer.clone();
        with_nested.positional.push(inner.render());
        let page = with_nested.render();
        let ex = extract_templates(&page);
        prop_assert_eq!(ex.invocations.len(), 1);
        prop_assert_eq!(ex.invocations[0].positional.last().unwrap(), &inner.render());
    }

    #[test]
    fn comments_hide_templates(c in call(), hidden in call()) {
        let page = format!("<!-- {} -->{}", hidden.render(), c.render());
        let ex = extract_templates(&page);
        prop_assert_eq!(ex.invocations.len(), 1);
        prop_assert_eq!(&ex.invocations[0].name, &c.name);
    }
}
