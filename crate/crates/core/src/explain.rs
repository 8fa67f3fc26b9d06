//! Turning explanation paths into English.
//!
//! Each step is rendered with a template picked from a [`PhraseTable`] by
//! the rule it crosses. For a rule with head predicate `h`, the keys tried
//! are `h/<last head argument>`, then `h+<body predicate>` for each body
//! literal in order, then `h`. Without a match the step falls back to
//! `{from} which relates to {to}`.
//!
//! Placeholders: `{from}` and `{to}` are the step's endpoints, `{head.N}` is
//! the N-th argument of the rule head (1-based) and `{pred.N}` the N-th
//! argument of the first body atom with predicate `pred`. Names are shown
//! with underscores as spaces and each word capitalised.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::atom::{args_of, predicate_of, AtomId, AtomTable};
use crate::graph::CnrDepGraph;
use crate::program::Rule;
use crate::rcc::{ExplanationPath, PathStep};

pub const FALLBACK_TEMPLATE: &str = "{from} which relates to {to}";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhraseTable {
    templates: BTreeMap<String, String>,
}

impl PhraseTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, key: impl Into<String>, template: impl Into<String>) {
        self.templates.insert(key.into(), template.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.templates.get(key).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    /// Reads `key = template` lines; blank lines and `#` comments are skipped.
    /// Returns the 1-based number of the first malformed line on error.
    pub fn parse(text: &str) -> Result<Self, usize> {
        let mut table = PhraseTable::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, template) = line.split_once('=').ok_or(i + 1)?;
            let key = key.trim();
            if key.is_empty() {
                return Err(i + 1);
            }
            table.insert(key, template.trim());
        }
        Ok(table)
    }

    fn template_for(&self, rule: &Rule, atoms: &AtomTable) -> &str {
        let Some(head) = rule.head else { return FALLBACK_TEMPLATE };
        let name = atoms.name(head);
        let pred = predicate_of(name);
        if let Some(last) = args_of(name).last() {
            if let Some(t) = self.get(&alloc::format!("{pred}/{last}")) {
                return t;
            }
        }
        for lit in &rule.body {
            let body_pred = atoms.predicate(lit.atom);
            if let Some(t) = self.get(&alloc::format!("{pred}+{body_pred}")) {
                return t;
            }
        }
        self.get(pred).unwrap_or(FALLBACK_TEMPLATE)
    }
}

/// `like_movie` becomes `Like Movie`.
pub fn prettify(name: &str) -> String {
    let mut out = String::with_capacity(name.len());
    let mut start = true;
    for c in name.chars() {
        if c == '_' {
            out.push(' ');
            start = true;
        } else if start {
            out.extend(c.to_uppercase());
            start = false;
        } else {
            out.push(c);
        }
    }
    out
}

/// Readable form of an atom: `like_movie(john,titanic)` becomes
/// `Like Movie (John, Titanic)`.
pub fn pretty_atom(atoms: &AtomTable, atom: AtomId) -> String {
    let name = atoms.name(atom);
    let args = args_of(name);
    if args.is_empty() {
        return prettify(name);
    }
    let args: Vec<String> = args.iter().map(|a| prettify(a)).collect();
    alloc::format!("{} ({})", prettify(predicate_of(name)), args.join(", "))
}

fn render_step(step: &PathStep, g: &CnrDepGraph, templates: &PhraseTable) -> String {
    let atoms = g.atoms();
    let rule = &g.rules()[step.rule];
    let template = templates.template_for(rule, atoms);
    let mut out = String::new();
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let Some(len) = rest[open..].find('}') else {
            out.push_str(&rest[open..]);
            rest = "";
            break;
        };
        let key = &rest[open + 1..open + len];
        match placeholder(key, step, rule, atoms) {
            Some(v) => out.push_str(&v),
            None => out.push_str(&rest[open..=open + len]),
        }
        rest = &rest[open + len + 1..];
    }
    out.push_str(rest);
    out
}

fn placeholder(key: &str, step: &PathStep, rule: &Rule, atoms: &AtomTable) -> Option<String> {
    match key {
        "from" => return Some(pretty_atom(atoms, step.from)),
        "to" => return Some(pretty_atom(atoms, step.to)),
        _ => {}
    }
    let (pred, n) = key.rsplit_once('.')?;
    let n: usize = n.parse().ok()?;
    let atom = if pred == "head" {
        rule.head?
    } else {
        rule.body.iter().map(|l| l.atom).find(|&a| atoms.predicate(a) == pred)?
    };
    let args = args_of(atoms.name(atom));
    args.get(n.checked_sub(1)?).map(|a| prettify(a))
}

/// One clause per step, joined into sentences. An empty path renders as an
/// empty string.
pub fn render_explanation(path: &ExplanationPath, g: &CnrDepGraph, templates: &PhraseTable) -> String {
    let clauses: Vec<String> = path.steps.iter().map(|s| render_step(s, g, templates)).collect();
    if clauses.is_empty() {
        return String::new();
    }
    let mut text = clauses.join(". ");
    if let Some(first) = text.get(..1) {
        let upper = first.to_uppercase();
        text.replace_range(..1, &upper);
    }
    text.push('.');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;
    use crate::rcc::extract_path;

    #[test]
    fn templates_and_fallback() {
        let p = parse_program(
            "like_movie(john,titanic).
             talk_preference(john,titanic,leo) :- like_movie(john,titanic), main_actor(leo,titanic).
             main_actor(leo,titanic).
             other(x) :- talk_preference(john,titanic,leo).",
        )
        .unwrap();
        let g = CnrDepGraph::from_program(&p);
        let mut t = PhraseTable::new();
        t.insert("talk_preference+main_actor", "{head.3} was the lead actor in {main_actor.2}");
        let id = |n| p.atoms().lookup(n).unwrap();
        let path = extract_path(&g, id("like_movie(john,titanic)"), id("other(x)")).unwrap();
        let text = render_explanation(&path, &g, &t);
        assert_eq!(
            text,
            "Leo was the lead actor in Titanic. Talk Preference (John, Titanic, Leo) which relates to Other (X)."
        );
        assert_eq!(render_explanation(&ExplanationPath::default(), &g, &t), "");
    }

    #[test]
    fn lookup_order() {
        let p = parse_program("a(k,v) :- b(k). c :- a(k,v).").unwrap();
        let g = CnrDepGraph::from_program(&p);
        let table = PhraseTable::parse("# phrases\na = generic {head.1}\na+b = via b\na/v = exact {b.1}\n").unwrap();
        let id = |n| p.atoms().lookup(n).unwrap();
        let path = extract_path(&g, id("b(k)"), id("a(k,v)")).unwrap();
        assert_eq!(render_explanation(&path, &g, &table), "Exact K.");
        assert_eq!(PhraseTable::parse("no equals sign"), Err(1));
        assert_eq!(prettify("leonardo_dicaprio"), "Leonardo Dicaprio");
    }
}
