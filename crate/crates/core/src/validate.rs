//! Checks that a program is in the form the solver accepts.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atom::args_of;
use crate::program::{Program, Rule};
use crate::propagate::{body_status, forced_values, BodyStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ValidationCategory {
    /// An atom argument still looks like a variable.
    Variable,
    /// The head appears negated in its own body in a rule that can fire,
    /// which closes an odd loop on itself.
    SelfNegatingHead,
    /// A headless rule with nothing in its body.
    EmptyConstraint,
    /// A literal refers to an atom missing from the intern table.
    UnknownAtom,
}

impl fmt::Display for ValidationCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ValidationCategory::Variable => "variable",
            ValidationCategory::SelfNegatingHead => "self-negating-head",
            ValidationCategory::EmptyConstraint => "empty-constraint",
            ValidationCategory::UnknownAtom => "unknown-atom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationError {
    pub rule: usize,
    pub category: ValidationCategory,
    /// The offending rule in source syntax.
    pub rendered: String,
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule {}: {}: {}", self.rule + 1, self.category, self.rendered)
    }
}

impl core::error::Error for ValidationError {}

/// All violations, in rule order; empty means the program is accepted.
pub fn validate_grounded(p: &Program) -> Result<(), Vec<ValidationError>> {
    let n = p.atoms().len();
    let in_range = |r: &Rule| r.head.is_none_or(|h| h.index() < n) && r.body.iter().all(|l| l.atom.index() < n);
    let bad: Vec<usize> = (0..p.rules.len()).filter(|&i| !in_range(&p.rules[i])).collect();
    if !bad.is_empty() {
        let rendered = String::from("<rule with unknown atoms>");
        return Err(bad
            .into_iter()
            .map(|rule| ValidationError { rule, category: ValidationCategory::UnknownAtom, rendered: rendered.clone() })
            .collect());
    }
    let mut errors = Vec::new();
    let mut push = |rule: usize, category| {
        let rendered = alloc::format!("{}", p.rules[rule].display(p.atoms()));
        errors.push(ValidationError { rule, category, rendered });
    };
    let forced = forced_values(&p.rules, n);
    for (i, rule) in p.rules.iter().enumerate() {
        let atoms = rule.head.iter().copied().chain(rule.body.iter().map(|l| l.atom));
        if atoms.clone().any(|a| has_variable(p.atoms().name(a))) {
            push(i, ValidationCategory::Variable);
        }
        match rule.head {
            None if rule.body.is_empty() => push(i, ValidationCategory::EmptyConstraint),
            Some(h)
                if rule.negative_body().any(|a| a == h)
                    && body_status(rule, |a| forced[a.index()]) != BodyStatus::Falsified =>
            {
                push(i, ValidationCategory::SelfNegatingHead)
            }
            _ => {}
        }
    }
    if errors.is_empty() {
        Ok(())
    } else {
        Err(errors)
    }
}

fn has_variable(name: &str) -> bool {
    args_of(name).iter().any(|a| a.starts_with(|c: char| c.is_ascii_uppercase() || c == '_'))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atom::Literal;
    use crate::parse::parse_program;

    fn check(src: &str) -> Result<(), Vec<ValidationError>> {
        validate_grounded(&parse_program(src).unwrap())
    }

    #[test]
    fn paper_programs() {
        assert!(check("p :- q, not r, not p.").is_ok());
        assert!(check("p :- q, not p. p :- not r.").is_ok());
        let errs = check("p :- not q, not r, not p.").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].category, ValidationCategory::SelfNegatingHead);
        assert!(check(":- not q, not r.").is_ok());
    }

    #[test]
    fn structural_errors() {
        let mut p = Program::new();
        let a = p.intern("a");
        p.add_rule(Rule::constraint(Vec::new()));
        p.add_rule(Rule::new(Some(a), alloc::vec![Literal::pos(crate::atom::AtomId(7))]));
        let errs = validate_grounded(&p).unwrap_err();
        assert_eq!(errs[0].category, ValidationCategory::UnknownAtom);
        let mut p = Program::new();
        p.add_rule(Rule::constraint(Vec::new()));
        let v = p.intern("f(X)");
        p.add_rule(Rule::fact(v));
        let cats: Vec<_> = validate_grounded(&p).unwrap_err().into_iter().map(|e| e.category).collect();
        assert_eq!(cats, [ValidationCategory::EmptyConstraint, ValidationCategory::Variable]);
    }
}
