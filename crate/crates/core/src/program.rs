//! Grounded propositional programs.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atom::{AtomId, AtomTable, Literal};
use crate::parse::{parse_literal_list, ParseError};

/// `head :- body.`; a missing head makes the rule a headless constraint and an
/// empty body makes it a fact.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Option<AtomId>,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn fact(head: AtomId) -> Self {
        Rule { head: Some(head), body: Vec::new() }
    }

    /// Builds a rule, dropping repeated body literals (first occurrence wins).
    pub fn new(head: Option<AtomId>, body: Vec<Literal>) -> Self {
        let mut deduped: Vec<Literal> = Vec::with_capacity(body.len());
        for lit in body {
            if !deduped.contains(&lit) {
                deduped.push(lit);
            }
        }
        Rule { head, body: deduped }
    }

    pub fn constraint(body: Vec<Literal>) -> Self {
        Rule::new(None, body)
    }

    pub fn is_fact(&self) -> bool {
        self.head.is_some() && self.body.is_empty()
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_none()
    }

    pub fn positive_body(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.body.iter().filter(|l| !l.negated).map(|l| l.atom)
    }

    pub fn negative_body(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.body.iter().filter(|l| l.negated).map(|l| l.atom)
    }

    pub fn display<'a>(&'a self, atoms: &'a AtomTable) -> RuleDisplay<'a> {
        RuleDisplay { rule: self, atoms }
    }
}

pub struct RuleDisplay<'a> {
    rule: &'a Rule,
    atoms: &'a AtomTable,
}

impl fmt::Display for RuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(h) = self.rule.head {
            f.write_str(self.atoms.name(h))?;
            if !self.rule.body.is_empty() {
                f.write_str(" ")?;
            }
        }
        if !self.rule.body.is_empty() {
            f.write_str(":- ")?;
            for (i, lit) in self.rule.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", lit.display(self.atoms))?;
            }
        }
        f.write_str(".")
    }
}

/// Rules over an intern table, plus an optional query.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    atoms: AtomTable,
    pub rules: Vec<Rule>,
    pub query: Option<Vec<Literal>>,
}

impl Program {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts(atoms: AtomTable, rules: Vec<Rule>, query: Option<Vec<Literal>>) -> Self {
        Program { atoms, rules, query }
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.atoms
    }

    pub fn atoms_mut(&mut self) -> &mut AtomTable {
        &mut self.atoms
    }

    pub fn intern(&mut self, name: &str) -> AtomId {
        self.atoms.intern(name)
    }

    pub fn add_rule(&mut self, rule: Rule) {
        self.rules.push(rule);
    }

    /// Whether `atom` is the head of some rule.
    pub fn defined(&self, atom: AtomId) -> bool {
        self.rules.iter().any(|r| r.head == Some(atom))
    }

    /// Per-atom flag: appears as the head of at least one rule.
    pub fn defined_atoms(&self) -> Vec<bool> {
        let mut out = alloc::vec![false; self.atoms.len()];
        for r in &self.rules {
            if let Some(h) = r.head {
                out[h.index()] = true;
            }
        }
        out
    }

    /// Parses a comma-separated literal list (`p, not q`) and resolves it
    /// against this program's vocabulary.
    pub fn parse_query(&self, text: &str) -> Result<Vec<Literal>, QueryError> {
        let mut scratch = self.atoms.clone();
        let lits = parse_literal_list(text, &mut scratch)?;
        for lit in &lits {
            if lit.atom.index() >= self.atoms.len() {
                return Err(QueryError::UnknownAtom(String::from(scratch.name(lit.atom))));
            }
        }
        Ok(lits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QueryError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown atom `{0}` in query")]
    UnknownAtom(String),
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{}", r.display(&self.atoms))?;
        }
        if let Some(q) = &self.query {
            f.write_str("?- ")?;
            for (i, lit) in q.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", lit.display(&self.atoms))?;
            }
            f.write_str(".\n")?;
        }
        Ok(())
    }
}
