//! Schematic (non-ground) rules as read from knowledge-base files.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Const(String),
    Var(String),
}

impl Term {
    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => f.write_str(c),
            Term::Var(v) => f.write_str(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NgAtom {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl NgAtom {
    pub fn new(predicate: impl Into<String>, args: Vec<Term>) -> Self {
        NgAtom { predicate: predicate.into(), args }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(|t| !t.is_var())
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v.as_str()),
            Term::Const(_) => None,
        })
    }

    /// Canonical flat rendering, e.g. `like_movie(john,titanic)`.
    pub fn canonical(&self) -> String {
        let mut s = self.predicate.clone();
        if !self.args.is_empty() {
            s.push('(');
            for (i, t) in self.args.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match t {
                    Term::Const(c) | Term::Var(c) => s.push_str(c),
                }
            }
            s.push(')');
        }
        s
    }
}

impl fmt::Display for NgAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NgLiteral {
    pub atom: NgAtom,
    pub negated: bool,
}

impl fmt::Display for NgLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonGroundRule {
    pub head: Option<NgAtom>,
    pub body: Vec<NgLiteral>,
}

impl NonGroundRule {
    pub fn new(head: Option<NgAtom>, body: Vec<NgLiteral>) -> Self {
        let mut deduped: Vec<NgLiteral> = Vec::with_capacity(body.len());
        for lit in body {
            if !deduped.contains(&lit) {
                deduped.push(lit);
            }
        }
        NonGroundRule { head, body: deduped }
    }

    pub fn is_ground(&self) -> bool {
        self.head.as_ref().is_none_or(NgAtom::is_ground) && self.body.iter().all(|l| l.atom.is_ground())
    }

    /// Variables in order of first occurrence (head first, then body).
    pub fn variables(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        let atoms = self.head.iter().chain(self.body.iter().map(|l| &l.atom));
        for atom in atoms {
            for v in atom.variables() {
                if !seen.iter().any(|s| s == v) {
                    seen.push(String::from(v));
                }
            }
        }
        seen
    }

    /// First variable that occurs in the head or a negated literal but in no
    /// positive body literal.
    pub fn unsafe_variable(&self) -> Option<String> {
        let bound: BTreeSet<&str> = self
            .body
            .iter()
            .filter(|l| !l.negated)
            .flat_map(|l| l.atom.variables())
            .collect();
        let needs = self
            .head
            .iter()
            .flat_map(|h| h.variables())
            .chain(self.body.iter().filter(|l| l.negated).flat_map(|l| l.atom.variables()));
        for v in needs {
            if !bound.contains(v) {
                return Some(String::from(v));
            }
        }
        None
    }
}

impl fmt::Display for NonGroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(h) = &self.head {
            write!(f, "{h}")?;
            if !self.body.is_empty() {
                f.write_str(" ")?;
            }
        }
        if !self.body.is_empty() {
            f.write_str(":- ")?;
            for (i, l) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}")?;
            }
        }
        f.write_str(".")
    }
}
