//! Interned propositional atoms and literals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Dense handle of an interned atom.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

impl AtomId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Intern table mapping canonical atom names (`pred(a,b)`) to dense ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AtomTable {
    names: Vec<String>,
    index: BTreeMap<String, AtomId>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns the id of `name`, interning it if it is new.
    pub fn intern(&mut self, name: &str) -> AtomId {
        if let Some(&id) = self.index.get(name) {
            return id;
        }
        let id = AtomId(self.names.len() as u32);
        self.names.push(String::from(name));
        self.index.insert(String::from(name), id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn name(&self, id: AtomId) -> &str {
        &self.names[id.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> + '_ {
        (0..self.names.len() as u32).map(AtomId)
    }

    /// Predicate symbol of an atom: the part before the argument list.
    pub fn predicate(&self, id: AtomId) -> &str {
        predicate_of(self.name(id))
    }

    /// Constant arguments of an atom, in order.
    pub fn args(&self, id: AtomId) -> Vec<&str> {
        args_of(self.name(id))
    }
}

pub(crate) fn predicate_of(name: &str) -> &str {
    match name.find('(') {
        Some(i) => &name[..i],
        None => name,
    }
}

pub(crate) fn args_of(name: &str) -> Vec<&str> {
    match (name.find('('), name.rfind(')')) {
        (Some(open), Some(close)) if close > open + 1 => name[open + 1..close].split(',').collect(),
        _ => Vec::new(),
    }
}

/// An atom with a sign; `negated` means default negation (`not a`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub atom: AtomId,
    pub negated: bool,
}

impl Literal {
    pub fn pos(atom: AtomId) -> Self {
        Literal { atom, negated: false }
    }

    pub fn neg(atom: AtomId) -> Self {
        Literal { atom, negated: true }
    }

    pub fn complement(self) -> Self {
        Literal { atom: self.atom, negated: !self.negated }
    }

    pub fn display<'a>(&self, atoms: &'a AtomTable) -> LiteralDisplay<'a> {
        LiteralDisplay { lit: *self, atoms }
    }
}

pub struct LiteralDisplay<'a> {
    lit: Literal,
    atoms: &'a AtomTable,
}

impl fmt::Display for LiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lit.negated {
            f.write_str("not ")?;
        }
        f.write_str(self.atoms.name(self.lit.atom))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interning_is_injective() {
        let mut t = AtomTable::new();
        let a = t.intern("like_movie(john,titanic)");
        let b = t.intern("p");
        assert_ne!(a, b);
        assert_eq!(t.intern("p"), b);
        assert_eq!(t.len(), 2);
        assert_eq!(t.lookup("like_movie(john,titanic)"), Some(a));
        assert_eq!(t.predicate(a), "like_movie");
        assert_eq!(t.args(a), ["john", "titanic"]);
        assert!(t.args(b).is_empty());
    }
}
