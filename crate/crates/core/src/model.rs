use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atom::{AtomId, AtomTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TruthValue {
    True,
    False,
}

impl TruthValue {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn as_bool(self) -> bool {
        self == TruthValue::True
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "true",
            TruthValue::False => "false",
        })
    }
}

/// Partial truth assignment over atoms. Unassigned atoms are absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialModel {
    assignment: BTreeMap<AtomId, bool>,
}

impl PartialModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (AtomId, bool)>) -> Option<Self> {
        let mut m = PartialModel::new();
        for (a, v) in pairs {
            m.assign(a, v).ok()?;
        }
        Some(m)
    }

    pub fn get(&self, atom: AtomId) -> Option<TruthValue> {
        self.assignment.get(&atom).map(|&b| TruthValue::from_bool(b))
    }

    pub fn value(&self, atom: AtomId) -> Option<bool> {
        self.assignment.get(&atom).copied()
    }

    /// Assigns `atom`; fails without modifying the model if it already holds
    /// the opposite value.
    pub fn assign(&mut self, atom: AtomId, value: bool) -> Result<(), AtomId> {
        match self.assignment.get(&atom) {
            Some(&v) if v != value => Err(atom),
            Some(_) => Ok(()),
            None => {
                self.assignment.insert(atom, value);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, bool)> + '_ {
        self.assignment.iter().map(|(&a, &v)| (a, v))
    }

    pub fn true_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.iter().filter(|&(_, v)| v).map(|(a, _)| a)
    }

    pub fn false_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.iter().filter(|&(_, v)| !v).map(|(a, _)| a)
    }

    pub fn compatible(&self, other: &PartialModel) -> bool {
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        small.iter().all(|(a, v)| large.value(a).is_none_or(|w| w == v))
    }

    /// Union of two models, or `None` when they disagree on some atom.
    pub fn union(&self, other: &PartialModel) -> Option<PartialModel> {
        if !self.compatible(other) {
            return None;
        }
        let mut out = self.clone();
        for (a, v) in other.iter() {
            out.assignment.insert(a, v);
        }
        Some(out)
    }

    pub fn is_subset_of(&self, other: &PartialModel) -> bool {
        self.len() <= other.len() && self.iter().all(|(a, v)| other.value(a) == Some(v))
    }

    pub fn retain(&mut self, mut keep: impl FnMut(AtomId) -> bool) {
        self.assignment.retain(|&a, _| keep(a));
    }

    /// Deterministic output key: sorted positive names, then sorted negative names.
    pub fn sort_key(&self, atoms: &AtomTable) -> (Vec<String>, Vec<String>) {
        let mut pos: Vec<String> = self.true_atoms().map(|a| String::from(atoms.name(a))).collect();
        let mut neg: Vec<String> = self.false_atoms().map(|a| String::from(atoms.name(a))).collect();
        pos.sort();
        neg.sort();
        (pos, neg)
    }

    /// `p q not r` with positive atoms first, each group sorted by name.
    pub fn render(&self, atoms: &AtomTable) -> String {
        let (pos, neg) = self.sort_key(atoms);
        let mut parts: Vec<String> = pos;
        parts.extend(neg.into_iter().map(|n| alloc::format!("not {n}")));
        parts.join(" ")
    }
}

impl FromIterator<(AtomId, bool)> for PartialModel {
    /// Later pairs overwrite earlier ones.
    fn from_iter<I: IntoIterator<Item = (AtomId, bool)>>(iter: I) -> Self {
        PartialModel { assignment: iter.into_iter().collect() }
    }
}

/// Sorts models by [`PartialModel::sort_key`] and drops duplicates.
pub fn sort_models(models: &mut Vec<PartialModel>, atoms: &AtomTable) {
    let mut keyed: Vec<_> = models.drain(..).map(|m| (m.sort_key(atoms), m)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.1 == b.1);
    models.extend(keyed.into_iter().map(|(_, m)| m));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pairs: &[(u32, bool)]) -> PartialModel {
        PartialModel::from_pairs(pairs.iter().map(|&(a, v)| (AtomId(a), v))).unwrap()
    }

    #[test]
    fn assignment_is_single_valued() {
        let mut x = m(&[(0, true)]);
        assert_eq!(x.assign(AtomId(0), false), Err(AtomId(0)));
        assert_eq!(x.get(AtomId(0)), Some(TruthValue::True));
        assert!(PartialModel::from_pairs([(AtomId(1), true), (AtomId(1), false)]).is_none());
    }

    #[test]
    fn union_and_subset() {
        let a = m(&[(0, true), (1, false)]);
        let b = m(&[(2, true)]);
        let c = m(&[(0, false)]);
        assert_eq!(a.union(&b).unwrap().len(), 3);
        assert!(a.union(&c).is_none());
        assert!(a.is_subset_of(&a.union(&b).unwrap()));
        assert!(!b.is_subset_of(&a));
    }
}
