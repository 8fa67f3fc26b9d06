//! Forward propagation: extend an assignment with every value forced by the
//! rules until nothing changes.
//!
//! An atom becomes true when one of its rule bodies is fully satisfied and
//! false when every rule defining it has a falsified body (atoms with no
//! defining rule are therefore false). A satisfied constraint body, or an
//! atom forced to both values, is a [`Conflict`].

use alloc::vec::Vec;
use core::fmt;

use crate::atom::AtomId;
use crate::graph::CnrDepGraph;
use crate::model::PartialModel;
use crate::program::Rule;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conflict {
    /// The atom was forced to the value opposite to the one it holds.
    Atom(AtomId),
    /// The body of this constraint rule became satisfied.
    Constraint(usize),
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::Atom(a) => write!(f, "atom #{} forced to both values", a.0),
            Conflict::Constraint(r) => write!(f, "constraint rule #{r} violated"),
        }
    }
}

impl core::error::Error for Conflict {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum BodyStatus {
    Satisfied,
    Falsified,
    Open,
}

pub(crate) fn body_status(rule: &Rule, value: impl Fn(AtomId) -> Option<bool>) -> BodyStatus {
    let mut open = false;
    for lit in &rule.body {
        match value(lit.atom) {
            Some(v) if v == lit.negated => return BodyStatus::Falsified,
            Some(_) => {}
            None => open = true,
        }
    }
    if open {
        BodyStatus::Open
    } else {
        BodyStatus::Satisfied
    }
}

/// Which rules mention each atom, in body and in head position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleIndex {
    pub(crate) in_body: Vec<Vec<usize>>,
    pub(crate) defining: Vec<Vec<usize>>,
    pub(crate) constraints: Vec<usize>,
}

impl RuleIndex {
    pub fn build(rules: &[Rule], atom_count: usize) -> Self {
        let mut idx = RuleIndex {
            in_body: alloc::vec![Vec::new(); atom_count],
            defining: alloc::vec![Vec::new(); atom_count],
            constraints: Vec::new(),
        };
        for (i, r) in rules.iter().enumerate() {
            match r.head {
                Some(h) => idx.defining[h.index()].push(i),
                None => idx.constraints.push(i),
            }
            for lit in &r.body {
                let occ = &mut idx.in_body[lit.atom.index()];
                if occ.last() != Some(&i) {
                    occ.push(i);
                }
            }
        }
        idx
    }

    pub fn defining(&self, atom: AtomId) -> &[usize] {
        &self.defining[atom.index()]
    }

    pub fn occurrences(&self, atom: AtomId) -> &[usize] {
        &self.in_body[atom.index()]
    }

    pub fn constraints(&self) -> &[usize] {
        &self.constraints
    }
}

/// Propagation engine over a value vector, recording every atom it assigns.
pub(crate) struct Propagator<'a> {
    rules: &'a [Rule],
    index: &'a RuleIndex,
    check_constraints: bool,
}

impl<'a> Propagator<'a> {
    pub(crate) fn new(rules: &'a [Rule], index: &'a RuleIndex, check_constraints: bool) -> Self {
        Propagator { rules, index, check_constraints }
    }

    /// Global fixpoint from scratch over `values`: every rule and every atom
    /// is examined once before the work queue takes over.
    pub(crate) fn run_full(&self, values: &mut [Option<bool>], trail: &mut Vec<AtomId>) -> Result<(), Conflict> {
        let mut queue: Vec<AtomId> = Vec::new();
        for (i, rule) in self.rules.iter().enumerate() {
            self.examine_rule(i, rule, values, trail, &mut queue)?;
        }
        for a in 0..values.len() {
            let atom = AtomId(a as u32);
            self.check_head(atom, values, trail, &mut queue)?;
            if values[a].is_some() {
                self.check_assigned(atom, values)?;
            }
        }
        self.drain(values, trail, queue)
    }

    /// Incremental fixpoint: `seeds` were just assigned on top of a `values`
    /// vector that was already closed under propagation.
    pub(crate) fn run_from(
        &self,
        values: &mut [Option<bool>],
        trail: &mut Vec<AtomId>,
        seeds: &[AtomId],
    ) -> Result<(), Conflict> {
        for &a in seeds {
            self.check_assigned(a, values)?;
        }
        self.drain(values, trail, seeds.to_vec())
    }

    fn drain(&self, values: &mut [Option<bool>], trail: &mut Vec<AtomId>, mut queue: Vec<AtomId>) -> Result<(), Conflict> {
        while let Some(atom) = queue.pop() {
            for &ri in self.index.occurrences(atom) {
                self.examine_rule(ri, &self.rules[ri], values, trail, &mut queue)?;
            }
        }
        Ok(())
    }

    fn examine_rule(
        &self,
        ri: usize,
        rule: &Rule,
        values: &mut [Option<bool>],
        trail: &mut Vec<AtomId>,
        queue: &mut Vec<AtomId>,
    ) -> Result<(), Conflict> {
        match body_status(rule, |a| values[a.index()]) {
            BodyStatus::Satisfied => match rule.head {
                Some(h) => set(h, true, values, trail, queue),
                None if self.check_constraints => Err(Conflict::Constraint(ri)),
                None => Ok(()),
            },
            BodyStatus::Falsified => match rule.head {
                Some(h) => self.check_head(h, values, trail, queue),
                None => Ok(()),
            },
            BodyStatus::Open => Ok(()),
        }
    }

    /// Falsifies `atom` once every defining rule body is falsified.
    fn check_head(
        &self,
        atom: AtomId,
        values: &mut [Option<bool>],
        trail: &mut Vec<AtomId>,
        queue: &mut Vec<AtomId>,
    ) -> Result<(), Conflict> {
        if values[atom.index()] == Some(false) {
            return Ok(());
        }
        let all_false = self
            .index
            .defining(atom)
            .iter()
            .all(|&ri| body_status(&self.rules[ri], |a| values[a.index()]) == BodyStatus::Falsified);
        if all_false {
            set(atom, false, values, trail, queue)
        } else {
            Ok(())
        }
    }

    /// An externally assigned atom must not contradict its own rules.
    fn check_assigned(&self, atom: AtomId, values: &[Option<bool>]) -> Result<(), Conflict> {
        let status = |ri: &usize| body_status(&self.rules[*ri], |a| values[a.index()]);
        match values[atom.index()] {
            Some(false) if self.index.defining(atom).iter().any(|ri| status(ri) == BodyStatus::Satisfied) => {
                Err(Conflict::Atom(atom))
            }
            Some(true) if self.index.defining(atom).iter().all(|ri| status(ri) == BodyStatus::Falsified) => {
                Err(Conflict::Atom(atom))
            }
            _ => Ok(()),
        }
    }
}

fn set(
    atom: AtomId,
    value: bool,
    values: &mut [Option<bool>],
    trail: &mut Vec<AtomId>,
    queue: &mut Vec<AtomId>,
) -> Result<(), Conflict> {
    match values[atom.index()] {
        Some(v) if v == value => Ok(()),
        Some(_) => Err(Conflict::Atom(atom)),
        None => {
            values[atom.index()] = Some(value);
            trail.push(atom);
            queue.push(atom);
            Ok(())
        }
    }
}

/// Values forced by the rules alone, ignoring constraints.
pub(crate) fn forced_values(rules: &[Rule], atom_count: usize) -> Vec<Option<bool>> {
    let index = RuleIndex::build(rules, atom_count);
    forced_values_indexed(rules, &index, atom_count)
}

pub(crate) fn forced_values_indexed(rules: &[Rule], index: &RuleIndex, atom_count: usize) -> Vec<Option<bool>> {
    let mut values = alloc::vec![None; atom_count];
    let mut trail = Vec::new();
    // Without constraints and starting from nothing, propagation cannot conflict.
    let _ = Propagator::new(rules, index, false).run_full(&mut values, &mut trail);
    values
}

/// Least fixpoint of forward propagation starting from `facts`, over every
/// rule of `graph` (program rules, constraints and attached query
/// constraints).
pub fn forward_propagate(graph: &CnrDepGraph, facts: &PartialModel) -> Result<PartialModel, Conflict> {
    let mut values = alloc::vec![None; graph.atoms().len()];
    for (a, v) in facts.iter() {
        values[a.index()] = Some(v);
    }
    let mut trail = Vec::new();
    Propagator::new(graph.rules(), graph.rule_index(), true).run_full(&mut values, &mut trail)?;
    Ok(values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|v| (AtomId(i as u32), v)))
        .collect())
}
