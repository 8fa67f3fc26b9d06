//! Brute-force stable models by the Gelfond-Lifschitz definition.
//!
//! Meant as a test oracle: every candidate interpretation is checked, so the
//! vocabulary is capped (20 atoms by default).

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::atom::{AtomId, Literal};
use crate::model::PartialModel;
use crate::program::{Program, Rule};

pub const DEFAULT_ATOM_BOUND: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("program has {atoms} atoms, more than the oracle bound of {bound}")]
    SizeLimit { atoms: usize, bound: usize },
}

/// Total interpretation: the listed atoms are true, all others false.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TotalModel {
    pub true_atoms: BTreeSet<AtomId>,
}

impl TotalModel {
    pub fn contains(&self, atom: AtomId) -> bool {
        self.true_atoms.contains(&atom)
    }

    /// Agrees with every assignment of `m`.
    pub fn extends(&self, m: &PartialModel) -> bool {
        m.iter().all(|(a, v)| self.contains(a) == v)
    }
}

impl FromIterator<AtomId> for TotalModel {
    fn from_iter<I: IntoIterator<Item = AtomId>>(iter: I) -> Self {
        TotalModel { true_atoms: iter.into_iter().collect() }
    }
}

/// Reduct of `p` with respect to `m`. Rules with a negated body atom in `m`
/// are dropped, the remaining negated literals are deleted, and constraints
/// are left out (they are checked against the candidate directly).
pub fn gl_reduct(p: &Program, m: &TotalModel) -> Program {
    let rules = p
        .rules
        .iter()
        .filter(|r| !r.is_constraint())
        .filter(|r| r.negative_body().all(|a| !m.contains(a)))
        .map(|r| Rule::new(r.head, r.body.iter().copied().filter(|l| !l.negated).collect()))
        .collect();
    Program::from_parts(p.atoms().clone(), rules, None)
}

/// Least fixpoint of the immediate-consequence operator. Negated literals
/// and constraints are ignored.
pub fn least_model(p: &Program) -> TotalModel {
    let mut truth = alloc::vec![false; p.atoms().len()];
    let mut changed = true;
    while changed {
        changed = false;
        for r in &p.rules {
            let Some(h) = r.head else { continue };
            if !truth[h.index()] && r.positive_body().all(|a| truth[a.index()]) {
                truth[h.index()] = true;
                changed = true;
            }
        }
    }
    p.atoms().ids().filter(|a| truth[a.index()]).collect()
}

struct Masked {
    head: Option<u32>,
    pos: u64,
    neg: u64,
}

fn mask(lits: impl Iterator<Item = Literal>, negated: bool) -> u64 {
    lits.filter(|l| l.negated == negated).fold(0, |m, l| m | (1u64 << l.atom.0))
}

/// Every stable model of `p`, in ascending order of their bitmask encoding.
pub fn enumerate_stable_models(p: &Program) -> Result<Vec<TotalModel>, OracleError> {
    enumerate_stable_models_bounded(p, DEFAULT_ATOM_BOUND)
}

pub fn enumerate_stable_models_bounded(p: &Program, bound: usize) -> Result<Vec<TotalModel>, OracleError> {
    let n = p.atoms().len();
    if n > bound.min(63) {
        return Err(OracleError::SizeLimit { atoms: n, bound });
    }
    let rules: Vec<Masked> = p
        .rules
        .iter()
        .map(|r| Masked {
            head: r.head.map(|h| h.0),
            pos: mask(r.body.iter().copied(), false),
            neg: mask(r.body.iter().copied(), true),
        })
        .collect();
    let mut out = Vec::new();
    for cand in 0u64..(1u64 << n) {
        let violated = rules.iter().any(|r| r.head.is_none() && r.pos & !cand == 0 && r.neg & cand == 0);
        if violated {
            continue;
        }
        let mut lm = 0u64;
        loop {
            let before = lm;
            for r in &rules {
                if let Some(h) = r.head {
                    if r.neg & cand == 0 && r.pos & !lm == 0 {
                        lm |= 1 << h;
                    }
                }
            }
            if lm == before {
                break;
            }
        }
        if lm == cand {
            out.push((0..n as u32).filter(|i| cand & (1 << i) != 0).map(AtomId).collect());
        }
    }
    Ok(out)
}

/// Whether some stable model of `p` agrees with every assignment in `m`.
pub fn is_subset_of_some_stable(p: &Program, m: &PartialModel) -> Result<bool, OracleError> {
    Ok(enumerate_stable_models(p)?.iter().any(|s| s.extends(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::parse::parse_program;

    fn names(p: &Program, models: &[TotalModel]) -> Vec<Vec<alloc::string::String>> {
        models
            .iter()
            .map(|m| {
                let mut v: Vec<_> = m.true_atoms.iter().map(|a| p.atoms().name(*a).into()).collect();
                v.sort();
                v
            })
            .collect()
    }

    #[test]
    fn reduct_definition() {
        let p = parse_program("p :- not q. q :- r.").unwrap();
        let q = p.atoms().lookup("q").unwrap();
        let r0 = gl_reduct(&p, &TotalModel::default());
        assert_eq!(r0.to_string(), "p.\nq :- r.\n");
        let r1 = gl_reduct(&p, &[q].into_iter().collect());
        assert_eq!(r1.to_string(), "q :- r.\n");
    }

    #[test]
    fn least_models() {
        let p = parse_program("s. t :- s.").unwrap();
        assert_eq!(least_model(&p).true_atoms.len(), 2);
        let p = parse_program("p :- q. q :- p.").unwrap();
        assert!(least_model(&p).true_atoms.is_empty());
        assert!(least_model(&Program::new()).true_atoms.is_empty());
    }

    #[test]
    fn loops() {
        let p = parse_program("p :- not q. q :- not p.").unwrap();
        assert_eq!(names(&p, &enumerate_stable_models(&p).unwrap()), [["p"], ["q"]]);
        let p = parse_program("p :- not q. q :- not r. r :- not p.").unwrap();
        assert!(enumerate_stable_models(&p).unwrap().is_empty());
    }

    #[test]
    fn subset_check() {
        let p = parse_program("q :- not p. :- p.").unwrap();
        let pa = p.atoms().lookup("p").unwrap();
        assert!(is_subset_of_some_stable(&p, &PartialModel::new()).unwrap());
        let m: PartialModel = [(pa, true)].into_iter().collect();
        assert!(!is_subset_of_some_stable(&p, &m).unwrap());
    }

    #[test]
    fn size_limit() {
        let mut p = Program::new();
        for i in 0..21 {
            let a = p.intern(&alloc::format!("a{i}"));
            p.add_rule(Rule::fact(a));
        }
        assert_eq!(enumerate_stable_models(&p), Err(OracleError::SizeLimit { atoms: 21, bound: 20 }));
    }
}
