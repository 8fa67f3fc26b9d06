//! A small bottom-up grounder for function-free schematic rules.
//!
//! First the set of possibly-true atoms is computed by treating every rule as
//! if its negated literals held. Then each rule is instantiated with every
//! substitution that makes its positive body possibly true.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::atom::{args_of, predicate_of, Literal};
use crate::nonground::{NgAtom, NonGroundRule, Term};
use crate::program::{Program, Rule};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroundError {
    #[error("rule {rule}: variable {variable} does not occur in a positive body literal: {rendered}")]
    SafetyViolation { rule: usize, variable: String, rendered: String },
}

type Tuple = Vec<u32>;

#[derive(Default)]
struct Constants {
    ids: BTreeMap<String, u32>,
    names: Vec<String>,
}

impl Constants {
    fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = self.names.len() as u32;
        self.ids.insert(String::from(name), id);
        self.names.push(String::from(name));
        id
    }
}

/// Tuples of one predicate and arity, indexed by (argument position, value).
#[derive(Default)]
struct Relation {
    tuples: Vec<Tuple>,
    seen: BTreeSet<Tuple>,
    index: BTreeMap<(usize, u32), Vec<usize>>,
}

impl Relation {
    fn insert(&mut self, t: Tuple) -> bool {
        if !self.seen.insert(t.clone()) {
            return false;
        }
        let i = self.tuples.len();
        for (pos, &v) in t.iter().enumerate() {
            self.index.entry((pos, v)).or_default().push(i);
        }
        self.tuples.push(t);
        true
    }
}

#[derive(Clone, Copy)]
enum Slot {
    Const(u32),
    Var(usize),
}

struct Pattern {
    relation: usize,
    slots: Vec<Slot>,
}

/// A rule with predicates resolved to relation indexes and variables to
/// binding slots, numbered in order of first occurrence.
struct Compiled {
    head: Option<Pattern>,
    positives: Vec<Pattern>,
    vars: usize,
}

struct Grounder {
    consts: Constants,
    relation_ids: BTreeMap<(String, usize), usize>,
    relations: Vec<Relation>,
}

impl Grounder {
    fn relation(&mut self, pred: &str, arity: usize) -> usize {
        let next = self.relations.len();
        let id = *self.relation_ids.entry((String::from(pred), arity)).or_insert(next);
        if id == next {
            self.relations.push(Relation::default());
        }
        id
    }

    fn pattern(&mut self, atom: &NgAtom, vars: &[String]) -> Pattern {
        let relation = self.relation(&atom.predicate, atom.args.len());
        let slots = atom
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => Slot::Const(self.consts.intern(c)),
                Term::Var(v) => Slot::Var(vars.iter().position(|x| x == v).expect("variable listed")),
            })
            .collect();
        Pattern { relation, slots }
    }

    fn compile(&mut self, r: &NonGroundRule) -> Compiled {
        let vars = r.variables();
        let head = r.head.as_ref().map(|h| self.pattern(h, &vars));
        let positives = r.body.iter().filter(|l| !l.negated).map(|l| self.pattern(&l.atom, &vars)).collect();
        Compiled { head, positives, vars: vars.len() }
    }

    /// Every binding under which each positive body pattern matches a known tuple.
    fn substitutions(&self, rule: &Compiled) -> Vec<Tuple> {
        let mut out = Vec::new();
        let mut done = alloc::vec![false; rule.positives.len()];
        let mut binding = alloc::vec![None; rule.vars];
        self.join(&rule.positives, &mut done, &mut binding, &mut out);
        out
    }

    fn join(&self, atoms: &[Pattern], done: &mut [bool], binding: &mut [Option<u32>], out: &mut Vec<Tuple>) {
        let value = |s: Slot, b: &[Option<u32>]| match s {
            Slot::Const(c) => Some(c),
            Slot::Var(v) => b[v],
        };
        // Next literal: most bound arguments, then fewest tuples, then position.
        let next = (0..atoms.len()).filter(|&i| !done[i]).min_by_key(|&i| {
            let a = &atoms[i];
            let bound = a.slots.iter().filter(|&&s| value(s, binding).is_some()).count();
            (usize::MAX - bound, self.relations[a.relation].tuples.len(), i)
        });
        let Some(i) = next else {
            out.push(binding.iter().map(|v| v.expect("safe rule binds every variable")).collect());
            return;
        };
        let atom = &atoms[i];
        let rel = &self.relations[atom.relation];
        let empty = Vec::new();
        let mut candidates: Option<&Vec<usize>> = None;
        for (pos, &s) in atom.slots.iter().enumerate() {
            if let Some(v) = value(s, binding) {
                let bucket = rel.index.get(&(pos, v)).unwrap_or(&empty);
                if candidates.is_none_or(|c| bucket.len() < c.len()) {
                    candidates = Some(bucket);
                }
            }
        }
        done[i] = true;
        let mut visit = |t: &Tuple, binding: &mut [Option<u32>]| {
            let mut newly = Vec::new();
            let mut ok = true;
            for (&s, &v) in atom.slots.iter().zip(t) {
                match s {
                    Slot::Const(c) => ok = c == v,
                    Slot::Var(x) => match binding[x] {
                        Some(b) => ok = b == v,
                        None => {
                            binding[x] = Some(v);
                            newly.push(x);
                        }
                    },
                }
                if !ok {
                    break;
                }
            }
            if ok {
                self.join(atoms, done, binding, out);
            }
            for x in newly {
                binding[x] = None;
            }
        };
        match candidates {
            Some(idx) => idx.iter().for_each(|&k| visit(&rel.tuples[k], binding)),
            None => rel.tuples.iter().for_each(|t| visit(t, binding)),
        }
        done[i] = false;
    }

    fn instantiate(&self, atom: &NgAtom, vars: &[String], b: &[u32]) -> String {
        if atom.args.is_empty() {
            return atom.predicate.clone();
        }
        let args: Vec<&str> = atom
            .args
            .iter()
            .map(|t| match t {
                Term::Const(c) => c.as_str(),
                Term::Var(v) => {
                    let k = vars.iter().position(|x| x == v).expect("variable listed");
                    self.consts.names[b[k] as usize].as_str()
                }
            })
            .collect();
        alloc::format!("{}({})", atom.predicate, args.join(","))
    }
}

/// Grounds `rules` against the atoms defined in `facts`.
///
/// The result starts with the rules of `facts`, followed by the instances of
/// each input rule in input order. Instances of one rule are ordered by the
/// values of its variables, taken in order of first occurrence.
pub fn ground(rules: &[NonGroundRule], facts: &Program) -> Result<Program, GroundError> {
    for (i, r) in rules.iter().enumerate() {
        if let Some(variable) = r.unsafe_variable() {
            return Err(GroundError::SafetyViolation { rule: i, variable, rendered: alloc::format!("{r}") });
        }
    }
    let mut g = Grounder { consts: Constants::default(), relation_ids: BTreeMap::new(), relations: Vec::new() };
    for r in &facts.rules {
        if let Some(h) = r.head {
            let name = facts.atoms().name(h);
            let args = args_of(name);
            let rel = g.relation(predicate_of(name), args.len());
            let t = args.iter().map(|a| g.consts.intern(a)).collect();
            g.relations[rel].insert(t);
        }
    }
    let compiled: Vec<Compiled> = rules.iter().map(|r| g.compile(r)).collect();
    loop {
        let mut changed = false;
        for c in &compiled {
            let Some(head) = &c.head else { continue };
            for b in g.substitutions(c) {
                let t = head
                    .slots
                    .iter()
                    .map(|&s| match s {
                        Slot::Const(k) => k,
                        Slot::Var(v) => b[v],
                    })
                    .collect();
                changed |= g.relations[head.relation].insert(t);
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = facts.clone();
    out.query = None;
    for (r, c) in rules.iter().zip(&compiled) {
        let vars = r.variables();
        let mut subs = g.substitutions(c);
        let names = &g.consts.names;
        subs.sort_by(|a, b| {
            a.iter().map(|&k| &names[k as usize]).cmp(b.iter().map(|&k| &names[k as usize]))
        });
        subs.dedup();
        for b in subs {
            let head = r.head.as_ref().map(|h| out.intern(&g.instantiate(h, &vars, &b)));
            let body = r
                .body
                .iter()
                .map(|l| {
                    let atom = out.intern(&g.instantiate(&l.atom, &vars, &b));
                    Literal { atom, negated: l.negated }
                })
                .collect();
            out.add_rule(Rule::new(head, body));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_nonground, parse_program};

    fn rendered(p: &Program) -> Vec<String> {
        p.rules.iter().map(|r| alloc::format!("{}", r.display(p.atoms()))).collect()
    }

    #[test]
    fn single_substitution() {
        let facts = parse_program("movie(titanic).").unwrap();
        let rules = parse_nonground("t(M) :- movie(M).").unwrap().rules;
        let g = ground(&rules, &facts).unwrap();
        assert_eq!(rendered(&g), ["movie(titanic).", "t(titanic) :- movie(titanic)."]);
    }

    #[test]
    fn unsafe_rule() {
        let rules = parse_nonground("p(X) :- not q(X).").unwrap().rules;
        let err = ground(&rules, &Program::new()).unwrap_err();
        assert!(matches!(err, GroundError::SafetyViolation { rule: 0, ref variable, .. } if variable == "X"));
    }

    #[test]
    fn joins_and_recursion() {
        let facts = parse_program("e(a,b). e(b,c). e(c,d).").unwrap();
        let rules = parse_nonground("r(X,Y) :- e(X,Y). r(X,Z) :- r(X,Y), e(Y,Z), not blocked(Z).").unwrap().rules;
        let g = ground(&rules, &facts).unwrap();
        let r = rendered(&g);
        assert_eq!(r.len(), 3 + 3 + 3);
        assert_eq!(r[6], "r(a,c) :- r(a,b), e(b,c), not blocked(c).");
        assert_eq!(r[8], "r(b,d) :- r(b,c), e(c,d), not blocked(d).");
    }

    #[test]
    fn substitutions_are_ordered() {
        let facts = parse_program("m(z). m(a). m(k).").unwrap();
        let rules = parse_nonground("t(M) :- m(M).").unwrap().rules;
        let g = ground(&rules, &facts).unwrap();
        assert_eq!(&rendered(&g)[3..], ["t(a) :- m(a).", "t(k) :- m(k).", "t(z) :- m(z)."]);
    }
}
