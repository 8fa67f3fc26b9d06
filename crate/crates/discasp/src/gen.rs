//! Seeded random grounded programs, for soundness checks and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use discasp_core::{find_odd_loop, AtomId, CnrDepGraph, Literal, Program, Rule};

pub const SEED_ENV: &str = "DISCASP_SEED";
pub const DEFAULT_SEED: u64 = 0x5eed_da5c;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub max_atoms: u32,
    pub max_rules: usize,
    pub max_body: usize,
    /// Chance that a body literal is negated.
    pub negation: f64,
    /// Chance that a rule is a constraint.
    pub constraint: f64,
    /// Discard programs that contain an odd loop.
    pub odd_loop_free: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams { max_atoms: 12, max_rules: 20, max_body: 3, negation: 0.4, constraint: 0.1, odd_loop_free: true }
    }
}

/// Seed from `DISCASP_SEED` if set and numeric, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV).ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

pub struct ProgramGen {
    rng: ChaCha8Rng,
    params: GenParams,
}

impl ProgramGen {
    pub fn new(seed: u64, params: GenParams) -> Self {
        ProgramGen { rng: ChaCha8Rng::seed_from_u64(seed), params }
    }

    /// A program over atoms `a0..`, plus one positive query atom.
    pub fn next_program(&mut self) -> (Program, AtomId) {
        loop {
            let p = self.candidate();
            if self.params.odd_loop_free && find_odd_loop(&CnrDepGraph::from_program(&p)).is_some() {
                continue;
            }
            let q = AtomId(self.rng.random_range(0..p.atoms().len() as u32));
            return (p, q);
        }
    }

    fn candidate(&mut self) -> Program {
        let GenParams { max_atoms, max_rules, max_body, negation, constraint, .. } = self.params;
        let n = self.rng.random_range(2..=max_atoms);
        let mut p = Program::new();
        for i in 0..n {
            p.intern(&format!("a{i}"));
        }
        let rules = self.rng.random_range(1..=max_rules);
        for _ in 0..rules {
            let body_len = self.rng.random_range(0..=max_body);
            let body: Vec<Literal> = (0..body_len)
                .map(|_| Literal { atom: AtomId(self.rng.random_range(0..n)), negated: self.rng.random_bool(negation) })
                .collect();
            let is_constraint = !body.is_empty() && self.rng.random_bool(constraint);
            let head = (!is_constraint).then(|| AtomId(self.rng.random_range(0..n)));
            p.add_rule(Rule::new(head, body));
        }
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_programs() {
        let mut a = ProgramGen::new(7, GenParams::default());
        let mut b = ProgramGen::new(7, GenParams::default());
        for _ in 0..20 {
            let (pa, qa) = a.next_program();
            let (pb, qb) = b.next_program();
            assert_eq!(pa.to_string(), pb.to_string());
            assert_eq!(qa, qb);
            assert!(find_odd_loop(&CnrDepGraph::from_program(&pa)).is_none());
        }
    }
}
