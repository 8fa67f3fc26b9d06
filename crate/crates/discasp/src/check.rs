//! Checking solver answers against brute-force stable-model enumeration.

use discasp_core::{enumerate_stable_models, solve, Literal, OracleError, PartialModel, Program, SolveError};

use crate::gen::{GenParams, ProgramGen};

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOutcome {
    pub models: usize,
    /// Answers that no stable model extends, or that miss the query.
    pub unsound: Vec<PartialModel>,
}

/// Solves `p` for `query` and compares every answer with the oracle.
pub fn check_program(p: &Program, query: &[Literal]) -> Result<CheckOutcome, CheckError> {
    let models = solve(p, query)?;
    let stable = enumerate_stable_models(p)?;
    let unsound = models
        .iter()
        .filter(|m| {
            let honours = query.iter().all(|l| m.value(l.atom) == Some(!l.negated));
            !honours || !stable.iter().any(|s| s.extends(m))
        })
        .cloned()
        .collect();
    Ok(CheckOutcome { models: models.len(), unsound })
}

#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub programs: usize,
    pub models: usize,
    /// Programs whose query had no answer.
    pub empty: usize,
    /// Programs rejected by the solver, such as those with odd loops.
    pub rejected: usize,
    /// Source text of each program with an unsound answer.
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `count` generated programs, each with its generated query.
pub fn check_random(count: usize, seed: u64, params: GenParams) -> CheckReport {
    let mut gen = ProgramGen::new(seed, params);
    let mut report = CheckReport::default();
    for _ in 0..count {
        let (p, q) = gen.next_program();
        report.programs += 1;
        match check_program(&p, &[Literal::pos(q)]) {
            Ok(o) => {
                report.models += o.models;
                if o.models == 0 {
                    report.empty += 1;
                }
                if !o.unsound.is_empty() {
                    report.failures.push(format!("{p}?- {}.\n", p.atoms().name(q)));
                }
            }
            Err(_) => report.rejected += 1,
        }
    }
    report
}
