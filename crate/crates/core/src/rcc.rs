//! Relevant consistent concepts: the part of a partial model that lies
//! within a given distance of a topic atom, and the rule paths that connect
//! the topic to each of those atoms.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::atom::AtomId;
use crate::distance::{distances, rule_step_links, DistanceMetric};
use crate::graph::{attach_query, CnrDepGraph, Sign};
use crate::model::{PartialModel, TruthValue};
use crate::program::Program;
use crate::solver::{solve_graph, SolveError};
use crate::validate::validate_grounded;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Radius {
    Within(u32),
    Unbounded,
}

impl Radius {
    pub fn admits(self, distance: Option<u32>) -> bool {
        match self {
            Radius::Unbounded => true,
            Radius::Within(r) => distance.is_some_and(|d| d <= r),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RccMember {
    pub atom: AtomId,
    pub value: TruthValue,
    /// `None` only under an unbounded radius, for atoms the metric cannot reach.
    pub distance: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RccResult {
    pub topic: AtomId,
    pub radius: Radius,
    /// Sorted by distance, then atom name.
    pub members: Vec<RccMember>,
    /// The partial model the members were taken from.
    pub model: PartialModel,
}

impl RccResult {
    pub fn contains(&self, atom: AtomId) -> bool {
        self.members.iter().any(|m| m.atom == atom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RccError {
    #[error("atom #{} is not in the program", .0 .0)]
    UnknownAtom(AtomId),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("no partial model makes the topic true")]
    NoModel,
    #[error("atom #{} is not connected to the topic", .0 .0)]
    Unreachable(AtomId),
}

/// RCC of the first model of `solve(p, [topic])`, under [`DistanceMetric::RuleStep`].
pub fn compute_rcc(p: &Program, topic: AtomId, radius: Radius) -> Result<RccResult, RccError> {
    compute_rcc_with(p, topic, radius, DistanceMetric::RuleStep)
}

pub fn compute_rcc_with(p: &Program, topic: AtomId, radius: Radius, metric: DistanceMetric) -> Result<RccResult, RccError> {
    compute_rcc_per_model(p, topic, radius, metric)?.into_iter().next().ok_or(RccError::NoModel)
}

/// One RCC per model returned by the solver, in the solver's order.
pub fn compute_rcc_per_model(
    p: &Program,
    topic: AtomId,
    radius: Radius,
    metric: DistanceMetric,
) -> Result<Vec<RccResult>, RccError> {
    if topic.index() >= p.atoms().len() {
        return Err(RccError::UnknownAtom(topic));
    }
    validate_grounded(p).map_err(|e| RccError::Solve(SolveError::Invalid(e)))?;
    let base = CnrDepGraph::from_program(p);
    let graph = attach_query(&base, &[crate::atom::Literal::pos(topic)]).map_err(|e| RccError::UnknownAtom(e.0))?;
    let models = solve_graph(&graph)?;
    let dist = distances(&base, topic, metric);
    Ok(models.into_iter().map(|m| filter_model(&base, m, topic, radius, &dist)).collect())
}

/// Restricts `model` to atoms within `radius` of `topic`.
pub fn rcc_of_model(g: &CnrDepGraph, model: PartialModel, topic: AtomId, radius: Radius, metric: DistanceMetric) -> RccResult {
    let dist = distances(g, topic, metric);
    filter_model(g, model, topic, radius, &dist)
}

fn filter_model(g: &CnrDepGraph, model: PartialModel, topic: AtomId, radius: Radius, dist: &[Option<u32>]) -> RccResult {
    let mut members: Vec<RccMember> = model
        .iter()
        .filter(|&(a, _)| radius.admits(dist[a.index()]))
        .map(|(a, v)| RccMember { atom: a, value: TruthValue::from_bool(v), distance: dist[a.index()] })
        .collect();
    members.sort_by(|x, y| {
        let key = |m: &RccMember| (m.distance.is_none(), m.distance);
        key(x).cmp(&key(y)).then_with(|| g.atoms().name(x.atom).cmp(g.atoms().name(y.atom)))
    });
    RccResult { topic, radius, members, model }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathStep {
    pub rule: usize,
    pub from: AtomId,
    pub to: AtomId,
    /// Polarity of the body literal the step crosses.
    pub sign: Sign,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExplanationPath {
    pub steps: Vec<PathStep>,
}

impl ExplanationPath {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Atoms visited, starting at the topic.
    pub fn atoms(&self) -> Vec<AtomId> {
        let mut out: Vec<AtomId> = self.steps.first().map(|s| s.from).into_iter().collect();
        out.extend(self.steps.iter().map(|s| s.to));
        out
    }
}

/// A shortest rule-step path from `topic` to `target`. Neighbours are tried
/// in order of rule index, then atom id.
pub fn extract_path(g: &CnrDepGraph, topic: AtomId, target: AtomId) -> Result<ExplanationPath, RccError> {
    let n = g.atoms().len();
    if topic.index() >= n {
        return Err(RccError::UnknownAtom(topic));
    }
    if target.index() >= n {
        return Err(RccError::UnknownAtom(target));
    }
    let links = rule_step_links(g);
    let mut parent: Vec<Option<PathStep>> = alloc::vec![None; n];
    let mut seen = alloc::vec![false; n];
    seen[topic.index()] = true;
    let mut queue = VecDeque::from([topic]);
    while let Some(u) = queue.pop_front() {
        if u == target {
            break;
        }
        for &(rule, w, negated) in &links[u.index()] {
            if !seen[w.index()] {
                seen[w.index()] = true;
                let sign = if negated { Sign::Negative } else { Sign::Positive };
                parent[w.index()] = Some(PathStep { rule, from: u, to: w, sign });
                queue.push_back(w);
            }
        }
    }
    if !seen[target.index()] {
        return Err(RccError::Unreachable(target));
    }
    let mut steps = Vec::new();
    let mut cur = target;
    while let Some(step) = parent[cur.index()] {
        steps.push(step);
        cur = step.from;
    }
    steps.reverse();
    Ok(ExplanationPath { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    const PROGRAM6: &str = "p :- q, r. q :- s, not x. t :- s. j :- r. m :- t. k :- j. n :- p. o :- n.
        r :- not u, not v. w :- not v. a :- not b. b :- not a. s.";

    fn names(p: &Program, r: &RccResult) -> Vec<(alloc::string::String, bool, Option<u32>)> {
        r.members.iter().map(|m| (p.atoms().name(m.atom).into(), m.value.as_bool(), m.distance)).collect()
    }

    #[test]
    fn program_six_radius_two() {
        let p = parse_program(PROGRAM6).unwrap();
        let q = p.atoms().lookup("q").unwrap();
        let r = compute_rcc(&p, q, Radius::Within(2)).unwrap();
        let mut got: Vec<_> = names(&p, &r).into_iter().map(|(n, v, _)| (n, v)).collect();
        got.sort();
        let want = [("n", true), ("p", true), ("q", true), ("r", true), ("s", true), ("t", true), ("x", false)];
        assert_eq!(got, want.map(|(n, v)| (n.into(), v)));
    }

    #[test]
    fn radius_zero_and_unbounded() {
        let p = parse_program(PROGRAM6).unwrap();
        let q = p.atoms().lookup("q").unwrap();
        let r0 = compute_rcc(&p, q, Radius::Within(0)).unwrap();
        assert_eq!(names(&p, &r0), [("q".into(), true, Some(0))]);
        let all = compute_rcc(&p, q, Radius::Unbounded).unwrap();
        assert_eq!(all.members.len(), all.model.len());
    }

    #[test]
    fn paths() {
        let p = parse_program(PROGRAM6).unwrap();
        let g = CnrDepGraph::from_program(&p);
        let id = |n| p.atoms().lookup(n).unwrap();
        let path = extract_path(&g, id("q"), id("t")).unwrap();
        assert_eq!(path.steps.iter().map(|s| s.rule).collect::<Vec<_>>(), [1, 2]);
        assert_eq!(path.atoms(), [id("q"), id("s"), id("t")]);
        assert!(extract_path(&g, id("q"), id("q")).unwrap().is_empty());
        assert_eq!(extract_path(&g, id("q"), id("a")), Err(RccError::Unreachable(id("a"))));
        let neg = extract_path(&g, id("q"), id("x")).unwrap();
        assert_eq!(neg.steps[0].sign, Sign::Negative);
    }

    #[test]
    fn unsatisfiable_topic() {
        let p = parse_program("p :- not q. q :- not p. :- p.").unwrap();
        let pa = p.atoms().lookup("p").unwrap();
        assert_eq!(compute_rcc(&p, pa, Radius::Within(1)), Err(RccError::NoModel));
    }
}
