//! Backward reasoning from the constraint root.
//!
//! A node presumed false needs every in-edge to be ineffective, so each
//! predecessor gets a required value and the resulting sub-models are merged
//! conjunctively. A node presumed true needs one effective in-edge, so the
//! alternatives are merged disjunctively. Branches end at nodes whose value
//! is already forced by the program alone (facts, atoms without rules, and
//! whatever follows from them), or when the branch runs into a node it is
//! already presuming, which closes a loop.
//!
//! Sub-models are kept as deltas over those forced values. Every merged
//! sub-model is extended by forward propagation and dropped on conflict.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::atom::{AtomId, Literal};
use crate::graph::{attach_query, CnrDepGraph, NodeId};
use crate::loops::{find_odd_loop, Cycle, LoopClass, LoopKind};
use crate::merge::{conjunctive_merge, disjunctive_merge};
use crate::model::{sort_models, PartialModel, TruthValue};
use crate::program::Program;
use crate::propagate::{body_status, forced_values_indexed, BodyStatus, Propagator};
use crate::validate::{validate_grounded, ValidationError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("odd loop through {rendered}")]
    OddLoop { cycle: Cycle, rendered: String },
    #[error("atom #{} is not in the program", .0 .0)]
    UnknownAtom(AtomId),
    #[error("program rejected: {}", render_errors(.0))]
    Invalid(Vec<ValidationError>),
}

fn render_errors(errors: &[ValidationError]) -> String {
    let parts: Vec<String> = errors.iter().map(|e| alloc::format!("{e}")).collect();
    parts.join("; ")
}

/// The branch being explored: values proved so far and the presumed nodes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolverState {
    /// Values forced by the program alone.
    pub facts: PartialModel,
    pub presumed_pos: BTreeSet<NodeId>,
    pub presumed_neg: BTreeSet<NodeId>,
    /// Presumed nodes from the outermost call inward.
    pub node_sequence: Vec<NodeId>,
}

const NO_LOOP: usize = usize::MAX;

struct Frame {
    node: NodeId,
    value: bool,
    via: Option<usize>,
    next: usize,
    pools: Vec<Vec<PartialModel>>,
    failed: bool,
    /// Shallowest stack position a loop inside this subtree closed on.
    low: usize,
}

enum Entry {
    Done(Vec<PartialModel>, usize),
    Pushed,
}

pub struct Solver<'g> {
    graph: &'g CnrDepGraph,
    state: SolverState,
    background: Vec<Option<bool>>,
    node_background: Vec<Option<bool>>,
    scratch: Vec<Option<bool>>,
    on_stack: Vec<Option<usize>>,
    frames: Vec<Frame>,
    memo: BTreeMap<(NodeId, bool), Vec<PartialModel>>,
}

impl<'g> Solver<'g> {
    pub fn new(graph: &'g CnrDepGraph) -> Self {
        let n = graph.atoms().len();
        let background = forced_values_indexed(graph.rules(), graph.rule_index(), n);
        let mut node_background = alloc::vec![None; graph.node_count()];
        node_background[..n].copy_from_slice(&background);
        let mut root_open = false;
        let mut root_true = false;
        for (ri, rule) in graph.rules().iter().enumerate() {
            let status = body_status(rule, |a| background[a.index()]);
            if let Some(conj) = graph.conjunction_of(ri) {
                // A conjunction node is true when its body is falsified.
                node_background[conj.index()] = match status {
                    BodyStatus::Satisfied => Some(false),
                    BodyStatus::Falsified => Some(true),
                    BodyStatus::Open => None,
                };
            }
            if rule.is_constraint() {
                match status {
                    BodyStatus::Satisfied => root_true = true,
                    BodyStatus::Open => root_open = true,
                    BodyStatus::Falsified => {}
                }
            }
        }
        node_background[graph.root().index()] = if root_true {
            Some(true)
        } else if root_open {
            None
        } else {
            Some(false)
        };
        let facts = background
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (AtomId(i as u32), v)))
            .collect();
        Solver {
            graph,
            state: SolverState { facts, ..SolverState::default() },
            scratch: background.clone(),
            background,
            node_background,
            on_stack: alloc::vec![None; graph.node_count()],
            frames: Vec::new(),
            memo: BTreeMap::new(),
        }
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    /// Values forced by the program alone, per atom.
    pub fn background(&self) -> &[Option<bool>] {
        &self.background
    }

    /// Sub-models, as deltas over [`SolverState::facts`], under which `node`
    /// carries `presumed`. Empty when the value cannot be supported.
    pub fn reasoning_rec(&mut self, node: NodeId, presumed: TruthValue) -> Result<Vec<PartialModel>, SolveError> {
        let value = presumed.as_bool();
        let mut result = match self.enter(node, value, None)? {
            Entry::Done(models, _) => return Ok(models),
            Entry::Pushed => Vec::new(),
        };
        while let Some(top) = self.frames.last_mut() {
            let preds = self.graph.pred_edges(top.node);
            if top.next < preds.len() && !top.failed {
                let ei = preds[top.next];
                top.next += 1;
                let e = self.graph.edge(ei);
                let required = top.value ^ e.sign.is_negative();
                if let Entry::Done(models, low) = self.enter(e.from, required, Some(ei))? {
                    self.absorb(models, low);
                }
                continue;
            }
            let frame = self.frames.pop().unwrap();
            self.leave(&frame);
            let depth = self.frames.len();
            let models = self.finish(&frame);
            if frame.low >= depth {
                self.memo.insert((frame.node, frame.value), models.clone());
            }
            let low = if frame.low >= depth { NO_LOOP } else { frame.low };
            if self.frames.is_empty() {
                result = models;
            } else {
                self.absorb(models, low);
            }
        }
        Ok(result)
    }

    fn enter(&mut self, node: NodeId, value: bool, via: Option<usize>) -> Result<Entry, SolveError> {
        if let Some(known) = self.node_background[node.index()] {
            let models = if known == value { alloc::vec![PartialModel::new()] } else { Vec::new() };
            return Ok(Entry::Done(models, NO_LOOP));
        }
        if let Some(pos) = self.on_stack[node.index()] {
            return self.close_loop(pos, value, via).map(|m| Entry::Done(m, pos));
        }
        if let Some(models) = self.memo.get(&(node, value)) {
            return Ok(Entry::Done(models.clone(), NO_LOOP));
        }
        let depth = self.frames.len();
        self.on_stack[node.index()] = Some(depth);
        self.state.node_sequence.push(node);
        if value {
            self.state.presumed_pos.insert(node);
        } else {
            self.state.presumed_neg.insert(node);
        }
        self.frames.push(Frame { node, value, via, next: 0, pools: Vec::new(), failed: false, low: NO_LOOP });
        Ok(Entry::Pushed)
    }

    fn leave(&mut self, frame: &Frame) {
        self.on_stack[frame.node.index()] = None;
        self.state.node_sequence.pop();
        if frame.value {
            self.state.presumed_pos.remove(&frame.node);
        } else {
            self.state.presumed_neg.remove(&frame.node);
        }
    }

    fn close_loop(&self, pos: usize, value: bool, via: Option<usize>) -> Result<Vec<PartialModel>, SolveError> {
        // Edges run from the deeper frame to the shallower one, so the walk
        // starts at the revisited node and climbs back to it.
        let mut edges = Vec::new();
        edges.extend(via.map(|e| *self.graph.edge(e)));
        for f in self.frames[pos + 1..].iter().rev() {
            edges.extend(f.via.map(|e| *self.graph.edge(e)));
        }
        let class = LoopClass::of(Cycle { edges });
        if class.kind == LoopKind::Odd || self.frames[pos].value != value {
            let rendered = render_cycle(self.graph, &class.cycle);
            return Err(SolveError::OddLoop { cycle: class.cycle, rendered });
        }
        Ok(match (class.kind, value) {
            (LoopKind::Positive, true) => Vec::new(),
            _ => alloc::vec![PartialModel::new()],
        })
    }

    fn absorb(&mut self, models: Vec<PartialModel>, low: usize) {
        let top = self.frames.last_mut().unwrap();
        top.low = top.low.min(low);
        if top.value {
            match top.pools.first_mut() {
                Some(pool) => pool.extend(models),
                None => top.pools.push(models),
            }
        } else if models.is_empty() {
            top.failed = true;
        } else {
            top.pools.push(models);
        }
    }

    fn finish(&mut self, frame: &Frame) -> Vec<PartialModel> {
        let merged = if frame.value {
            frame.pools.first().map(|p| disjunctive_merge(p)).unwrap_or_default()
        } else if frame.failed {
            Vec::new()
        } else {
            conjunctive_merge(&frame.pools)
        };
        let atom = self.graph.node_atom(frame.node);
        let mut out = BTreeSet::new();
        for mut m in merged {
            if let Some(a) = atom {
                if m.assign(a, frame.value).is_err() {
                    continue;
                }
            }
            if let Some(extended) = self.propagate(&m) {
                out.insert(extended);
            }
        }
        out.into_iter().collect()
    }

    /// Closes `delta` under forward propagation over the background values.
    /// Returns the delta with every newly forced value, or `None` on conflict.
    fn propagate(&mut self, delta: &PartialModel) -> Option<PartialModel> {
        let mut trail: Vec<AtomId> = Vec::new();
        let mut seeds = Vec::new();
        let mut ok = true;
        for (a, v) in delta.iter() {
            match self.scratch[a.index()] {
                Some(w) if w != v => {
                    ok = false;
                    break;
                }
                Some(_) => {}
                None => {
                    self.scratch[a.index()] = Some(v);
                    trail.push(a);
                    seeds.push(a);
                }
            }
        }
        if ok {
            let prop = Propagator::new(self.graph.rules(), self.graph.rule_index(), true);
            ok = prop.run_from(&mut self.scratch, &mut trail, &seeds).is_ok();
        }
        let result = ok.then(|| trail.iter().map(|&a| (a, self.scratch[a.index()].unwrap())).collect());
        for a in trail {
            self.scratch[a.index()] = None;
        }
        result
    }
}

fn render_cycle(g: &CnrDepGraph, cycle: &Cycle) -> String {
    let mut names: Vec<String> = cycle.nodes().into_iter().map(|n| g.node_name(n)).collect();
    if let Some(first) = names.first().cloned() {
        names.push(first);
    }
    names.join(" -> ")
}

/// One-off [`Solver::reasoning_rec`] on a fresh solver.
pub fn reasoning_rec(graph: &CnrDepGraph, node: NodeId, presumed: TruthValue) -> Result<Vec<PartialModel>, SolveError> {
    Solver::new(graph).reasoning_rec(node, presumed)
}

/// Partial models of `program` that satisfy every constraint and `query`.
///
/// Each model holds the values forced by the program together with those
/// the proof needed, restricted to the part of the graph connected to the
/// constraints and the query. Models come sorted by their true atom names,
/// then their false atom names.
pub fn solve(program: &Program, query: &[Literal]) -> Result<Vec<PartialModel>, SolveError> {
    validate_grounded(program).map_err(SolveError::Invalid)?;
    let base = CnrDepGraph::from_program(program);
    let graph = attach_query(&base, query).map_err(|e| SolveError::UnknownAtom(e.0))?;
    solve_graph(&graph)
}

/// [`solve`] on a graph that already carries its query constraints.
pub fn solve_graph(graph: &CnrDepGraph) -> Result<Vec<PartialModel>, SolveError> {
    if let Some(cycle) = find_odd_loop(graph) {
        let rendered = render_cycle(graph, &cycle);
        return Err(SolveError::OddLoop { cycle, rendered });
    }
    let mut solver = Solver::new(graph);
    let deltas = solver.reasoning_rec(graph.root(), TruthValue::False)?;
    let reach = graph.component(graph.root());
    let mut models: Vec<PartialModel> = deltas
        .into_iter()
        .map(|delta| {
            let mut full: PartialModel = solver
                .background()
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|v| (AtomId(i as u32), v)))
                .chain(delta.iter())
                .collect();
            full.retain(|a| reach[a.index()]);
            full
        })
        .collect();
    sort_models(&mut models, graph.atoms());
    Ok(models)
}
