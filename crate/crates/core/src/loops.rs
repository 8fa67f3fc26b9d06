//! Cycle classification and odd-loop detection.
//!
//! Parity is counted on default-negated body literals. Conjunction-node edges
//! are flipped twice on any path through the node, so this equals the parity
//! of negative dependency-graph edges, but it also tells positive loops apart
//! from loops whose negations cancel out inside a conjunction.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use crate::graph::{CnrDepGraph, NodeId, SignedEdge};
use crate::propagate::{body_status, forced_values_indexed, BodyStatus};

/// Closed walk given as its edges in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub edges: Vec<SignedEdge>,
}

impl Cycle {
    /// Builds the closed walk `nodes[0] -> nodes[1] -> ... -> nodes[0]`,
    /// choosing the first edge between each consecutive pair.
    pub fn from_nodes(g: &CnrDepGraph, nodes: &[NodeId]) -> Option<Cycle> {
        if nodes.is_empty() {
            return None;
        }
        let mut edges = Vec::with_capacity(nodes.len());
        for (i, &from) in nodes.iter().enumerate() {
            let to = nodes[(i + 1) % nodes.len()];
            let e = g.succ_edges(from).iter().map(|&e| g.edge(e)).find(|e| e.to == to)?;
            edges.push(*e);
        }
        Some(Cycle { edges })
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        self.edges.iter().map(|e| e.from).collect()
    }

    pub fn negations(&self) -> usize {
        self.edges.iter().filter(|e| e.negated_literal()).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LoopKind {
    Even,
    Positive,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopClass {
    pub kind: LoopKind,
    pub cycle: Cycle,
}

impl LoopClass {
    pub fn of(cycle: Cycle) -> Self {
        let n = cycle.negations();
        let kind = if n == 0 {
            LoopKind::Positive
        } else if n.is_multiple_of(2) {
            LoopKind::Even
        } else {
            LoopKind::Odd
        };
        LoopClass { kind, cycle }
    }
}

/// Classifies the closed walk through `nodes`; `None` if it is not a walk of `g`.
pub fn classify_loop(g: &CnrDepGraph, nodes: &[NodeId]) -> Option<LoopClass> {
    Cycle::from_nodes(g, nodes).map(LoopClass::of)
}

/// Edges whose rule body is not already falsified by the values every
/// answer set shares. Loops made only of such edges can matter; the others
/// can never fire.
pub(crate) fn live_edges(g: &CnrDepGraph) -> Vec<bool> {
    let forced = forced_values_indexed(g.rules(), g.rule_index(), g.atoms().len());
    let live_rule: Vec<bool> = g
        .rules()
        .iter()
        .map(|r| body_status(r, |a| forced[a.index()]) != BodyStatus::Falsified)
        .collect();
    g.edges().iter().map(|e| live_rule[e.rule]).collect()
}

/// A simple cycle with an odd number of negations among live edges, if any.
pub fn find_odd_loop(g: &CnrDepGraph) -> Option<Cycle> {
    let live = live_edges(g);
    let comp = strong_components(g, &live);
    let n = g.node_count();
    let mut parity: Vec<Option<bool>> = alloc::vec![None; n];
    let mut parent: Vec<Option<usize>> = alloc::vec![None; n];
    for start in 0..n {
        if parity[start].is_some() {
            continue;
        }
        parity[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &ei in g.succ_edges(NodeId(u as u32)) {
                let e = g.edge(ei);
                let w = e.to.index();
                if !live[ei] || comp[w] != comp[u] {
                    continue;
                }
                let pw = parity[u].unwrap() ^ e.negated_literal();
                match parity[w] {
                    None => {
                        parity[w] = Some(pw);
                        parent[w] = Some(ei);
                        queue.push_back(w);
                    }
                    Some(p) if p != pw => {
                        return Some(odd_cycle_through(g, &live, &comp, &parent, start, ei));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    None
}

/// Given a BFS tree rooted at `root` inside one strong component and an edge
/// `e` that breaks the parity labelling, returns a simple odd cycle.
fn odd_cycle_through(
    g: &CnrDepGraph,
    live: &[bool],
    comp: &[usize],
    parent: &[Option<usize>],
    root: usize,
    e: usize,
) -> Cycle {
    let tree_path = |target: usize| -> Vec<SignedEdge> {
        let mut path = Vec::new();
        let mut cur = target;
        while cur != root {
            let ei = parent[cur].unwrap();
            path.push(*g.edge(ei));
            cur = g.edge(ei).from.index();
        }
        path.reverse();
        path
    };
    let edge = *g.edge(e);
    let back = path_within(g, live, comp, edge.to.index(), root);
    let mut first = tree_path(edge.from.index());
    first.push(edge);
    first.extend(back.iter().copied());
    let mut second = tree_path(edge.to.index());
    second.extend(back);
    let odd = |w: &[SignedEdge]| w.iter().filter(|e| e.negated_literal()).count() % 2 == 1;
    let walk = if odd(&first) { first } else { second };
    Cycle { edges: simple_odd_subcycle(walk) }
}

/// Shortest path from `from` to `to` using live edges inside one component.
fn path_within(g: &CnrDepGraph, live: &[bool], comp: &[usize], from: usize, to: usize) -> Vec<SignedEdge> {
    let mut via: Vec<Option<usize>> = alloc::vec![None; g.node_count()];
    let mut seen = alloc::vec![false; g.node_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for &ei in g.succ_edges(NodeId(u as u32)) {
            let w = g.edge(ei).to.index();
            if live[ei] && comp[w] == comp[from] && !seen[w] {
                seen[w] = true;
                via[w] = Some(ei);
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let ei = via[cur].expect("nodes share a strong component");
        path.push(*g.edge(ei));
        cur = g.edge(ei).from.index();
    }
    path.reverse();
    path
}

/// Splits an odd closed walk at repeated nodes until a simple odd cycle remains.
fn simple_odd_subcycle(mut walk: Vec<SignedEdge>) -> Vec<SignedEdge> {
    loop {
        let mut split = None;
        'outer: for i in 0..walk.len() {
            for j in i + 1..walk.len() {
                if walk[i].from == walk[j].from {
                    split = Some((i, j));
                    break 'outer;
                }
            }
        }
        let Some((i, j)) = split else { return walk };
        let inner: Vec<SignedEdge> = walk[i..j].to_vec();
        let inner_odd = inner.iter().filter(|e| e.negated_literal()).count() % 2 == 1;
        if inner_odd {
            walk = inner;
        } else {
            walk.drain(i..j);
        }
    }
}

/// Strong component label per node, restricted to `live` edges.
fn strong_components(g: &CnrDepGraph, live: &[bool]) -> Vec<usize> {
    let n = g.node_count();
    // Kosaraju: finishing order on the graph, then sweep the transpose.
    let mut order = Vec::with_capacity(n);
    let mut visited = alloc::vec![false; n];
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = alloc::vec![(s, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            let succ = g.succ_edges(NodeId(u as u32));
            if *next < succ.len() {
                let ei = succ[*next];
                *next += 1;
                let w = g.edge(ei).to.index();
                if live[ei] && !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(u);
                stack.pop();
            }
        }
    }
    let mut comp = alloc::vec![usize::MAX; n];
    let mut label = 0;
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = label;
        let mut stack = alloc::vec![s];
        while let Some(u) = stack.pop() {
            for &ei in g.pred_edges(NodeId(u as u32)) {
                let w = g.edge(ei).from.index();
                if live[ei] && comp[w] == usize::MAX {
                    comp[w] = label;
                    stack.push(w);
                }
            }
        }
        label += 1;
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_program;

    fn graph(src: &str) -> CnrDepGraph {
        CnrDepGraph::from_program(&parse_program(src).unwrap())
    }

    fn nodes(g: &CnrDepGraph, names: &[&str]) -> Vec<NodeId> {
        names.iter().map(|n| g.atom_node(g.atoms().lookup(n).unwrap())).collect()
    }

    #[test]
    fn taxonomy() {
        let g = graph("p :- not q. q :- not p.");
        assert_eq!(classify_loop(&g, &nodes(&g, &["p", "q"])).unwrap().kind, LoopKind::Even);
        let g = graph("p :- q. q :- p.");
        assert_eq!(classify_loop(&g, &nodes(&g, &["p", "q"])).unwrap().kind, LoopKind::Positive);
        let g = graph("p :- not q. q :- not r. r :- not p.");
        assert_eq!(classify_loop(&g, &nodes(&g, &["p", "r", "q"])).unwrap().kind, LoopKind::Odd);
        assert!(classify_loop(&g, &nodes(&g, &["p", "q", "r"])).is_none());
    }

    #[test]
    fn conjunction_negations_cancel() {
        // p feeds its own conjunction positively: two flipped edges, no negation.
        let g = graph("p :- p, q. q :- not r. r :- not q.");
        let conj = g.conjunction_of(0).unwrap();
        let mut cyc = nodes(&g, &["p"]);
        cyc.push(conj);
        let class = classify_loop(&g, &cyc).unwrap();
        assert_eq!(class.kind, LoopKind::Positive);
        assert_eq!(find_odd_loop(&g), None);
    }

    #[test]
    fn finds_odd_loops() {
        let g = graph("p :- not q. q :- not r. r :- not p.");
        let c = find_odd_loop(&g).unwrap();
        assert_eq!(c.edges.len(), 3);
        assert_eq!(LoopClass::of(c).kind, LoopKind::Odd);
        let g = graph("p :- not q, not r, not p.");
        let c = find_odd_loop(&g).unwrap();
        assert_eq!(c.negations() % 2, 1);
        assert!(find_odd_loop(&graph("p :- not q. q :- not p. r :- p. r :- q.")).is_none());
    }

    #[test]
    fn dead_rules_do_not_count() {
        // q has no rule, so the self-negating rule can never fire.
        assert!(find_odd_loop(&graph("p :- q, not r, not p.")).is_none());
        assert!(find_odd_loop(&graph("p :- q, not p. p :- not r.")).is_none());
    }

    #[test]
    fn odd_walk_is_split_into_simple_cycle() {
        let g = graph("a :- not b. b :- not a. b :- c. c :- b. c :- not c, d. d :- not e. e :- not d.");
        let c = find_odd_loop(&g).unwrap();
        let ns = c.nodes();
        for (i, x) in ns.iter().enumerate() {
            assert!(!ns[i + 1..].contains(x));
        }
        assert_eq!(c.negations() % 2, 1);
    }
}
