//! Graph distance between atoms.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec::Vec;

use crate::atom::AtomId;
use crate::graph::{CnrDepGraph, NodeKind};

/// How atoms are considered adjacent when measuring distance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DistanceMetric {
    /// Each rule links its head to each of its body atoms at cost 1.
    /// Conjunction nodes cost nothing, body atoms of the same rule are not
    /// linked to each other, and constraints link nothing.
    #[default]
    RuleStep,
    /// Every edge of the dependency graph costs 1, conjunction nodes
    /// included as intermediate hops; the constraint root is skipped.
    ConjunctionHop,
}

/// Shortest undirected distance from `topic` to every reachable atom.
pub fn atom_distance(g: &CnrDepGraph, topic: AtomId, metric: DistanceMetric) -> BTreeMap<AtomId, u32> {
    distances(g, topic, metric)
        .into_iter()
        .enumerate()
        .filter_map(|(i, d)| d.map(|d| (AtomId(i as u32), d)))
        .collect()
}

/// Per-atom distances as a dense vector.
pub(crate) fn distances(g: &CnrDepGraph, topic: AtomId, metric: DistanceMetric) -> Vec<Option<u32>> {
    match metric {
        DistanceMetric::RuleStep => bfs(&rule_step_adjacency(g), topic.index()),
        DistanceMetric::ConjunctionHop => {
            let mut d = bfs(&hop_adjacency(g), topic.index());
            d.truncate(g.atoms().len());
            d
        }
    }
}

fn bfs(adj: &[Vec<usize>], start: usize) -> Vec<Option<u32>> {
    let mut dist = alloc::vec![None; adj.len()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in &adj[u] {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// `(rule, neighbour, negated)` triples per atom, sorted by rule then atom.
pub(crate) fn rule_step_links(g: &CnrDepGraph) -> Vec<Vec<(usize, AtomId, bool)>> {
    let mut adj = alloc::vec![Vec::new(); g.atoms().len()];
    for (ri, rule) in g.rules().iter().enumerate() {
        let Some(h) = rule.head else { continue };
        for lit in &rule.body {
            if lit.atom == h {
                continue;
            }
            adj[h.index()].push((ri, lit.atom, lit.negated));
            adj[lit.atom.index()].push((ri, h, lit.negated));
        }
    }
    for list in &mut adj {
        list.sort();
    }
    adj
}

fn rule_step_adjacency(g: &CnrDepGraph) -> Vec<Vec<usize>> {
    rule_step_links(g)
        .into_iter()
        .map(|l| l.into_iter().map(|(_, a, _)| a.index()).collect())
        .collect()
}

fn hop_adjacency(g: &CnrDepGraph) -> Vec<Vec<usize>> {
    let mut adj = alloc::vec![Vec::new(); g.node_count()];
    for e in g.edges() {
        let skip = |n: crate::graph::NodeId| g.kind(n) == NodeKind::ConstraintRoot;
        if skip(e.from) || skip(e.to) || e.from == e.to {
            continue;
        }
        adj[e.from.index()].push(e.to.index());
        adj[e.to.index()].push(e.from.index());
    }
    adj
}
