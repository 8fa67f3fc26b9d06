//! Conjunction-node graphs.
//!
//! Node ids are laid out as: one node per atom (`NodeId(a)` for `AtomId(a)`),
//! then the constraint root, then one conjunction node per rule whose body
//! has at least two literals, in rule order.
//!
//! In the CNR graph an edge carries the sign of the literal as written in the
//! rule. The dependency graph flips every edge touching a conjunction node, so
//! a conjunction node is true exactly when some body literal is false, and a
//! head fed through a conjunction node is true when that node is false.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atom::{AtomId, AtomTable, Literal};
use crate::program::{Program, Rule};
use crate::propagate::RuleIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKind {
    Atom(AtomId),
    /// Conjunction node of the rule with this index.
    Conjunction(usize),
    ConstraintRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn of(lit: Literal) -> Self {
        if lit.negated {
            Sign::Negative
        } else {
            Sign::Positive
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+",
            Sign::Negative => "-",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub sign: Sign,
    /// Rule that produced the edge.
    pub rule: usize,
    /// Body literal the edge stands for; `None` on conjunction-to-head edges.
    pub literal: Option<Literal>,
}

impl SignedEdge {
    /// Whether the edge stands for a default-negated body literal.
    pub fn negated_literal(&self) -> bool {
        self.literal.is_some_and(|l| l.negated)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Layout {
    atoms: AtomTable,
    rules: Vec<Rule>,
    /// Rules at or past this index were appended by [`attach_query`].
    program_rules: usize,
    nodes: Vec<NodeKind>,
    conj_of_rule: Vec<Option<NodeId>>,
    edges: Vec<SignedEdge>,
    fact_atoms: BTreeSet<AtomId>,
    undefined_atoms: BTreeSet<AtomId>,
}

impl Layout {
    fn build(atoms: AtomTable, rules: Vec<Rule>, program_rules: usize) -> Self {
        let n = atoms.len();
        let root = NodeId(n as u32);
        let mut nodes: Vec<NodeKind> = atoms.ids().map(NodeKind::Atom).collect();
        nodes.push(NodeKind::ConstraintRoot);
        let mut conj_of_rule = Vec::with_capacity(rules.len());
        let mut edges = Vec::new();
        let mut defined = alloc::vec![false; n];
        let mut fact_atoms = BTreeSet::new();
        for (ri, rule) in rules.iter().enumerate() {
            let head = match rule.head {
                Some(h) => {
                    defined[h.index()] = true;
                    if rule.is_fact() {
                        fact_atoms.insert(h);
                    }
                    NodeId(h.0)
                }
                None => root,
            };
            if rule.body.len() >= 2 {
                let conj = NodeId(nodes.len() as u32);
                nodes.push(NodeKind::Conjunction(ri));
                conj_of_rule.push(Some(conj));
                for &lit in &rule.body {
                    edges.push(SignedEdge { from: NodeId(lit.atom.0), to: conj, sign: Sign::of(lit), rule: ri, literal: Some(lit) });
                }
                edges.push(SignedEdge { from: conj, to: head, sign: Sign::Positive, rule: ri, literal: None });
            } else {
                conj_of_rule.push(None);
                if let Some(&lit) = rule.body.first() {
                    edges.push(SignedEdge { from: NodeId(lit.atom.0), to: head, sign: Sign::of(lit), rule: ri, literal: Some(lit) });
                }
            }
        }
        let undefined_atoms = atoms.ids().filter(|a| !defined[a.index()]).collect();
        Layout { atoms, rules, program_rules, nodes, conj_of_rule, edges, fact_atoms, undefined_atoms }
    }

    fn root(&self) -> NodeId {
        NodeId(self.atoms.len() as u32)
    }
}

/// Graph with edges carrying the literal signs as written.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnrGraph {
    layout: Layout,
}

impl CnrGraph {
    pub fn atoms(&self) -> &AtomTable {
        &self.layout.atoms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.layout.rules
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.layout.nodes
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.layout.edges
    }

    pub fn root(&self) -> NodeId {
        self.layout.root()
    }

    pub fn fact_atoms(&self) -> &BTreeSet<AtomId> {
        &self.layout.fact_atoms
    }

    pub fn undefined_atoms(&self) -> &BTreeSet<AtomId> {
        &self.layout.undefined_atoms
    }

    pub fn conjunction_of(&self, rule: usize) -> Option<NodeId> {
        self.layout.conj_of_rule[rule]
    }
}

pub fn build_cnr_graph(program: &Program) -> CnrGraph {
    CnrGraph { layout: Layout::build(program.atoms().clone(), program.rules.clone(), program.rules.len()) }
}

/// CNR graph after the De Morgan transformation, with adjacency indexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnrDepGraph {
    layout: Layout,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    index: RuleIndex,
}

pub fn cnr_to_dependency_graph(g: CnrGraph) -> CnrDepGraph {
    CnrDepGraph::from_layout(g.layout)
}

impl CnrDepGraph {
    fn from_layout(mut layout: Layout) -> Self {
        for e in &mut layout.edges {
            let touches = |n: NodeId| matches!(layout.nodes[n.index()], NodeKind::Conjunction(_));
            if touches(e.from) || touches(e.to) {
                e.sign = e.sign.flip();
            }
        }
        let mut preds = alloc::vec![Vec::new(); layout.nodes.len()];
        let mut succs = alloc::vec![Vec::new(); layout.nodes.len()];
        for (i, e) in layout.edges.iter().enumerate() {
            preds[e.to.index()].push(i);
            succs[e.from.index()].push(i);
        }
        let edges = &layout.edges;
        for list in &mut preds {
            list.sort_by_key(|&i| (edges[i].from, edges[i].rule, i));
        }
        for list in &mut succs {
            list.sort_by_key(|&i| (edges[i].to, edges[i].rule, i));
        }
        let index = RuleIndex::build(&layout.rules, layout.atoms.len());
        CnrDepGraph { layout, preds, succs, index }
    }

    pub fn from_program(program: &Program) -> Self {
        cnr_to_dependency_graph(build_cnr_graph(program))
    }

    pub fn atoms(&self) -> &AtomTable {
        &self.layout.atoms
    }

    /// Program rules followed by any attached query constraints.
    pub fn rules(&self) -> &[Rule] {
        &self.layout.rules
    }

    /// Number of rules that came from the program rather than a query.
    pub fn program_rule_count(&self) -> usize {
        self.layout.program_rules
    }

    pub fn rule_index(&self) -> &RuleIndex {
        &self.index
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.layout.nodes
    }

    pub fn node_count(&self) -> usize {
        self.layout.nodes.len()
    }

    pub fn kind(&self, node: NodeId) -> NodeKind {
        self.layout.nodes[node.index()]
    }

    pub fn edges(&self) -> &[SignedEdge] {
        &self.layout.edges
    }

    pub fn edge(&self, i: usize) -> &SignedEdge {
        &self.layout.edges[i]
    }

    /// Indexes of the in-edges of `node`, ordered by source node id.
    pub fn pred_edges(&self, node: NodeId) -> &[usize] {
        &self.preds[node.index()]
    }

    /// Indexes of the out-edges of `node`, ordered by target node id.
    pub fn succ_edges(&self, node: NodeId) -> &[usize] {
        &self.succs[node.index()]
    }

    pub fn root(&self) -> NodeId {
        self.layout.root()
    }

    pub fn atom_node(&self, atom: AtomId) -> NodeId {
        NodeId(atom.0)
    }

    pub fn node_atom(&self, node: NodeId) -> Option<AtomId> {
        match self.kind(node) {
            NodeKind::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn conjunction_of(&self, rule: usize) -> Option<NodeId> {
        self.layout.conj_of_rule[rule]
    }

    pub fn fact_atoms(&self) -> &BTreeSet<AtomId> {
        &self.layout.fact_atoms
    }

    pub fn undefined_atoms(&self) -> &BTreeSet<AtomId> {
        &self.layout.undefined_atoms
    }

    /// Display name: the atom name, `_root`, or `_conj<rule>`.
    pub fn node_name(&self, node: NodeId) -> String {
        match self.kind(node) {
            NodeKind::Atom(a) => String::from(self.atoms().name(a)),
            NodeKind::Conjunction(r) => format!("_conj{r}"),
            NodeKind::ConstraintRoot => String::from("_root"),
        }
    }

    /// Nodes in the undirected connected component of `start`.
    pub fn component(&self, start: NodeId) -> Vec<bool> {
        let mut seen = alloc::vec![false; self.node_count()];
        let mut stack = alloc::vec![start];
        seen[start.index()] = true;
        while let Some(n) = stack.pop() {
            let adj = self.preds[n.index()].iter().map(|&e| self.layout.edges[e].from);
            let adj = adj.chain(self.succs[n.index()].iter().map(|&e| self.layout.edges[e].to));
            for m in adj {
                if !seen[m.index()] {
                    seen[m.index()] = true;
                    stack.push(m);
                }
            }
        }
        seen
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("atom #{} is not in the program", .0 .0)]
pub struct UnknownAtom(pub AtomId);

/// Derived graph with one extra constraint `:- not q` per positive query
/// literal `q` (and `:- q` per negated one), so that every literal of the
/// query is required.
pub fn attach_query(g: &CnrDepGraph, query: &[Literal]) -> Result<CnrDepGraph, UnknownAtom> {
    if let Some(lit) = query.iter().find(|l| l.atom.index() >= g.atoms().len()) {
        return Err(UnknownAtom(lit.atom));
    }
    let mut rules = g.layout.rules.clone();
    for &lit in query {
        rules.push(Rule::constraint(alloc::vec![lit.complement()]));
    }
    let layout = Layout::build(g.layout.atoms.clone(), rules, g.layout.program_rules);
    Ok(CnrDepGraph::from_layout(layout))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::parse::parse_program;

    fn cnr(src: &str) -> CnrGraph {
        build_cnr_graph(&parse_program(src).unwrap())
    }

    fn id(g: &CnrGraph, name: &str) -> NodeId {
        NodeId(g.atoms().lookup(name).unwrap().0)
    }

    #[test]
    fn program_one_has_single_conjunction() {
        let g = cnr("p :- q, not r, not p.");
        let conj = g.conjunction_of(0).unwrap();
        let ins: Vec<_> = g.edges().iter().filter(|e| e.to == conj).map(|e| (e.from, e.sign)).collect();
        assert_eq!(
            ins,
            [(id(&g, "q"), Sign::Positive), (id(&g, "r"), Sign::Negative), (id(&g, "p"), Sign::Negative)]
        );
        let outs: Vec<_> = g.edges().iter().filter(|e| e.from == conj).map(|e| e.to).collect();
        assert_eq!(outs, [id(&g, "p")]);
    }

    #[test]
    fn program_two_mixes_conjunction_and_direct_edge() {
        let g = cnr("p :- q, not p. p :- not r.");
        assert!(g.conjunction_of(0).is_some());
        assert!(g.conjunction_of(1).is_none());
        let direct = g.edges().iter().find(|e| e.rule == 1).unwrap();
        assert_eq!((direct.from, direct.to, direct.sign), (id(&g, "r"), id(&g, "p"), Sign::Negative));
    }

    #[test]
    fn fact_alone() {
        let g = cnr("s.");
        assert!(g.edges().is_empty());
        assert_eq!(g.fact_atoms().len(), 1);
        assert!(g.undefined_atoms().is_empty());
    }

    #[test]
    fn de_morgan_flips_conjunction_edges_only() {
        let g = cnr_to_dependency_graph(cnr("p :- q, not r. s :- not t."));
        let conj = g.conjunction_of(0).unwrap();
        let q = g.atom_node(g.atoms().lookup("q").unwrap());
        let r = g.atom_node(g.atoms().lookup("r").unwrap());
        let signs: Vec<_> = g.pred_edges(conj).iter().map(|&e| (g.edge(e).from, g.edge(e).sign)).collect();
        assert_eq!(signs, [(q, Sign::Negative), (r, Sign::Positive)]);
        let p = g.atom_node(g.atoms().lookup("p").unwrap());
        assert_eq!(g.edge(g.pred_edges(p)[0]).sign, Sign::Negative);
        let s = g.atom_node(g.atoms().lookup("s").unwrap());
        assert_eq!(g.edge(g.pred_edges(s)[0]).sign, Sign::Negative);
    }

    #[test]
    fn no_conjunctions_means_identity() {
        let c = cnr("p :- not q. q :- r. :- p.");
        let d = cnr_to_dependency_graph(c.clone());
        assert_eq!(c.edges(), d.edges());
    }

    #[test]
    fn query_adds_negated_constraints() {
        let p = parse_program("p :- not q. q :- not p. :- p, q.").unwrap();
        let g = CnrDepGraph::from_program(&p);
        let q = p.parse_query("p").unwrap();
        let g2 = attach_query(&g, &q).unwrap();
        assert_eq!(g2.rules().len(), 4);
        assert_eq!(g2.rules()[3].display(g2.atoms()).to_string(), ":- not p.");
        assert_eq!(g.rules().len(), 3);
        assert_eq!(g2.program_rule_count(), 3);
        assert!(attach_query(&g, &[Literal::pos(AtomId(9))]).is_err());
    }
}
