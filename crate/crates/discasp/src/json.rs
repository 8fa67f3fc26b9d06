//! JSON documents and Graphviz output for models, RCCs and graphs.

use serde::{Deserialize, Serialize};

use discasp_core::{
    render_explanation, AtomTable, CnrDepGraph, ExplanationPath, NodeKind, PartialModel, PhraseTable, RccResult,
    TotalModel,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    #[serde(rename = "true")]
    pub true_atoms: Vec<String>,
    #[serde(rename = "false")]
    pub false_atoms: Vec<String>,
}

impl ModelDoc {
    pub fn new(m: &PartialModel, atoms: &AtomTable) -> Self {
        let (true_atoms, false_atoms) = m.sort_key(atoms);
        ModelDoc { true_atoms, false_atoms }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveDoc {
    pub query: Vec<String>,
    pub models: Vec<ModelDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StableDoc {
    pub models: Vec<Vec<String>>,
}

impl StableDoc {
    pub fn new(models: &[TotalModel], atoms: &AtomTable) -> Self {
        let models = models
            .iter()
            .map(|m| {
                let mut names: Vec<String> = m.true_atoms.iter().map(|&a| atoms.name(a).to_string()).collect();
                names.sort();
                names
            })
            .collect();
        StableDoc { models }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberDoc {
    pub atom: String,
    pub value: bool,
    pub distance: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepDoc {
    pub rule: usize,
    pub rule_text: String,
    pub from: String,
    pub to: String,
    pub sign: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDoc {
    pub target: String,
    pub steps: Vec<StepDoc>,
    pub text: String,
}

impl PathDoc {
    pub fn new(path: &ExplanationPath, target: &str, g: &CnrDepGraph, phrases: &PhraseTable) -> Self {
        let atoms = g.atoms();
        let steps = path
            .steps
            .iter()
            .map(|s| StepDoc {
                rule: s.rule,
                rule_text: g.rules()[s.rule].display(atoms).to_string(),
                from: atoms.name(s.from).to_string(),
                to: atoms.name(s.to).to_string(),
                sign: s.sign.to_string(),
            })
            .collect();
        PathDoc { target: target.to_string(), steps, text: render_explanation(path, g, phrases) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RccDoc {
    pub topic: String,
    /// `None` for an unbounded radius.
    pub radius: Option<u32>,
    pub members: Vec<MemberDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<PathDoc>>,
}

impl RccDoc {
    pub fn new(r: &RccResult, atoms: &AtomTable) -> Self {
        let members = r
            .members
            .iter()
            .map(|m| MemberDoc { atom: atoms.name(m.atom).to_string(), value: m.value.as_bool(), distance: m.distance })
            .collect();
        let radius = match r.radius {
            discasp_core::Radius::Within(n) => Some(n),
            discasp_core::Radius::Unbounded => None,
        };
        RccDoc { topic: atoms.name(r.topic).to_string(), radius, members, paths: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDoc {
    pub id: u32,
    pub kind: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: u32,
    pub to: u32,
    pub sign: String,
    pub rule: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub nodes: Vec<NodeDoc>,
    pub edges: Vec<EdgeDoc>,
}

fn kind_name(k: NodeKind) -> &'static str {
    match k {
        NodeKind::Atom(_) => "atom",
        NodeKind::Conjunction(_) => "conjunction",
        NodeKind::ConstraintRoot => "root",
    }
}

impl GraphDoc {
    pub fn new(g: &CnrDepGraph) -> Self {
        let nodes = (0..g.node_count() as u32)
            .map(|i| {
                let id = discasp_core::NodeId(i);
                NodeDoc { id: i, kind: kind_name(g.kind(id)).to_string(), label: g.node_name(id) }
            })
            .collect();
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeDoc { from: e.from.0, to: e.to.0, sign: e.sign.to_string(), rule: e.rule })
            .collect();
        GraphDoc { nodes, edges }
    }
}

/// Graphviz rendering: conjunctions are points, the root is a box, and
/// negative edges are dashed.
pub fn graph_dot(g: &CnrDepGraph) -> String {
    let mut out = String::from("digraph discasp {\n");
    for i in 0..g.node_count() as u32 {
        let id = discasp_core::NodeId(i);
        let shape = match g.kind(id) {
            NodeKind::Atom(_) => "ellipse",
            NodeKind::Conjunction(_) => "point",
            NodeKind::ConstraintRoot => "box",
        };
        out.push_str(&format!("  n{i} [label={:?}, shape={shape}];\n", g.node_name(id)));
    }
    for e in g.edges() {
        let style = if e.sign.is_negative() { "dashed" } else { "solid" };
        out.push_str(&format!("  n{} -> n{} [label=\"{}\", style={style}];\n", e.from.0, e.to.0, e.sign));
    }
    out.push_str("}\n");
    out
}
