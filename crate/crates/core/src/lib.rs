//! Graph-based computation of partial answer sets for grounded ASP programs.
//!
//! A program is parsed (or grounded from schematic rules), turned into a
//! conjunction-node dependency graph, and solved backwards from its
//! constraints: every headless constraint and every query literal feeds a
//! single constraint root that must be shown false. The solver returns
//! partial models, each of which agrees with at least one stable model of
//! the program. On top of that, [`rcc`] narrows a model to the atoms within
//! a graph radius of a topic atom and explains how they connect.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the service
//! layer live in the `discasp` companion crate.
//!
//! ```
//! use discasp_core::{parse_program, solve};
//!
//! let program = parse_program("p :- not q. q :- not p. :- p, q.").unwrap();
//! let query = program.parse_query("p").unwrap();
//! let models = solve(&program, &query).unwrap();
//! assert_eq!(models.len(), 1);
//! assert_eq!(models[0].render(program.atoms()), "p not q");
//! ```

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod atom;
pub mod distance;
pub mod explain;
pub mod graph;
pub mod ground;
pub mod loops;
pub mod merge;
pub mod model;
pub mod nonground;
pub mod oracle;
pub mod parse;
pub mod program;
pub mod propagate;
pub mod rcc;
pub mod solver;
pub mod validate;

pub use atom::{AtomId, AtomTable, Literal};
pub use distance::{atom_distance, DistanceMetric};
pub use explain::{pretty_atom, prettify, render_explanation, PhraseTable};
pub use graph::{
    attach_query, build_cnr_graph, cnr_to_dependency_graph, CnrDepGraph, CnrGraph, NodeId,
    NodeKind, Sign, SignedEdge, UnknownAtom,
};
pub use ground::{ground, GroundError};
pub use loops::{classify_loop, find_odd_loop, Cycle, LoopClass, LoopKind};
pub use merge::{conjunctive_merge, disjunctive_merge};
pub use model::{PartialModel, TruthValue};
pub use nonground::{NgAtom, NgLiteral, NonGroundRule, Term};
pub use oracle::{
    enumerate_stable_models, gl_reduct, is_subset_of_some_stable, least_model, OracleError,
    TotalModel,
};
pub use parse::{parse_nonground, parse_program, NonGroundProgram, ParseError, ParseErrorKind};
pub use program::{Program, QueryError, Rule};
pub use propagate::{forward_propagate, Conflict, RuleIndex};
pub use rcc::{
    compute_rcc, compute_rcc_per_model, compute_rcc_with, extract_path, rcc_of_model, ExplanationPath,
    PathStep, Radius, RccError, RccMember, RccResult,
};
pub use solver::{reasoning_rec, solve, solve_graph, SolveError, Solver, SolverState};
pub use validate::{validate_grounded, ValidationCategory, ValidationError};
