//! Command-line interface.
//!
//! Exit codes: 0 on success, 1 when the query has no answer (or a check
//! finds an unsound answer), 2 on input or usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use discasp_core::{
    compute_rcc_per_model, enumerate_stable_models, extract_path, parse_program, solve,
    CnrDepGraph, DistanceMetric, Literal, PhraseTable, Program, Radius, RccError, SolveError,
};

use crate::check::{check_program, check_random};
use crate::gen::{seed_from_env, GenParams};
use crate::json::{graph_dot, GraphDoc, ModelDoc, PathDoc, RccDoc, SolveDoc, StableDoc};
use crate::service::Config;

#[derive(Debug, Parser)]
#[command(name = "discasp", version, about = "Goal-directed partial answer sets for grounded ASP programs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    /// One step per rule between its head and each body atom.
    RuleStep,
    /// Edges of the dependency graph, conjunction nodes included.
    ConjunctionHop,
}

impl From<Metric> for DistanceMetric {
    fn from(m: Metric) -> Self {
        match m {
            Metric::RuleStep => DistanceMetric::RuleStep,
            Metric::ConjunctionHop => DistanceMetric::ConjunctionHop,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Json,
    Dot,
}

#[derive(Debug, clap::Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Output::Text)]
    pub output: Output,
    /// Same as `--output json`.
    #[arg(long)]
    pub json: bool,
}

impl OutputArgs {
    fn json(&self) -> bool {
        self.json || self.output == Output::Json
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partial answer sets that make the query true.
    Solve {
        file: PathBuf,
        /// Comma-separated literals, e.g. `p, not q`. Defaults to the
        /// program's `?-` line.
        #[arg(long)]
        query: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// All stable models, by brute force (small programs only).
    Stable {
        file: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare solver answers with brute-force stable models.
    Check {
        /// Program to check; omit to check `--random` generated programs.
        file: Option<PathBuf>,
        #[arg(long)]
        query: Option<String>,
        /// Number of random programs to check.
        #[arg(long, default_value_t = 500)]
        random: usize,
        /// Seed for random programs; defaults to `DISCASP_SEED`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Relevant consistent concepts around a topic atom.
    Rcc {
        file: PathBuf,
        /// Topic atom.
        #[arg(long)]
        query: String,
        /// Maximum distance; omit for no limit.
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value_t = Metric::RuleStep)]
        metric: Metric,
        /// Also print the path from the topic to each member.
        #[arg(long)]
        explain: bool,
        /// Phrase table used by `--explain`.
        #[arg(long)]
        phrases: Option<PathBuf>,
        /// One RCC per answer instead of the first only.
        #[arg(long)]
        all_models: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Print the dependency graph.
    Graph {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = GraphFormat::Json)]
        format: GraphFormat,
    },
    /// Run the chat service.
    Serve {
        /// TOML configuration file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Overrides the configured listen address.
        #[arg(long)]
        bind: Option<String>,
        #[arg(long)]
        kb_dir: Option<PathBuf>,
        #[arg(long)]
        store_dir: Option<PathBuf>,
    },
}

/// Error carrying the exit code to report.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }
}

type CmdResult = Result<u8, Failure>;

fn read_program(path: &Path) -> Result<Program, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    parse_program(&text).map_err(|e| Failure::input(format!("{}:{e}", path.display())))
}

fn query_of(p: &Program, text: Option<&str>) -> Result<Vec<Literal>, Failure> {
    match text {
        Some(q) => p.parse_query(q).map_err(|e| Failure::input(format!("query: {e}"))),
        None => p.query.clone().ok_or_else(|| Failure::input("a query is required: pass --query or add a `?-` line")),
    }
}

fn solve_failure(e: SolveError) -> Failure {
    Failure::input(match e {
        SolveError::Invalid(errs) => errs.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n"),
        other => other.to_string(),
    })
}

fn print_json<T: serde::Serialize>(out: &mut impl Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Failure::input(e.to_string()))
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| Failure::input(e.to_string()))?
    };
}

pub fn run(cli: Cli, out: &mut impl Write) -> CmdResult {
    match cli.command {
        Command::Solve { file, query, out: fmt } => {
            let p = read_program(&file)?;
            let query = query_of(&p, query.as_deref())?;
            let models = solve(&p, &query).map_err(solve_failure)?;
            if fmt.json() {
                let doc = SolveDoc {
                    query: query.iter().map(|l| l.display(p.atoms()).to_string()).collect(),
                    models: models.iter().map(|m| ModelDoc::new(m, p.atoms())).collect(),
                };
                print_json(out, &doc)?;
            } else if models.is_empty() {
                say!(out, "no partial answer set");
            } else {
                for (i, m) in models.iter().enumerate() {
                    say!(out, "Answer {}: {}", i + 1, m.render(p.atoms()));
                }
            }
            Ok(if models.is_empty() { 1 } else { 0 })
        }
        Command::Stable { file, out: fmt } => {
            let p = read_program(&file)?;
            let models = enumerate_stable_models(&p).map_err(|e| Failure::input(e.to_string()))?;
            let doc = StableDoc::new(&models, p.atoms());
            if fmt.json() {
                print_json(out, &doc)?;
            } else if doc.models.is_empty() {
                say!(out, "no stable model");
            } else {
                for (i, m) in doc.models.iter().enumerate() {
                    say!(out, "Stable {}: {}", i + 1, m.join(" "));
                }
            }
            Ok(if models.is_empty() { 1 } else { 0 })
        }
        Command::Check { file: Some(file), query, .. } => {
            let p = read_program(&file)?;
            let query = query_of(&p, query.as_deref())?;
            let outcome = check_program(&p, &query).map_err(|e| Failure::input(e.to_string()))?;
            if outcome.unsound.is_empty() {
                say!(out, "PASS: all answers subset-sound ({} answers)", outcome.models);
                Ok(0)
            } else {
                say!(out, "FAIL: {} of {} answers not contained in any stable model", outcome.unsound.len(), outcome.models);
                for m in &outcome.unsound {
                    say!(out, "  {}", m.render(p.atoms()));
                }
                Ok(1)
            }
        }
        Command::Check { file: None, random, seed, .. } => {
            let seed = seed.unwrap_or_else(seed_from_env);
            let report = check_random(random, seed, GenParams::default());
            if report.passed() {
                say!(
                    out,
                    "PASS: all answers subset-sound ({} programs, {} answers, {} without answer, {} rejected, seed {seed})",
                    report.programs,
                    report.models,
                    report.empty,
                    report.rejected
                );
                Ok(0)
            } else {
                say!(out, "FAIL: {} of {} programs gave unsound answers (seed {seed})", report.failures.len(), report.programs);
                for f in &report.failures {
                    say!(out, "{f}");
                }
                Ok(1)
            }
        }
        Command::Rcc { file, query, radius, metric, explain, phrases, all_models, out: fmt } => {
            let p = read_program(&file)?;
            let topic = p.atoms().lookup(query.trim()).ok_or_else(|| Failure::input(format!("unknown atom `{query}`")))?;
            let radius = radius.map_or(Radius::Unbounded, Radius::Within);
            let phrases = match phrases {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
                    PhraseTable::parse(&text)
                        .map_err(|line| Failure::input(format!("{}: line {line} is not `key = template`", path.display())))?
                }
                None => PhraseTable::new(),
            };
            let mut results = match compute_rcc_per_model(&p, topic, radius, metric.into()) {
                Ok(r) => r,
                Err(RccError::Solve(e)) => return Err(solve_failure(e)),
                Err(e) => return Err(Failure::input(e.to_string())),
            };
            if results.is_empty() {
                say!(out, "no partial answer set makes {} true", p.atoms().name(topic));
                return Ok(1);
            }
            if !all_models {
                results.truncate(1);
            }
            let g = CnrDepGraph::from_program(&p);
            let docs: Vec<RccDoc> = results
                .iter()
                .map(|r| {
                    let mut doc = RccDoc::new(r, p.atoms());
                    if explain {
                        let paths = r
                            .members
                            .iter()
                            .filter(|m| m.atom != topic)
                            .filter_map(|m| {
                                let path = extract_path(&g, topic, m.atom).ok()?;
                                Some(PathDoc::new(&path, p.atoms().name(m.atom), &g, &phrases))
                            })
                            .collect();
                        doc.paths = Some(paths);
                    }
                    doc
                })
                .collect();
            if fmt.json() {
                if all_models {
                    print_json(out, &docs)?;
                } else {
                    print_json(out, &docs[0])?;
                }
                return Ok(0);
            }
            for (i, doc) in docs.iter().enumerate() {
                if all_models {
                    say!(out, "Answer {}:", i + 1);
                }
                for m in &doc.members {
                    let lit = if m.value { m.atom.clone() } else { format!("not {}", m.atom) };
                    let dist = m.distance.map_or("-".to_string(), |d| d.to_string());
                    say!(out, "{dist}\t{lit}");
                }
                for path in doc.paths.iter().flatten() {
                    say!(out, "{}: {}", path.target, path.text);
                }
            }
            Ok(0)
        }
        Command::Graph { file, format } => {
            let p = read_program(&file)?;
            let g = CnrDepGraph::from_program(&p);
            match format {
                GraphFormat::Json => print_json(out, &GraphDoc::new(&g))?,
                GraphFormat::Dot => write!(out, "{}", graph_dot(&g)).map_err(|e| Failure::input(e.to_string()))?,
            }
            Ok(0)
        }
        Command::Serve { config, bind, kb_dir, store_dir } => {
            let mut cfg = match config {
                Some(path) => Config::load(&path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
                None => Config::default(),
            }
            .with_env();
            if let Some(b) = bind {
                cfg.bind = b;
            }
            if kb_dir.is_some() {
                cfg.kb_dir = kb_dir;
            }
            if store_dir.is_some() {
                cfg.store_dir = store_dir;
            }
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::input(e.to_string()))?;
            rt.block_on(crate::service::serve(cfg)).map_err(|e| Failure::input(e.to_string()))?;
            Ok(0)
        }
    }
}

pub fn main_with_args(args: impl IntoIterator<Item = String>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    match run(cli, &mut stdout.lock()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
