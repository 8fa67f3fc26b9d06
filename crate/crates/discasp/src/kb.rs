//! The movie knowledge base: catalogue facts, user facts, schematic rules
//! and explanation phrases, plus per-user grounding.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use discasp_core::{
    ground, parse_nonground, parse_program, GroundError, NonGroundRule, ParseError, PhraseTable, Program, Rule,
};

/// Predicates whose first argument is a person. Facts for these are only
/// visible to that person's grounding.
pub const PERSON_PREDICATES: &[&str] =
    &["age_category", "gender", "like_movie", "like_actor", "like_director", "already_talked", "user"];

const BUNDLED_MOVIES: &str = include_str!("../data/movies.lp");
const BUNDLED_USERS: &str = include_str!("../data/users.lp");
const BUNDLED_RULES: &str = include_str!("../data/rules.lp");
const BUNDLED_PHRASES: &str = include_str!("../data/phrases.txt");

#[derive(Debug, thiserror::Error)]
pub enum KbError {
    #[error("{file}:{error}")]
    Parse { file: String, error: ParseError },
    #[error("{file}: facts may not contain variables or rule bodies: {rendered}")]
    NotAFact { file: String, rendered: String },
    #[error("{file}: line {line} is not `key = template`")]
    Phrases { file: String, line: usize },
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

#[derive(Debug)]
pub struct MovieKb {
    /// Ground facts in source order, as canonical atom strings.
    facts: Vec<String>,
    fact_set: HashSet<String>,
    rules: Vec<NonGroundRule>,
    phrases: PhraseTable,
    cache: Mutex<HashMap<CacheKey, Arc<Program>>>,
}

type CacheKey = (String, BTreeSet<String>);

const CACHE_LIMIT: usize = 256;

/// Parses a facts file and a rules file into a knowledge base. Ground facts
/// found in the rules file are kept as facts.
pub fn load_kb(facts_src: &str, rules_src: &str) -> Result<MovieKb, KbError> {
    MovieKb::from_sources(&[("facts", facts_src)], ("rules", rules_src), ("phrases", ""))
}

impl MovieKb {
    pub fn bundled() -> Self {
        Self::from_sources(
            &[("movies.lp", BUNDLED_MOVIES), ("users.lp", BUNDLED_USERS)],
            ("rules.lp", BUNDLED_RULES),
            ("phrases.txt", BUNDLED_PHRASES),
        )
        .expect("bundled knowledge base is valid")
    }

    /// Loads `movies.lp`, `users.lp`, `rules.lp` and the optional
    /// `phrases.txt` from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, KbError> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).map_err(|source| KbError::Io { path, source })
        };
        let movies = read("movies.lp")?;
        let users = read("users.lp")?;
        let rules = read("rules.lp")?;
        let phrases = if dir.join("phrases.txt").exists() { read("phrases.txt")? } else { String::new() };
        Self::from_sources(
            &[("movies.lp", &movies), ("users.lp", &users)],
            ("rules.lp", &rules),
            ("phrases.txt", &phrases),
        )
    }

    fn from_sources(fact_files: &[(&str, &str)], rules: (&str, &str), phrases: (&str, &str)) -> Result<Self, KbError> {
        let mut facts = Vec::new();
        for &(file, src) in fact_files {
            let p = parse_program(src).map_err(|error| KbError::Parse { file: file.into(), error })?;
            for r in &p.rules {
                let Some(h) = r.head.filter(|_| r.body.is_empty()) else {
                    return Err(KbError::NotAFact { file: file.into(), rendered: r.display(p.atoms()).to_string() });
                };
                facts.push(p.atoms().name(h).to_string());
            }
        }
        let parsed = parse_nonground(rules.1).map_err(|error| KbError::Parse { file: rules.0.into(), error })?;
        let mut schematic = Vec::new();
        for r in parsed.rules {
            match &r.head {
                Some(h) if r.body.is_empty() && h.is_ground() => facts.push(h.canonical()),
                _ => schematic.push(r),
            }
        }
        let phrases =
            PhraseTable::parse(phrases.1).map_err(|line| KbError::Phrases { file: phrases.0.into(), line })?;
        let fact_set = facts.iter().cloned().collect();
        Ok(MovieKb { facts, fact_set, rules: schematic, phrases, cache: Mutex::new(HashMap::new()) })
    }

    pub fn phrases(&self) -> &PhraseTable {
        &self.phrases
    }

    pub fn rules(&self) -> &[NonGroundRule] {
        &self.rules
    }

    pub fn has_fact(&self, atom: &str) -> bool {
        self.fact_set.contains(atom)
    }

    /// Constants `c` such that `pred(c)` is a fact.
    pub fn unary(&self, pred: &str) -> Vec<String> {
        let prefix = format!("{pred}(");
        let mut out: Vec<String> = self
            .facts
            .iter()
            .filter_map(|f| f.strip_prefix(&prefix)?.strip_suffix(')'))
            .filter(|a| !a.contains(','))
            .map(String::from)
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Values `o` such that `pred(subject,o)` is a fact.
    pub fn objects(&self, pred: &str, subject: &str) -> Vec<String> {
        let prefix = format!("{pred}({subject},");
        self.facts.iter().filter_map(|f| f.strip_prefix(&prefix)?.strip_suffix(')')).map(String::from).collect()
    }

    pub fn users(&self) -> Vec<String> {
        self.unary("user")
    }

    pub fn movies(&self) -> Vec<String> {
        self.unary("movie")
    }

    pub fn adult_movies(&self) -> Vec<String> {
        self.unary("is_adult_movie")
    }

    /// Every person named as a movie's actor or director.
    pub fn people(&self) -> (Vec<String>, Vec<String>) {
        let second = |pred: &str| {
            let prefix = format!("{pred}(");
            let mut out: Vec<String> = self
                .facts
                .iter()
                .filter_map(|f| f.strip_prefix(&prefix)?.strip_suffix(')')?.split_once(',').map(|(_, b)| b.to_string()))
                .collect();
            out.sort();
            out.dedup();
            out
        };
        (second("movie_actor"), second("movie_director"))
    }

    /// Grounds the rules for one person: catalogue facts, that person's own
    /// facts, and `dynamic` facts added during a conversation. Results are
    /// cached by person and dynamic facts.
    pub fn ground_for_user(&self, user: &str, dynamic: &BTreeSet<String>) -> Result<Arc<Program>, KbError> {
        let key = (user.to_string(), dynamic.clone());
        if let Some(p) = self.cache.lock().unwrap().get(&key) {
            return Ok(p.clone());
        }
        let mut facts = Program::new();
        let mut seen = HashSet::new();
        for f in self.facts.iter().chain(dynamic.iter()) {
            if person_of(f).is_some_and(|p| p != user) {
                continue;
            }
            let id = facts.intern(f);
            if seen.insert(id) {
                facts.add_rule(Rule::fact(id));
            }
        }
        let program = Arc::new(ground(&self.rules, &facts)?);
        let mut cache = self.cache.lock().unwrap();
        if cache.len() >= CACHE_LIMIT {
            cache.clear();
        }
        cache.insert(key, program.clone());
        Ok(program)
    }
}

/// The person a fact is about, if its predicate is person-scoped.
fn person_of(atom: &str) -> Option<&str> {
    let (pred, rest) = atom.split_once('(')?;
    if !PERSON_PREDICATES.contains(&pred) {
        return None;
    }
    Some(rest.trim_end_matches(')').split(',').next().unwrap_or(""))
}
