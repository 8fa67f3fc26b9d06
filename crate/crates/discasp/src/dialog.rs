//! Turn handling for the movie chat: recognise what the user likes, compute
//! the RCC of that topic, and pick the next talking point.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use discasp_core::{
    compute_rcc_with, extract_path, prettify, CnrDepGraph, DistanceMetric, Radius, RccError,
};

use crate::json::{PathDoc, RccDoc};
use crate::kb::{KbError, MovieKb};

/// Distances in the chat are counted in dependency-graph hops.
pub const CHAT_METRIC: DistanceMetric = DistanceMetric::ConjunctionHop;
pub const DEFAULT_RADIUS: u32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TopicKind {
    Movie,
    Actor,
    Director,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Topic {
    pub kind: TopicKind,
    /// KB constant, such as `titanic` or `tom_hanks`.
    pub name: String,
}

impl Topic {
    pub fn atom(&self, user: &str) -> String {
        let pred = match self.kind {
            TopicKind::Movie => "like_movie",
            TopicKind::Actor => "like_actor",
            TopicKind::Director => "like_director",
        };
        format!("{pred}({user},{})", self.name)
    }
}

/// `Schindler's List!` becomes `schindlers_list`.
pub fn normalize_name(text: &str) -> String {
    let cleaned: String = text
        .to_lowercase()
        .chars()
        .filter(|&c| c != '\'')
        .map(|c| if c.is_alphanumeric() { c } else { ' ' })
        .collect();
    cleaned.split_whitespace().collect::<Vec<_>>().join("_")
}

/// Recognises statements of liking a movie, actor or director that the KB
/// knows about.
pub fn parse_utterance(text: &str, kb: &MovieKb) -> Option<Topic> {
    let lower = text.trim().to_lowercase();
    let lower = lower.trim_end_matches(['.', '!', '?']).trim();
    let (actors, directors) = kb.people();
    let movies = kb.movies();
    let lookup = |name: &str, kinds: &[TopicKind]| {
        let norm = normalize_name(name);
        kinds.iter().find_map(|&kind| {
            let pool = match kind {
                TopicKind::Movie => &movies,
                TopicKind::Actor => &actors,
                TopicKind::Director => &directors,
            };
            let with_the = format!("the_{norm}");
            let found = [&norm, &with_the].into_iter().find(|n| pool.binary_search(n).is_ok());
            found.map(|n| Topic { kind, name: n.clone() })
        })
    };
    const ALL: &[TopicKind] = &[TopicKind::Movie, TopicKind::Actor, TopicKind::Director];
    let patterns: &[(&str, &[TopicKind])] = &[
        ("my favorite movie is ", &[TopicKind::Movie]),
        ("my favourite movie is ", &[TopicKind::Movie]),
        ("my favorite film is ", &[TopicKind::Movie]),
        ("my favorite actor is ", &[TopicKind::Actor]),
        ("my favourite actor is ", &[TopicKind::Actor]),
        ("my favorite director is ", &[TopicKind::Director]),
        ("my favourite director is ", &[TopicKind::Director]),
        ("i like the actor ", &[TopicKind::Actor]),
        ("i like actor ", &[TopicKind::Actor]),
        ("i like the director ", &[TopicKind::Director]),
        ("i like director ", &[TopicKind::Director]),
        ("i like the movie ", &[TopicKind::Movie]),
        ("i like ", ALL),
        ("i love ", ALL),
        ("i enjoyed ", ALL),
    ];
    patterns.iter().find_map(|(prefix, kinds)| lookup(lower.strip_prefix(prefix)?, kinds))
}

/// Rank of a talking point; lower is raised first.
pub fn priority(kb: &MovieKb, movie: &str, attribute: &str) -> u8 {
    match attribute {
        "director" => {
            let oscar = kb
                .objects("movie_director", movie)
                .iter()
                .any(|d| kb.has_fact(&format!("director_award({d},oscar)")));
            if oscar {
                0
            } else {
                3
            }
        }
        "actor" => 3,
        "awards" => 4,
        "actor_award" => 5,
        "trivia" => 6,
        person if kb.has_fact(&format!("main_actor({person},{movie})")) => 1,
        person
            if kb.has_fact(&format!("famous_actor({person})"))
                || kb.has_fact(&format!("award_won({person},oscar)")) =>
        {
            2
        }
        _ => 3,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TurnKind {
    TalkingPoint,
    /// Nothing new to say about the topic within the radius.
    NoTalkingPoint,
    /// The topic is inconsistent with what is known about the user.
    Declined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BotTurn {
    pub kind: TurnKind,
    pub reply: String,
    pub topic: String,
    pub chosen: Option<String>,
    pub explanation: Option<PathDoc>,
    pub rcc: Option<RccDoc>,
    /// Facts the session keeps after this turn.
    pub added_facts: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TurnRecord {
    pub utterance: String,
    pub turn: BotTurn,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogState {
    pub id: String,
    pub user: String,
    /// Stated likes and topics already talked about.
    pub facts: BTreeSet<String>,
    pub turns: Vec<TurnRecord>,
}

impl DialogState {
    pub fn new(id: impl Into<String>, user: impl Into<String>) -> Self {
        DialogState { id: id.into(), user: user.into(), facts: BTreeSet::new(), turns: Vec::new() }
    }

    pub fn apply(&mut self, utterance: &str, turn: BotTurn) {
        self.facts.extend(turn.added_facts.iter().cloned());
        self.turns.push(TurnRecord { utterance: utterance.to_string(), turn });
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TurnError {
    #[error("no movie, actor or director recognised in the utterance")]
    NoIntent,
    #[error(transparent)]
    Kb(#[from] KbError),
    #[error(transparent)]
    Rcc(#[from] RccError),
}

/// Works out the bot's answer to a turn about `topic` without changing the
/// state; see [`DialogState::apply`].
pub fn next_turn(kb: &MovieKb, state: &DialogState, topic: &Topic, radius: Radius) -> Result<BotTurn, TurnError> {
    let user = &state.user;
    let topic_atom = topic.atom(user);
    let mut facts = state.facts.clone();
    facts.insert(topic_atom.clone());
    let program = kb.ground_for_user(user, &facts)?;
    let atoms = program.atoms();
    let id = atoms.lookup(&topic_atom).expect("stated topic is a fact");
    let rcc = match compute_rcc_with(&program, id, radius, CHAT_METRIC) {
        Ok(r) => r,
        Err(RccError::NoModel) => {
            return Ok(BotTurn {
                kind: TurnKind::Declined,
                reply: "Let's pick a different movie to talk about. What else do you enjoy?".into(),
                topic: topic_atom,
                chosen: None,
                explanation: None,
                rcc: None,
                added_facts: Vec::new(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let prefix = format!("talk_preference({user},");
    let mut candidates: Vec<(u8, &str)> = rcc
        .members
        .iter()
        .filter(|m| m.value.as_bool())
        .map(|m| atoms.name(m.atom))
        .filter(|n| n.starts_with(&prefix))
        .filter_map(|n| {
            let args = atoms.args(atoms.lookup(n)?);
            let (movie, attribute) = (args.get(1)?, args.get(2)?);
            if facts.contains(&format!("already_talked({user},{movie},{attribute})")) {
                return None;
            }
            Some((priority(kb, movie, attribute), n))
        })
        .collect();
    candidates.sort();
    let rcc_doc = RccDoc::new(&rcc, atoms);
    let Some(&(_, chosen)) = candidates.first() else {
        return Ok(BotTurn {
            kind: TurnKind::NoTalkingPoint,
            reply: format!("I think we have covered {}. What other movies do you like?", prettify(&topic.name)),
            topic: topic_atom.clone(),
            chosen: None,
            explanation: None,
            rcc: Some(rcc_doc),
            added_facts: vec![topic_atom],
        });
    };
    let graph = CnrDepGraph::from_program(&program);
    let target = atoms.lookup(chosen).expect("member of the program");
    let path = extract_path(&graph, id, target)?;
    let explanation = PathDoc::new(&path, chosen, &graph, kb.phrases());
    let args = atoms.args(target);
    let talked = format!("already_talked({user},{},{})", args[1], args[2]);
    Ok(BotTurn {
        kind: TurnKind::TalkingPoint,
        reply: explanation.text.clone(),
        topic: topic_atom.clone(),
        chosen: Some(chosen.to_string()),
        explanation: Some(explanation),
        rcc: Some(rcc_doc),
        added_facts: vec![topic_atom, talked],
    })
}

/// Parses `utterance`, answers it and records the turn in `state`.
pub fn handle_utterance(kb: &MovieKb, state: &mut DialogState, utterance: &str, radius: Radius) -> Result<BotTurn, TurnError> {
    let topic = parse_utterance(utterance, kb).ok_or(TurnError::NoIntent)?;
    let turn = next_turn(kb, state, &topic, radius)?;
    state.apply(utterance, turn.clone());
    Ok(turn)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_normalised() {
        assert_eq!(normalize_name("Schindler's List!"), "schindlers_list");
        assert_eq!(normalize_name("  E.T. "), "e_t");
    }

    #[test]
    fn utterances() {
        let kb = MovieKb::bundled();
        let t = |s| parse_utterance(s, &kb);
        assert_eq!(t("I like Titanic."), Some(Topic { kind: TopicKind::Movie, name: "titanic".into() }));
        assert_eq!(t("my favorite movie is departed"), Some(Topic { kind: TopicKind::Movie, name: "the_departed".into() }));
        assert_eq!(t("I like actor Tom Hanks"), Some(Topic { kind: TopicKind::Actor, name: "tom_hanks".into() }));
        assert_eq!(t("my favorite actor is Leonardo DiCaprio"), Some(Topic { kind: TopicKind::Actor, name: "leonardo_dicaprio".into() }));
        assert_eq!(t("I like Tom Hanks"), Some(Topic { kind: TopicKind::Actor, name: "tom_hanks".into() }));
        assert_eq!(t("my favorite actor is Titanic"), None);
        assert_eq!(t("hello there"), None);
    }

    #[test]
    fn priorities() {
        let kb = MovieKb::bundled();
        assert_eq!(priority(&kb, "titanic", "director"), 0);
        assert_eq!(priority(&kb, "titanic", "leonardo_dicaprio"), 1);
        assert_eq!(priority(&kb, "forrest_gump", "sally_field"), 2);
        assert_eq!(priority(&kb, "inception", "director"), 3);
        assert!(priority(&kb, "titanic", "awards") < priority(&kb, "titanic", "trivia"));
    }
}
