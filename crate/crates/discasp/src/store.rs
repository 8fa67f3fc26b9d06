//! Append-only session log: one JSON event per line, one file per session.

use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, Write};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::dialog::{BotTurn, DialogState};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum Event {
    Created { id: String, user: String },
    Turn { utterance: String, turn: BotTurn },
}

/// Rebuilds a session from its events; `None` if the log does not start
/// with a `created` event.
pub fn replay(events: impl IntoIterator<Item = Event>) -> Option<DialogState> {
    let mut events = events.into_iter();
    let Some(Event::Created { id, user }) = events.next() else { return None };
    let mut state = DialogState::new(id, user);
    for e in events {
        if let Event::Turn { utterance, turn } = e {
            state.apply(&utterance, turn);
        }
    }
    Some(state)
}

/// Writes events under a directory, or nowhere when built with
/// [`SessionStore::in_memory`].
#[derive(Clone, Debug, Default)]
pub struct SessionStore {
    dir: Option<PathBuf>,
}

impl SessionStore {
    pub fn in_memory() -> Self {
        SessionStore { dir: None }
    }

    pub fn on_disk(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(SessionStore { dir: Some(dir) })
    }

    fn path(&self, id: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{id}.jsonl")))
    }

    pub fn append(&self, id: &str, event: &Event) -> io::Result<()> {
        let Some(path) = self.path(id) else { return Ok(()) };
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        let line = serde_json::to_string(event).map_err(io::Error::other)?;
        writeln!(f, "{line}")
    }

    /// Every session found in the directory. Unreadable lines end a log early.
    pub fn load_all(&self) -> io::Result<Vec<DialogState>> {
        let Some(dir) = &self.dir else { return Ok(Vec::new()) };
        let mut out = Vec::new();
        for entry in fs::read_dir(dir)? {
            let path = entry?.path();
            if path.extension().is_none_or(|e| e != "jsonl") {
                continue;
            }
            let reader = io::BufReader::new(fs::File::open(&path)?);
            let events = reader.lines().map_while(Result::ok).map_while(|l| serde_json::from_str::<Event>(&l).ok());
            out.extend(replay(events));
        }
        out.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dialog::TurnKind;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let store = SessionStore::on_disk(dir.path()).unwrap();
        store.append("s1", &Event::Created { id: "s1".into(), user: "john".into() }).unwrap();
        let turn = BotTurn {
            kind: TurnKind::NoTalkingPoint,
            reply: "r".into(),
            topic: "like_movie(john,titanic)".into(),
            chosen: None,
            explanation: None,
            rcc: None,
            added_facts: vec!["like_movie(john,titanic)".into()],
        };
        store.append("s1", &Event::Turn { utterance: "I like Titanic".into(), turn }).unwrap();
        let all = store.load_all().unwrap();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].user, "john");
        assert!(all[0].facts.contains("like_movie(john,titanic)"));
        assert_eq!(all[0].turns.len(), 1);
    }
}
