use std::collections::BTreeSet;

use discasp::dialog::{handle_utterance, next_turn, DialogState, Topic, TopicKind, TurnKind, CHAT_METRIC};
use discasp::kb::{load_kb, KbError, MovieKb};
use discasp_core::{
    compute_rcc_with, find_odd_loop, validate_grounded, CnrDepGraph, Program, Radius, RccResult,
};

fn facts(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn rcc(kb: &MovieKb, user: &str, topic: &str, radius: Radius) -> (std::sync::Arc<Program>, RccResult) {
    let p = kb.ground_for_user(user, &facts(&[topic])).unwrap();
    let id = p.atoms().lookup(topic).unwrap();
    let r = compute_rcc_with(&p, id, radius, CHAT_METRIC).unwrap();
    (p, r)
}

fn true_talk_points(p: &Program, r: &RccResult) -> Vec<String> {
    let mut v: Vec<String> = r
        .members
        .iter()
        .filter(|m| m.value.as_bool() && p.atoms().predicate(m.atom) == "talk_preference")
        .map(|m| p.atoms().name(m.atom).to_string())
        .collect();
    v.sort();
    v
}

#[test]
fn bundled_kb_size() {
    let kb = MovieKb::bundled();
    assert!(kb.movies().len() >= 20);
    let p = kb.ground_for_user("john", &facts(&["like_movie(john,titanic)"])).unwrap();
    let n = p.rules.len();
    assert!((592..=888).contains(&n), "{n} ground rules");
}

#[test]
fn every_user_grounds_to_a_valid_odd_loop_free_program() {
    let kb = MovieKb::bundled();
    for user in kb.users() {
        for extra in [vec![], vec![format!("like_movie({user},inception)"), format!("like_actor({user},tom_hanks)")]] {
            let dynamic: BTreeSet<String> = extra.into_iter().collect();
            let p = kb.ground_for_user(&user, &dynamic).unwrap();
            assert_eq!(validate_grounded(&p), Ok(()), "{user}");
            assert!(find_odd_loop(&CnrDepGraph::from_program(&p)).is_none(), "{user}");
        }
    }
}

#[test]
fn titanic_at_radius_three() {
    let kb = MovieKb::bundled();
    let (p, r) = rcc(&kb, "john", "like_movie(john,titanic)", Radius::Within(3));
    assert_eq!(
        true_talk_points(&p, &r),
        [
            "talk_preference(john,titanic,awards)",
            "talk_preference(john,titanic,leonardo_dicaprio)",
            "talk_preference(john,titanic,trivia)",
        ]
    );
}

#[test]
fn already_talked_fact_removes_the_actor_point() {
    let kb = MovieKb::bundled();
    let (p, r) = rcc(&kb, "john", "like_movie(john,avatar)", Radius::Within(5));
    let actor = p.atoms().lookup("talk_preference(john,avatar,actor)").unwrap();
    assert!(r.members.iter().all(|m| m.atom != actor || !m.value.as_bool()));
    let ab = p.atoms().lookup("ab_talk_preference(john,avatar,actor)").unwrap();
    assert_eq!(r.model.value(ab), Some(true));

    // Inception's director has no Oscar, so only the exception removes the point.
    let topic = "like_movie(mary,inception)";
    let point = "talk_preference(mary,inception,actor)";
    for (dynamic, expected) in [(facts(&[topic]), true), (facts(&[topic, "already_talked(mary,inception,actor)"]), false)] {
        let p = kb.ground_for_user("mary", &dynamic).unwrap();
        let r = compute_rcc_with(&p, p.atoms().lookup(topic).unwrap(), Radius::Within(5), CHAT_METRIC).unwrap();
        let a = p.atoms().lookup(point).unwrap();
        assert_eq!(r.members.iter().find(|m| m.atom == a).map(|m| m.value.as_bool()), Some(expected));
    }
}

#[test]
fn chosen_points_are_not_repeated() {
    let kb = MovieKb::bundled();
    let mut state = DialogState::new("t", "john");
    let mut chosen = BTreeSet::new();
    for text in ["I like Titanic"; 4].into_iter().chain(["I like actor Tom Hanks"; 3]).chain(["I like Inception"; 3]) {
        let turn = handle_utterance(&kb, &mut state, text, Radius::Within(3)).unwrap();
        if let Some(c) = turn.chosen {
            let rcc = turn.rcc.as_ref().unwrap();
            assert!(rcc.members.iter().any(|m| m.atom == c && m.value), "chosen atom is an RCC member");
            assert!(chosen.insert(c.clone()), "{c} chosen twice");
        }
    }
    let kinds: Vec<TurnKind> = state.turns.iter().map(|t| t.turn.kind).collect();
    assert_eq!(kinds[3], TurnKind::NoTalkingPoint);
    let talked = state.facts.iter().filter(|f| f.starts_with("already_talked(")).count();
    assert_eq!(talked, chosen.len());
}

#[test]
fn priority_order_on_titanic() {
    let kb = MovieKb::bundled();
    let mut state = DialogState::new("t", "john");
    let picks: Vec<Option<String>> = (0..3)
        .map(|_| handle_utterance(&kb, &mut state, "I like Titanic", Radius::Within(3)).unwrap().chosen)
        .collect();
    let attr = |s: &Option<String>| s.as_ref().unwrap().rsplit(',').next().unwrap().trim_end_matches(')').to_string();
    assert_eq!(picks.iter().map(attr).collect::<Vec<_>>(), ["leonardo_dicaprio", "awards", "trivia"]);
}

#[test]
fn children_never_see_adult_titles() {
    let kb = MovieKb::bundled();
    let adult = kb.adult_movies();
    assert!(!adult.is_empty());
    let children: Vec<String> = kb.users().into_iter().filter(|u| kb.has_fact(&format!("age_category({u},children)"))).collect();
    assert!(!children.is_empty());
    let adult_like = |user: &str, atom: &str, value: bool| {
        value && adult.iter().any(|m| atom == format!("like_movie({user},{m})"))
    };
    for user in &children {
        let mut state = DialogState::new("c", user.clone());
        for title in &adult {
            let topic = Topic { kind: TopicKind::Movie, name: title.clone() };
            let turn = next_turn(&kb, &state, &topic, Radius::Unbounded).unwrap();
            assert_eq!(turn.kind, TurnKind::Declined, "{user} / {title}");
            assert!(turn.rcc.is_none());
            state.apply("adult title", turn);
        }
        for title in kb.movies().iter().filter(|m| !adult.contains(m)) {
            let topic = Topic { kind: TopicKind::Movie, name: title.clone() };
            // Radius-bounded RCCs are subsets of the unbounded one.
            let turn = next_turn(&kb, &state, &topic, Radius::Unbounded).unwrap();
            for m in turn.rcc.iter().flat_map(|r| &r.members) {
                assert!(!adult_like(user, &m.atom, m.value), "{user} / {title}: {}", m.atom);
            }
        }
    }
}

#[test]
fn actor_and_director_points_exclude_each_other() {
    let kb = MovieKb::bundled();
    for user in kb.users() {
        for movie in kb.movies() {
            let topic = format!("like_movie({user},{movie})");
            let p = kb.ground_for_user(&user, &facts(&[&topic])).unwrap();
            let id = p.atoms().lookup(&topic).unwrap();
            let Ok(r) = compute_rcc_with(&p, id, Radius::Unbounded, CHAT_METRIC) else { continue };
            for m in kb.movies() {
                let on = |attr: &str| {
                    p.atoms().lookup(&format!("talk_preference({user},{m},{attr})")).is_some_and(|a| r.model.value(a) == Some(true))
                };
                let oscar = kb.objects("movie_director", &m).iter().any(|d| kb.has_fact(&format!("director_award({d},oscar)")));
                assert!(!(on("actor") && on("director")) || oscar, "{user} {m}");
            }
        }
    }
}

#[test]
fn load_kb_edge_cases() {
    let kb = load_kb("movie(a). movie(b).", "").unwrap();
    assert_eq!(kb.movies(), ["a", "b"]);
    assert!(kb.rules().is_empty());
    let err = load_kb("movie(a).", "p(X) :- not q(X).").unwrap();
    assert!(matches!(kb_ground_error(&err), Some(KbError::Ground(_))));
    let err = load_kb("movie(a", "").unwrap_err();
    assert!(err.to_string().starts_with("facts:1:"));
}

fn kb_ground_error(kb: &MovieKb) -> Option<KbError> {
    kb.ground_for_user("x", &BTreeSet::new()).err()
}

#[test]
fn load_from_directory() {
    let dir = tempfile::tempdir().unwrap();
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for f in ["movies.lp", "users.lp", "rules.lp"] {
        std::fs::copy(data.join(f), dir.path().join(f)).unwrap();
    }
    let kb = MovieKb::load_dir(dir.path()).unwrap();
    assert!(kb.phrases().is_empty());
    assert_eq!(kb.movies(), MovieKb::bundled().movies());
    std::fs::write(dir.path().join("rules.lp"), "p(X) :- q(X)").unwrap();
    let err = MovieKb::load_dir(dir.path()).unwrap_err();
    assert!(err.to_string().starts_with("rules.lp:"), "{err}");
}
