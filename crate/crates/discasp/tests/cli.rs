use std::path::PathBuf;
use std::process::{Command, Output};

fn program(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../programs").join(name)
}

fn discasp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discasp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn solve_program_six_text_and_json_agree() {
    let p6 = program("program6.lp");
    let text = discasp(&["solve", p6.to_str().unwrap(), "--query", "p"]);
    assert_eq!(text.status.code(), Some(0));
    assert_eq!(stdout(&text), "Answer 1: j k m n o p q r s t w not u not v not x\n");

    let json = discasp(&["solve", p6.to_str().unwrap(), "--query", "p", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    let models = doc["models"].as_array().unwrap();
    assert_eq!(models.len(), 1);
    let t: Vec<&str> = models[0]["true"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let f: Vec<&str> = models[0]["false"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(t, ["j", "k", "m", "n", "o", "p", "q", "r", "s", "t", "w"]);
    assert_eq!(f, ["u", "v", "x"]);

    let again = discasp(&["solve", p6.to_str().unwrap(), "--query", "p", "--output", "json"]);
    assert_eq!(again.stdout, json.stdout);
}

#[test]
fn stable_even_loop_has_two_models() {
    let o = discasp(&["stable", program("even_loop.lp").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Stable 1: p\nStable 2: q\n");
}

#[test]
fn exit_codes() {
    let odd = discasp(&["solve", program("odd_loop.lp").to_str().unwrap(), "--query", "p"]);
    assert_eq!(odd.status.code(), Some(2));
    assert!(!odd.stderr.is_empty());

    let none = discasp(&["solve", program("positive_loop.lp").to_str().unwrap(), "--query", "p"]);
    assert_eq!(none.status.code(), Some(1));

    let missing_query = discasp(&["solve", program("even_loop.lp").to_str().unwrap()]);
    assert_eq!(missing_query.status.code(), Some(2));

    let unknown = discasp(&["solve", program("even_loop.lp").to_str().unwrap(), "--query", "zz"]);
    assert_eq!(unknown.status.code(), Some(2));

    let no_file = discasp(&["solve", "/nonexistent.lp", "--query", "p"]);
    assert_eq!(no_file.status.code(), Some(2));

    let bad_flag = discasp(&["solve", "--frobnicate"]);
    assert_eq!(bad_flag.status.code(), Some(2));
}

#[test]
fn query_directive_in_file() {
    let o = discasp(&["solve", program("movie_small.lp").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("talk_preference(john,titanic,leonardo_dicaprio)"));
}

#[test]
fn check_file_and_random() {
    let o = discasp(&["check", program("program6.lp").to_str().unwrap(), "--query", "p"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS: all answers subset-sound"));

    let r = Command::new(env!("CARGO_BIN_EXE_discasp"))
        .args(["check", "--random", "60"])
        .env("DISCASP_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("seed 42"));
}

#[test]
fn rcc_with_explanations() {
    let p6 = program("program6.lp");
    let o = discasp(&["rcc", p6.to_str().unwrap(), "--query", "q", "--radius", "2", "--json", "--explain"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["topic"], "q");
    assert_eq!(doc["radius"], 2);
    let mut members: Vec<String> = doc["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| format!("{}{}", if m["value"] == true { "" } else { "not " }, m["atom"].as_str().unwrap()))
        .collect();
    members.sort();
    assert_eq!(members, ["n", "not x", "p", "q", "r", "s", "t"]);
    assert_eq!(doc["paths"].as_array().unwrap().len(), 6);

    let zero = discasp(&["rcc", p6.to_str().unwrap(), "--query", "q", "--radius", "0"]);
    assert_eq!(stdout(&zero), "0\tq\n");
}

#[test]
fn graph_formats() {
    let even = program("even_loop.lp");
    let json = discasp(&["graph", even.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 2);
    let dot = discasp(&["graph", even.to_str().unwrap(), "--format", "dot"]);
    assert!(stdout(&dot).starts_with("digraph"));
}
