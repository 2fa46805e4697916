use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orderax")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prove_exit_codes() {
    let o = run(&["prove", path(&corpus("G6.p"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("G6: refutation"));
    assert!(stdout(&o).contains("proof verified"));

    let o = run(&["prove", path(&corpus("I5-implies-I6.p"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("I5-implies-I6: saturated"));

    let o = run(&["prove", "missing.p"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.p"));
}

#[test]
fn prove_resource_flags() {
    let o = run(&["prove", path(&corpus("G5.p")), "--max-clauses", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("resource-out"));
    let o = run(&["prove", path(&corpus("G5.p")), "--pick-ratio", "0:0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["prove", path(&corpus("G1.p")), "--pick-ratio", "1:1", "--timeout", "5", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["verified"], true);
    assert_eq!(v["used_axioms"], serde_json::json!(["I.6"]));
}

#[test]
fn check_scripts() {
    for s in ["S1.nd", "S3.nd", "S8.nd"] {
        let o = run(&["check", path(&corpus(s))]);
        assert_eq!(o.status.code(), Some(0), "{s}: {}", stdout(&o));
        assert!(stdout(&o).contains(": ok"));
    }
}

#[test]
fn check_tampered_script() {
    let dir = std::env::temp_dir().join(format!("orderax-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(corpus("S1.nd")).unwrap().replace("premises=[3,2]", "premises=[2,3]");
    let file = dir.join("tampered-S1.nd");
    std::fs::write(&file, text).unwrap();
    let o = run(&["check", path(&file)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("rejected at step 4"), "{}", stdout(&o));

    std::fs::write(&file, "script X\nproblem G1\n1. nonsense ;").unwrap();
    assert_eq!(run(&["check", path(&file)]).status.code(), Some(2));
    std::fs::write(&file, "script X\nproblem Nowhere\ngoal false\n1. false ; Hypothesis\n").unwrap();
    assert_eq!(run(&["check", path(&file)]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn models_command() {
    let o = run(&["models", "--satisfy", "I.5,I.6,I.7,I.8,SYM", "--sizes", "1..4"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["models", "--satisfy", "I.5,I.6,I.8", "--falsify", "SYM", "--sizes", "1..3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["models"][0]["size"], 3);
    assert_eq!(v["models"][0]["rev"], serde_json::json!([1, 2, 0]));

    let o = run(&["models", "--satisfy", "I.5", "--falsify", "I.5", "--sizes", "1..2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("exhausted"));

    let o = run(&["models", "--satisfy", "forall l. Undir(l,rev(l)), I.5", "--sizes", "2..3", "--limit", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).matches("found model").count(), 3);

    assert_eq!(run(&["models", "--satisfy", "Undir(x,x)"]).status.code(), Some(2));
    assert_eq!(run(&["models", "--satisfy", "I.5", "--sizes", "1..5"]).status.code(), Some(2));
}

#[test]
fn corpus_reports_agree_across_jobs_and_formats() {
    let j1 = run(&["corpus", "--json", "--jobs", "1"]);
    let j4 = run(&["corpus", "--json", "--jobs", "4"]);
    assert_eq!(j1.status.code(), Some(0));
    assert_eq!(j1.stdout, j4.stdout);
    let text = run(&["corpus", "--text", "--jobs", "4"]);
    assert_eq!(text.status.code(), Some(0));
    let text = stdout(&text);
    let v: serde_json::Value = serde_json::from_str(&stdout(&j1)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let name = row["name"].as_str().unwrap();
        let verdict = if row["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" };
        let line = text.lines().find(|l| l.starts_with(&format!("{name} "))).unwrap();
        assert!(line.contains(verdict), "{line}");
    }
}
