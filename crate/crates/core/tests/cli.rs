use std::path::{Path, PathBuf};

use tempfile::TempDir;
use topl::cli::{run, EXIT_INVALID, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION};
use topl::json::{hl_to_json, parse_automaton, parse_word, topl_to_json};
use topl::monitor::Event;
use topl::samples;
use topl::translate::emptiness;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn topl(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("topl").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn taint_trace() -> String {
    let get = "javax.servlet.http.HttpServletRequest.getParameter";
    [
        Event::call(get, &["req", "p"]),
        Event::ret(get, Some("v1")),
        Event::call("java.sql.Statement.executeQuery", &["stmt", "v1"]),
    ]
    .iter()
    .map(|e| e.to_json() + "\n")
    .collect()
}

#[test]
fn check_taint_with_path() {
    let dir = TempDir::new().unwrap();
    let prop = write(&dir, "taint.topl", samples::TAINT_PROPERTY);
    let trace = write(&dir, "t.jsonl", &taint_trace());
    let r = topl(&["check", "--property", s(&prop), "--trace", s(&trace), "--report-path"]);
    assert_eq!(r.code, EXIT_VIOLATION, "{}", r.stderr);
    let report: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let verdicts = report["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 1);
    assert_eq!(verdicts[0]["matched_at"], 3);
    let path = verdicts[0]["path"].as_array().unwrap();
    assert_eq!(path.last().unwrap()["to"], "error");
    assert_eq!(path.last().unwrap()["last_event"], 3);

    let again = topl(&["check", "--property", s(&prop), "--trace", s(&trace), "--report-path"]);
    assert_eq!(again.stdout, r.stdout);

    let text = topl(&["check", "--property", s(&prop), "--trace", s(&trace), "--format", "text"]);
    assert_eq!(text.code, EXIT_VIOLATION);
    assert!(text.stdout.starts_with("violation at event 3\n"));
}

#[test]
fn check_compiled_automaton_and_clean_trace() {
    let dir = TempDir::new().unwrap();
    let prop = write(&dir, "taint.topl", samples::TAINT_PROPERTY);
    let aut = dir.path().join("taint.json");
    let c = topl(&["compile", s(&prop), "-o", s(&aut)]);
    assert_eq!(c.code, EXIT_OK, "{}", c.stderr);
    assert!(c.stdout.is_empty());
    let trace = write(&dir, "t.jsonl", &taint_trace());
    let r = topl(&["check", "--automaton", s(&aut), "--trace", s(&trace)]);
    assert_eq!(r.code, EXIT_VIOLATION, "{}", r.stderr);

    let clean = write(&dir, "clean.jsonl", &taint_trace().lines().take(2).collect::<Vec<_>>().join("\n"));
    let r = topl(&["check", "--automaton", s(&aut), "--trace", s(&clean)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
}

#[test]
fn check_trace_errors() {
    let dir = TempDir::new().unwrap();
    let prop = write(&dir, "taint.topl", samples::TAINT_PROPERTY);
    let trace = write(&dir, "t.jsonl", &(String::from("garbage\n") + &taint_trace()));
    let lenient = topl(&["check", "--property", s(&prop), "--trace", s(&trace)]);
    assert_eq!(lenient.code, EXIT_VIOLATION);
    let report: serde_json::Value = serde_json::from_str(&lenient.stdout).unwrap();
    assert_eq!(report["warnings"][0]["line"], 1);
    let strict = topl(&["check", "--property", s(&prop), "--trace", s(&trace), "--strict-trace"]);
    assert_eq!(strict.code, EXIT_INVALID);
    assert!(strict.stderr.contains("line 1"));
    let zero = topl(&["check", "--property", s(&prop), "--trace", s(&trace), "--max-configs", "0"]);
    assert_eq!(zero.code, EXIT_INVALID);
}

#[test]
fn emptiness_of_ab_prints_replayable_witness() {
    let dir = TempDir::new().unwrap();
    let h = samples::ab_hl();
    let p = write(&dir, "ab.hl.json", &hl_to_json(&h));
    let r = topl(&["emptiness", s(&p)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let mut lines = r.stdout.lines();
    assert_eq!(lines.next(), Some("non-empty"));
    let w = parse_word(lines.next().unwrap().strip_prefix("witness: ").unwrap()).unwrap();
    assert!(topl::hl_accepts(&h, &w));

    let empty = samples::three_letter();
    let mut dead = empty.clone();
    dead.finals.clear();
    let p = write(&dir, "dead.json", &topl_to_json(&dead));
    assert_eq!(topl(&["emptiness", s(&p)]).stdout, "empty\n");
}

#[test]
fn member_three_letter() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "topl1.json", &topl_to_json(&samples::three_letter()));
    let acc = topl(&["member", s(&p), "--word", r#"[["1"],["2"],["3"]]"#]);
    assert_eq!((acc.code, acc.stdout.as_str()), (EXIT_OK, "accept\n"));
    let rej = topl(&["member", s(&p), "--word", r#"[["1"],["2"],["1"]]"#]);
    assert_eq!(rej.stdout, "reject\n");
    let wf = write(&dir, "w.json", r#"[["1"],["2"],["3"]]"#);
    assert_eq!(topl(&["member", s(&p), "--word-file", s(&wf)]).stdout, "accept\n");
    let wide = topl(&["member", s(&p), "--word", r#"[["1","2"]]"#]);
    assert_eq!(wide.code, EXIT_INVALID);
    let bad = topl(&["member", s(&p), "--word", "[["]);
    assert_eq!(bad.code, EXIT_USAGE);
}

#[test]
fn translate_targets() {
    let dir = TempDir::new().unwrap();
    let a = samples::three_letter();
    let p = write(&dir, "topl1.json", &topl_to_json(&a));
    let ra = topl(&["translate", s(&p), "--target", "ra"]);
    assert_eq!(ra.code, EXIT_OK, "{}", ra.stderr);
    let parsed = parse_automaton(&ra.stdout).unwrap();
    assert_eq!(parsed.automaton.registers(), 2 * a.registers + 1);
    assert_eq!(topl(&["translate", s(&p), "--target", "ra"]).stdout, ra.stdout);

    let hl = topl(&["translate", s(&p), "--target", "hl"]);
    let parsed = parse_automaton(&hl.stdout).unwrap();
    assert_eq!(parsed.automaton.states_len(), a.states.len() + 1);

    let ab = write(&dir, "ab.json", &hl_to_json(&samples::ab_hl()));
    let out = dir.path().join("ab.topl.json");
    let t = topl(&["translate", s(&ab), "--target", "topl", "-o", s(&out)]);
    assert_eq!(t.code, EXIT_OK, "{}", t.stderr);
    let back = parse_automaton(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(!emptiness(&back.automaton).unwrap().is_empty());
}

#[test]
fn usage_errors() {
    assert_eq!(topl(&["frobnicate"]).code, EXIT_USAGE);
    let r = topl(&["check", "--trace", "t.jsonl", "--bogus"]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.stderr.contains("Usage"));
    assert_eq!(topl(&["check", "--trace", "t.jsonl"]).code, EXIT_USAGE);
    assert_eq!(topl(&["translate", "a.json", "--target", "dfa"]).code, EXIT_USAGE);
    assert_eq!(topl(&["--help"]).code, EXIT_OK);
}

#[test]
fn invalid_inputs() {
    let dir = TempDir::new().unwrap();
    assert_eq!(topl(&["emptiness", "/nonexistent/file.json"]).code, EXIT_INVALID);
    let syntax = write(&dir, "bad.topl", "start -> error: (\n");
    assert_eq!(topl(&["compile", s(&syntax)]).code, EXIT_USAGE);
    let ill = write(&dir, "ill.topl", "start -> middle: *\n");
    assert_eq!(topl(&["compile", s(&ill)]).code, EXIT_INVALID);
    let mut broken = samples::three_letter();
    broken.initial = "nowhere".into();
    let p = write(&dir, "broken.json", &topl_to_json(&broken));
    let r = topl(&["member", s(&p), "--word", "[]"]);
    assert_eq!(r.code, EXIT_INVALID);
    assert!(r.stderr.contains("broken.json"));
}
