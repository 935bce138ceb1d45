use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn lbisim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lbisim")).args(args).env_remove("LBISIM_MAX_PAIRS").output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    format!("@{}", p.display())
}

#[test]
fn asynchronous_example() {
    let la = lbisim(&["check", "--calculus", "accs", "--rel", "l-bisim", "--labels", "LA", "a.'a + tau.0", "tau.0"]);
    assert_eq!(code(&la), 0, "{}", stdout(&la));
    assert!(stdout(&la).starts_with("equivalent"));

    let asy = lbisim(&["check", "--calculus", "accs", "--rel", "async", "a.'a + tau.0", "tau.0"]);
    assert_eq!(code(&asy), 0);

    let ipo = lbisim(&["--format", "json", "check", "--calculus", "accs", "--rel", "ipo", "a.'a + tau.0", "tau.0"]);
    assert_eq!(code(&ipo), 1);
    let v = json(&ipo);
    assert_eq!(v["verdict"], false);
    let last = v["witness"].as_array().unwrap().last().unwrap();
    assert_eq!(last["label"], "-|'a");
    assert_eq!(last["attacker"], "left");
}

#[test]
fn ambient_restriction_is_observable() {
    let o = lbisim(&["check", "--calculus", "ma", "--rel", "l-bisim", "--labels", "LM", "n[0]", "(nu n) n[0]"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("open n"), "{}", stdout(&o));

    let same = lbisim(&["check", "--calculus", "ma", "--rel", "l-bisim:LM", "(nu n) n[0]", "(nu m) m[0]"]);
    assert_eq!(code(&same), 0);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(code(&lbisim(&["check", "--rel", "strong", "a.(", "0"])), 2);
    assert_eq!(code(&lbisim(&["check", "--rel", "nonsense", "0", "0"])), 2);
    assert_eq!(code(&lbisim(&["check", "--rel", "strong", "--labels", "LA", "0", "0"])), 2);
    assert_eq!(code(&lbisim(&["check", "--calculus", "ccs", "--rel", "async", "0", "0"])), 2);
    assert_eq!(code(&lbisim(&["check", "--calculus", "lambda", "--rel", "strong", "0", "0"])), 2);
    assert_eq!(code(&lbisim(&["check", "--rel", "strong", "--mode", "eager", "0", "0"])), 2);
    assert_eq!(code(&lbisim(&["check", "--rel", "strong", "@/nonexistent/term", "0"])), 2);
    assert_eq!(code(&lbisim(&["reduce", "--format", "dot", "0"])), 2);
    assert_eq!(code(&lbisim(&["frobnicate"])), 2);
}

#[test]
fn budget_exhaustion_exits_3() {
    let args = ["check", "--rel", "strong", "a.b.c.0", "a.(b.c.0 + b.c.0)"];
    let mut small = vec!["--max-pairs", "1"];
    small.extend(args);
    let o = lbisim(&small);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));

    let env = Command::new(env!("CARGO_BIN_EXE_lbisim")).args(args).env("LBISIM_MAX_PAIRS", "1").output().unwrap();
    assert_eq!(env.status.code(), Some(3));
    assert_eq!(code(&lbisim(&args)), 0);
}

#[test]
fn terms_and_labels_from_files() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "p.ccs", "a.'a + tau.0\n");
    let q = write(&dir, "q.ccs", "tau.0\n");
    let labels = write(&dir, "labels", "# asynchronous observer contexts\nLA\n");
    let o = lbisim(&["check", "--calculus", "accs", "--rel", "l-bisim", "--labels", &labels, &p, &q]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    // a single pattern: only parallel outputs on `a`
    let pat = write(&dir, "pat", "-|'a\n");
    let o = lbisim(&["check", "--calculus", "accs", "--rel", "l-bisim", "--labels", &pat, &p, &q]);
    assert_eq!(code(&o), 1);
}

#[test]
fn instantiate_mode_with_pool() {
    let dir = TempDir::new().unwrap();
    let pool = write(&dir, "pool", "# processes plugged into label holes\n0\n'a\nnames: a b\n");
    let mode = format!("instantiate:{pool}");
    let o = lbisim(&["check", "--calculus", "accs", "--rel", "ipo", "--mode", &mode, "a.'a + tau.0", "tau.0"]);
    assert_eq!(code(&o), 1);
    let o = lbisim(&["check", "--calculus", "accs", "--rel", "ipo", "--mode", "instantiate", "a.0", "a.0 | 0"]);
    assert_eq!(code(&o), 0);
    let bad = write(&dir, "bad", "a.(\n");
    let o = lbisim(&["check", "--rel", "ipo", "--mode", &format!("instantiate:{bad}"), "0", "0"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn lts_outputs() {
    let o = lbisim(&["--format", "json", "lts", "--kind", "ordinary", "a.0 + tau.'b.0"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["root"], "tau.'b.0 + a.0");
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);

    let dot = lbisim(&["lts", "--calculus", "ma", "--format", "dot", "open n.0 | n[0]"]);
    assert_eq!(code(&dot), 0);
    let text = stdout(&dot);
    assert!(text.starts_with("digraph lts {") && text.trim_end().ends_with('}'));
    assert!(text.contains("doublecircle"));

    let its = lbisim(&["lts", "--calculus", "ma", "open n.0 | n[0]"]);
    assert!(stdout(&its).contains("(Tau)"), "{}", stdout(&its));

    let capped = lbisim(&["lts", "--max-states", "1", "a.b.c.0"]);
    assert_eq!(code(&capped), 3);
}

#[test]
fn reduce_and_barbs() {
    let o = lbisim(&["reduce", "--calculus", "ma", "open n.k[0] | n[j[0]]"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "Open j[0] | k[0]");

    let j = json(&lbisim(&["--format", "json", "reduce", "a.0 | 'a.0 | b.0 | 'b.0"]));
    assert_eq!(j.as_array().unwrap().len(), 2);

    let b = lbisim(&["barbs", "--calculus", "ma", "n[0] | (nu m) m[0]"]);
    assert_eq!(stdout(&b).trim(), "n");
    let b = json(&lbisim(&["--format", "json", "barbs", "a.0 | 'b.0"]));
    assert_eq!(b.as_array().unwrap().len(), 2);
}

#[test]
fn predicates() {
    let t = lbisim(&["pred", "tau", "tau.b.0", "b.0"]);
    assert_eq!(code(&t), 0);
    let f = lbisim(&["pred", "tau", "tau.b.0", "tau.b.0"]);
    assert_eq!(code(&f), 1);
    let v = json(&lbisim(&["--format", "json", "pred", "tau", "tau.b.0", "b.0"]));
    assert_eq!(v["holds"], true);
    assert_eq!(code(&lbisim(&["pred", "open", "--calculus", "ccs", "a.0", "0"])), 2);
}

#[test]
fn corpus_suite() {
    let dir = TempDir::new().unwrap();
    let spec = write(
        &dir,
        "suite.json",
        r#"{"calculus": "accs", "max_size": 2, "checks": ["correspondence", "coincide:async=l-bisim:LA", "laws:async"]}"#,
    );
    let path = spec.trim_start_matches('@');
    assert!(Path::new(path).exists());
    let o = lbisim(&["--format", "json", "corpus", path]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);

    let again = lbisim(&["--format", "json", "--seed", "9", "corpus", path]);
    assert_eq!(json(&again)["rows"], v["rows"]);

    // ipo is strictly finer than L_A, so this coincidence fails
    let failing = write(
        &dir,
        "fail.json",
        r#"{"calculus": "accs", "pairs": [["a.'a + tau.0", "tau.0"]], "checks": ["coincide:ipo=l-bisim:LA"]}"#,
    );
    let o = lbisim(&["corpus", failing.trim_start_matches('@')]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));

    let bad = write(&dir, "bad.json", r#"{"calculus": "ccs", "checks": [], "bogus": 1}"#);
    assert_eq!(code(&lbisim(&["corpus", bad.trim_start_matches('@')])), 2);
}

#[test]
fn lts_kind_switches_and_stdin() {
    let v = json(&lbisim(&["--format", "json", "lts", "--calculus", "ma", "--its", "open n.0"]));
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 1);
    assert_eq!(edges[0]["label"], "-|n[@X1]");

    let v = json(&lbisim(&["--format", "json", "lts", "--calculus", "ccs", "--its", "0"]));
    assert!(v["edges"].as_array().unwrap().is_empty());

    let v = json(&lbisim(&["--format", "json", "lts", "--calculus", "accs", "--ordinary", "'a"]));
    assert_eq!(v["edges"][0]["label"], "'a");
    assert_eq!(v["edges"][0]["target"], "0");

    assert_eq!(code(&lbisim(&["lts", "--its", "--ordinary", "0"])), 2);

    let mut child = Command::new(env!("CARGO_BIN_EXE_lbisim"))
        .args(["check", "--rel", "strong", "@-", "a.0 | 0"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(b"a.0\n").unwrap();
    assert_eq!(child.wait_with_output().unwrap().status.code(), Some(0));
}
