use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slidebij")).args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_slidebij"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn counts_by_each_method() {
    for (method, want) in [("recursion", "8"), ("multinomial", "12"), ("slide-omega", "8"), ("slide-psi", "12"), ("cpf", "8")] {
        let o = run(&["count", "1,0,2,1", "--method", method]);
        assert!(o.status.success(), "{method}");
        assert_eq!(stdout(&o).trim(), want, "{method}");
    }
    let omega = stdout(&run(&["count", "0,0,2,1,1,2", "--method", "slide-omega"]));
    assert_eq!(omega, stdout(&run(&["count", "0,0,2,1,1,2", "--method", "cpf"])));
}

#[test]
fn enumeration_matches_count() {
    let o = run(&["enumerate", "0,0,0,4", "--set", "slide-omega"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    let o = run(&["enumerate", "1,0,2,1", "--set", "slide-psi", "--format", "json"]);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 12);
    for l in &lines {
        let v: serde_json::Value = serde_json::from_str(l).unwrap();
        assert_eq!(v["schema"], 1);
    }
    let words = stdout(&run(&["enumerate", "1,1,1", "--set", "cat-words-omega"]));
    let avoiders = stdout(&run(&["avoid", "1,1,1", "--pattern", "23-1"]));
    assert_eq!(words, avoiders);
    let dot = stdout(&run(&["enumerate", "1,1", "--set", "slide-omega", "--format", "dot"]));
    assert_eq!(dot.matches("graph").count(), 2);
}

#[test]
fn map_round_trips() {
    let tree = stdout(&run(&["map", "--from", "cpf", "--to", "tree", "--input", "1:7,2:5,3:7,4:4,5:8,6:5,7:3,8:7"]));
    let same = stdout(&run(&["map", "--from", "word", "--to", "tree", "--input", "73584757"]));
    assert_eq!(tree, same);
    let o = run_stdin(&["map", "--from", "tree", "--to", "word", "--input", "-"], &tree);
    assert_eq!(stdout(&o).trim(), "73584757");
    let o = run_stdin(&["map", "--from", "tree", "--to", "cpf", "--input", "-"], &tree);
    assert_eq!(stdout(&o).trim(), "1:7,2:5,3:7,4:4,5:8,6:5,7:3,8:7");
    let perm_tree = stdout(&run(&["map", "--from", "perm", "--to", "tree", "--input", "853769421"]));
    let o = run(&["map", "--from", "tree", "--to", "perm", "--input", perm_tree.trim()]);
    assert_eq!(stdout(&o).trim(), "853769421");
}

#[test]
fn labeling_outcomes() {
    let o = run(&["label", "(a,b,(c,(1,(2,3))))", "--comp", "0,1,2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "(a,b,(c,(1,(2,3):3):3):2)");
    let o = run(&["label", "(a,b,c)", "--comp", ""]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["label", "(a,b,((c,3),(1,2)))", "--comp", "0,1,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["step"], 3);
    assert_eq!(v["labeled"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", "1,x"]).status.code(), Some(2));
    assert_eq!(run(&["count", "1,0,1,1", "--method", "slide-omega"]).status.code(), Some(3));
    assert_eq!(run(&["map", "--from", "word", "--to", "tree", "--input", "11"]).status.code(), Some(3));
    assert_eq!(run(&["map", "--from", "perm", "--to", "tree", "--input", "112"]).status.code(), Some(3));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_slidebij"))
        .args(["enumerate", "0,0,0,0,0,0,0,8", "--set", "slide-psi"])
        .env("SLIDEBIJ_MAX_N", "6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_passes_and_catches_injected_fault() {
    let o = run(&["verify", "--max-n", "4", "--suite", "all"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(stdout(&o).matches("[PASS]").count(), 9);
    let o = run(&["verify", "--max-n", "3", "--suite", "structure", "--inject-fault", "flip-comparison"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample"));
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--max-n", "4", "--suite", "bijection", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["enumerate", "0,1,2,1", "--set", "slide-omega"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}
