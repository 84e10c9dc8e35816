use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nilsolve"))
        .args(args)
        .env_remove("NILSOLVE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).lines().next().expect("one line of output")).expect("valid JSON")
}

const EX31: &str = "X b a1 c X a2 c^-3 a1 X = 1";

#[test]
fn example31_is_unsat() {
    let o = run(&["solve", "--group", &data("example31.json"), "--equation", EX31]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["verdict"], "unsat");
    assert!(r.get("witness").is_none());
}

#[test]
fn reduce_emits_the_linear_row() {
    let o = run(&["reduce", "--group", &data("example31.json"), "--equation", EX31]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    let rows = r["linear_eqs"].as_array().unwrap();
    let expected = serde_json::json!({"const": 2, "lin": [["X_1", 3]], "quad": [], "floors": []});
    assert!(rows.contains(&expected), "{r}");
}

#[test]
fn heisenberg_witness() {
    let o = run(&["solve", "--group", &data("heis.json"), "--equation", "X a1 = 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["witness"]["X"], "a1^-1");
}

#[test]
fn extension_files_are_solved_through_the_extension() {
    let ext = data("dihedral.json");
    let o = run(&["solve", "--extension", &ext, "--equation", "X X a^2 = 1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["witness"]["X"], "a^-1");
    let o = run(&["solve", "--extension", &ext, "--equation", "X X a = 1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["branches"].as_array().unwrap().len(), 2);
}

#[test]
fn check_accepts_every_data_file() {
    for f in ["example31.json", "heis.json", "integers.json"] {
        assert_eq!(run(&["check", "--group", &data(f)]).status.code(), Some(0), "{f}");
    }
    for f in ["dihedral.json", "heisenberg_c2.json"] {
        assert_eq!(run(&["check", "--extension", &data(f)]).status.code(), Some(0), "{f}");
    }
}

#[test]
fn malformed_presentations_are_input_errors() {
    let dir = std::env::temp_dir().join(format!("nilsolve-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(&bad, "{\"n\": 2}").unwrap();
    let o = run(&["check", "--group", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(65));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json"));
}

#[test]
fn unknown_symbols_name_their_position() {
    let o = run(&["solve", "--group", "heisenberg", "--equation", "X q = 1"]);
    assert_eq!(o.status.code(), Some(65));
    let err = String::from_utf8_lossy(&o.stderr).into_owned();
    assert!(err.contains("`q`") && err.contains("token 2"), "{err}");
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&["solve"]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["solve", "--group", "heisenberg", "--extension", "dihedral", "--equation", "X = 1"]).status.code(), Some(64));
}

#[test]
fn oracle_reports_the_first_witness() {
    let o = run(&["oracle", "--group", "heisenberg", "--equation", "X a1 = 1", "--bound", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["witness"]["X"], "a1^-1");
    let o = run(&["oracle", "--group", &data("example31.json"), "--equation", EX31, "--bound", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["found"], false);
}

#[test]
fn fuzz_is_clean_and_reproducible() {
    let args = ["fuzz", "--group", "example31", "--seed", "42", "--cases", "200", "--workers", "4"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["mismatches"], 0);
    assert_eq!(json(&a)["cases"], 200);
    assert_eq!(stdout(&a), stdout(&run(&args)));
}

#[test]
fn out_files_collect_reports_byte_for_byte() {
    let dir = std::env::temp_dir().join(format!("nilsolve-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (a, b) = (dir.join("a.jsonl"), dir.join("b.jsonl"));
    for out in [&a, &b] {
        let _ = std::fs::remove_file(out);
        let o = run(&["fuzz", "--seed", "7", "--cases", "25", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let a = std::fs::read(&a).unwrap();
    assert_eq!(a, std::fs::read(&b).unwrap());
    assert_eq!(a.iter().filter(|&&c| c == b'\n').count(), 25);
}

#[test]
fn seed_falls_back_to_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_nilsolve"))
        .args(["solve", "--group", "heisenberg", "--equation", "X a1 = 1"])
        .env("NILSOLVE_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(json(&o)["seed"], 99);
}

#[test]
fn equations_files_take_one_equation_per_line() {
    let dir = std::env::temp_dir().join(format!("nilsolve-eqs-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("eqs.txt");
    std::fs::write(&f, "# comment\nX a1 = 1\n\nX X a1 = 1\n").unwrap();
    let o = run(&["--format", "text", "solve", "--group", "heisenberg", "--equations", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 2, "{out}");
    assert!(out.lines().next().unwrap().contains("sat X = a1^-1"));
}

#[test]
fn replay_lines_rerun_the_case() {
    let o = run(&[
        "fuzz", "--group", "heisenberg", "--equation", "X a1 = 1", "--bound", "2", "--seed", "3",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["sat"], 1);
}
