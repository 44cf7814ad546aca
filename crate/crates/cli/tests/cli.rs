use std::io::Write;
use std::process::{Command, Output, Stdio};

fn zw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zw"))
        .args(args)
        .env_remove("ZW_CAPS")
        .output()
        .expect("binary runs")
}

fn zw_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_zw"))
        .args(args)
        .env_remove("ZW_CAPS")
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

fn ok(args: &[&str]) -> String {
    let o = zw(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn documented_examples() {
    assert_eq!(ok(&["rat", "encode", "2"]), "2:2,3:1\n");
    assert_eq!(ok(&["schreier", "member", "--xi", "w", "--set", "3,5,9"]), "true\n");
    assert_eq!(ok(&["word", "subst", "--p", "0", "--q", "0", "--word", "-1:v,1:v"]), "-1:v,1:v\n");
}

#[test]
fn word_commands() {
    assert_eq!(ok(&["word", "subst", "--p", "2", "--q", "5", "--word", "-3:v,1:v"]), "-3:-3,1:1\n");
    assert_eq!(ok(&["word", "concat", "--word", "-1:v,1:v", "--word", "-2:-1,2:2"]), "-2:-1,-1:v,1:v,2:2\n");
    assert_eq!(ok(&["word", "merge", "--word", "1:1,2:v", "--word", "2:2,3:3"]), "1:1,2:v,3:3\n");
    let ev = ok(&["word", "ev", "--tuple", "-1:v,1:v;-2:v,2:v"]);
    assert!(ev.lines().any(|l| l == "-2:v,-1:v,1:v,2:v"));
    let check = ok(&["word", "check", "--word", "-1:v,2:2"]);
    assert!(check.contains("two_sided: false"));
}

#[test]
fn ordinal_and_schreier_commands() {
    assert_eq!(ok(&["ordinal", "cmp", "w^2", "w*7"]), ">\n");
    assert_eq!(ok(&["ordinal", "fund", "w^2", "--n", "3"]), "w*3+1\n");
    assert_eq!(ok(&["ordinal", "pred", "w^2", "--n", "3"]), "w*2+2\n");
    assert_eq!(ok(&["schreier", "enum", "--xi", "w", "--n", "4"]), "1\n2,3\n2,4\n");
    assert_eq!(ok(&["schreier", "canon", "--xi", "2", "--seq", "1,2,3"]).lines().next(), Some("decomposition: [1,2]|3"));
    assert_eq!(ok(&["schreier", "check-restriction", "--xi", "w", "--n", "3"]), "true\n");
}

#[test]
fn rational_commands() {
    assert_eq!(ok(&["rat", "decode", "2:2,3:1"]), "2\n");
    let w = ok(&["rat", "encode", "-7/12"]);
    assert_eq!(ok(&["rat", "decode", w.trim()]), "-7/12\n");
    let o = zw(&["rat", "precedes", "2", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn family_commands_read_stdin() {
    let dir = std::env::temp_dir().join(format!("zw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pool = dir.join("pool.txt");
    std::fs::write(&pool, "-1:v,1:v\n-2:v,2:v\n-3:v,3:v\n").unwrap();
    let pool = pool.to_str().unwrap();
    let o = zw_stdin(&["family", "closure", "--family", "-", "--pool", pool], "-1:v,1:v;-3:v,3:v\n");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "\n-3:v,3:v\n-1:v,1:v\n-1:v,1:v;-3:v,3:v\n");
    let o = zw_stdin(&["family", "cbindex", "--family", "-", "--pool", pool, "--tau", "1"], "\n");
    assert_eq!(stdout(&o), "1\n");
    assert_eq!(ok(&["family", "cbindex", "--set-m", "2", "--ground", "12", "--tau", "3"]), "3\n");
}

#[test]
fn search_commands() {
    let out = ok(&["search", "hj", "--seed", "3", "--arity", "2", "--bounds", "2", "--n", "2", "--radius", "4"]);
    assert!(out.contains("verified: true"), "{out}");
    assert_eq!(ok(&["search", "fs", "--xs", "1,10,100"]).lines().count(), 7);
    assert_eq!(ok(&["search", "psi", "--word", "-1:-1,2:2"]), "5\n");
    let o = zw_stdin(&["search", "hj", "--coloring", "-", "--bounds", "1", "--n", "2", "--radius", "1"], "-1:-1,1:1\t0\n");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness: -1:v,1:v"));
}

#[test]
fn json_wraps_the_same_fields() {
    let v: serde_json::Value = serde_json::from_str(&ok(&["--json", "rat", "encode", "2"])).unwrap();
    assert_eq!(v["word"], "2:2,3:1");
    let v: serde_json::Value = serde_json::from_str(&ok(&["--json", "schreier", "member", "--xi", "2", "--set", "1,2"])).unwrap();
    assert_eq!(v["member"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(zw(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(zw(&["rat", "encode"]).status.code(), Some(2));
    assert_eq!(zw(&["rat", "encode", "0"]).status.code(), Some(1));
    assert_eq!(zw(&["word", "check", "--word", "1:5"]).status.code(), Some(1));
    assert_eq!(zw(&["search", "hj", "--bounds", "1", "--n", "2", "--radius", "1"]).status.code(), Some(2));
}

#[test]
fn caps_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_zw"))
        .args(["schreier", "enum", "--xi", "2", "--n", "8"])
        .env("ZW_CAPS", "schreier=5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_zw"))
        .args(["rat", "encode", "1"])
        .env("ZW_CAPS", "nonsense")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["search", "hj", "--seed", "11", "--arity", "3", "--bounds", "2", "--n", "3", "--radius", "3"];
    let a = zw(&args);
    let b = zw(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("elapsed"));
}
