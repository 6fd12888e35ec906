use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

use newtloj::engine::check_isolated;
use newtloj::parser::parse_json;
use newtloj::{lojasiewicz, parse_polynomial};

const WORKED: &str = "(x^4 + y^3)*z + x^4*y + (1/4)*y^4 + x^6 + z^5";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_newtloj")).args(args).env_remove("NEWTLOJ_SEED").output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_newtloj"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn compute_text() {
    let o = run(&["compute", "--poly", WORKED]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("exponent: 13/3\n"), "{text}");
    assert!(text.contains("sufficiency degree: 5\n"));
    assert!(text.contains("assumption: "));
}

#[test]
fn compute_json_matches_library() {
    let v = json(&run(&["--json", "compute", "--poly", WORKED]));
    let report = lojasiewicz(&parse_polynomial(WORKED, 3).unwrap()).unwrap();
    let mut lib = serde_json::to_value(&report).unwrap();
    lib.as_object_mut().unwrap().insert("input".into(), v["input"].clone());
    assert_eq!(v, lib);
    assert_eq!(v["exponent"], "13/3");
}

#[test]
fn output_is_reproducible() {
    let args = ["--json", "compute", "--oracle", "--poly", WORKED];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn sequential_and_parallel_agree() {
    let batch = "x*y + z^5\nx^2 + y^3 + z^4\n# comment\n\n".to_string() + WORKED + "\n";
    let par = run_stdin(&["--json", "compute", "--input", "-"], &batch);
    let seq = run_stdin(&["--json", "--sequential", "compute", "--input", "-"], &batch);
    assert_eq!(par.stdout, seq.stdout);
    let v = json(&par);
    let exps: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["exponent"].as_str().unwrap()).collect();
    assert_eq!(exps, ["4", "3", "13/3"]);
}

#[test]
fn json_input_file() {
    let dir = std::env::temp_dir().join(format!("newtloj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("in.json");
    std::fs::write(&path, r#"[{"vars":["x","y"],"monomials":[{"e":[3,0]},{"e":[0,2],"c":"-2/3"}]},{"vars":["x","y"],"monomials":[{"e":[1,1]}]}]"#).unwrap();
    let v = json(&run(&["--json", "compute", "--input", path.to_str().unwrap()]));
    assert_eq!(v[0]["exponent"], "2");
    assert_eq!(v[1]["exponent"], "1");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn oracle_summary() {
    let v = json(&run(&["--json", "compute", "--oracle", "--poly", "x^3 + y^5 + z^4"]));
    assert_eq!(v["oracle"]["brute_force_checked"], true);
    assert_eq!(v["oracle"]["bound"], "4");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["compute", "--poly", "x^2 +"]).status.code(), Some(2));
    assert_eq!(run(&["compute", "--input", "/nonexistent/newtloj"]).status.code(), Some(2));
    // not isolated: y^2 alone misses the x and z axes
    let o = run(&["compute", "--poly", "x*y + y^2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("newtloj: "));
    assert_eq!(run(&["export", "--dim", "2", "--poly", "x^2 + y^3"]).status.code(), Some(3));
    assert_eq!(run(&["selftest", "--quick", "--corrupt"]).status.code(), Some(4));
}

#[test]
fn classify_reports_faces() {
    let v = json(&run(&["--json", "classify", "--poly", "x*z + y*z + y^3"]));
    assert_eq!(v["isolated"]["ok"], true);
    let faces = v["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 1);
    assert_eq!(faces[0]["classification"]["exceptional_axes"], serde_json::json!(["z"]));
    let text = stdout(&run(&["classify", "--poly", "x*z + y*z + y^3"]));
    assert!(text.contains("exceptional: z"), "{text}");
}

#[test]
fn classify_non_isolated_is_not_an_error() {
    let o = run(&["classify", "--poly", "x*y + y^2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("isolated: no"));
}

#[test]
fn mixed_volume_of_a_face() {
    let v = json(&run(&["--json", "classify", "--poly", WORKED]));
    let face = v["faces"]
        .as_array()
        .unwrap()
        .iter()
        .find(|f| f["face"]["normal"] == serde_json::json!([3, 4, 4]))
        .unwrap()["face"]["id"]
        .to_string();
    let mv = json(&run(&["--json", "mv", "--poly", WORKED, "--face", &face, "--axis", "x"]));
    assert_eq!(mv["mixed_volume"], "3");
    let text = stdout(&run(&["mv", "--poly", WORKED, "--face", &face, "--axis", "x"]));
    assert!(text.contains("mixed volume: 3\n"), "{text}");
}

#[test]
fn export_off() {
    let o = run(&["export", "--poly", "x^2 + y^2 + z^2"]);
    assert_eq!(stdout(&o), "OFF\n3 1 0\n0 0 2\n0 2 0\n2 0 0\n3 0 2 1\n");
    let dir = std::env::temp_dir().join(format!("newtloj-off-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("b.off");
    let o = run(&["export", "--poly", "x*y + z^5", "-o", path.to_str().unwrap()]);
    assert!(o.status.success() && o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "OFF\n2 0 0\n0 0 5\n1 1 0\n# edge 0 1\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn random_is_seeded_and_isolated() {
    for seed in 0..10u64 {
        for dim in ["2", "3"] {
            let args = ["--seed", &seed.to_string(), "random", "--dim", dim];
            let a = run(&args);
            assert_eq!(a.stdout, run(&args).stdout);
            let s = parse_json(&stdout(&a), None).unwrap();
            assert!(check_isolated(&s).ok, "{}", stdout(&a));
        }
    }
    let env = Command::new(env!("CARGO_BIN_EXE_newtloj")).arg("random").env("NEWTLOJ_SEED", "5").output().unwrap();
    assert_eq!(env.stdout, run(&["--seed", "5", "random"]).stdout);
}

#[test]
fn quick_selftest_passes() {
    let o = run(&["selftest", "--quick"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("[PASS]")).count(), 5);
}
