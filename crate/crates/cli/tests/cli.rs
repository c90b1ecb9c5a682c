use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn octarec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octarec")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn worked() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/worked.json")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn periodicity_of_the_worked_state() {
    let w = worked();
    let out = octarec(&[
        "check-periodicity",
        "--m",
        "1",
        "--n",
        "1",
        "--seed",
        "7",
        "--samples",
        "4",
        "--input",
        path_str(&w),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("case 0: PASS c = 5 (boundary 5)"), "{text}");
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn value_and_formula_agree() {
    let w = worked();
    for point in ["1,1,4", "0,1,5", "1,0,3"] {
        let v = octarec(&["value", "--input", path_str(&w), "--point", point]);
        let f = octarec(&["formula", "--input", path_str(&w), "--point", point, "--path", "wbar"]);
        assert_eq!(v.status.code(), Some(0));
        assert_eq!(f.status.code(), Some(0));
        let last = |o: &Output| stdout(o).lines().last().unwrap().to_string();
        assert_eq!(last(&v), last(&f));
    }
    let v = octarec(&["value", "--input", path_str(&w), "--point", "1,1,4"]);
    assert_eq!(stdout(&v), "1,1,4 = 30\n");
}

#[test]
fn gen_is_deterministic() {
    let a = octarec(&["gen", "--m", "2", "--n", "3", "--seed", "1"]);
    let b = octarec(&["gen", "--m", "2", "--n", "3", "--seed", "1"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = octarec(&["gen", "--m", "2", "--n", "3", "--seed", "2"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn gen_evolve_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("start.json");
    let up = dir.path().join("up.json");
    let back = dir.path().join("back.json");
    for semifield in ["rational", "tropical"] {
        let g = octarec(&[
            "gen",
            "--m",
            "3",
            "--n",
            "2",
            "--seed",
            "5",
            "--semifield",
            semifield,
            "--output",
            path_str(&start),
        ]);
        assert_eq!(g.status.code(), Some(0));
        let e = octarec(&["evolve", "--input", path_str(&start), "--shift", "4", "--output", path_str(&up)]);
        assert_eq!(e.status.code(), Some(0), "{}", String::from_utf8_lossy(&e.stderr));
        let e = octarec(&["evolve", "--input", path_str(&up), "--shift", "-4", "--output", path_str(&back)]);
        assert_eq!(e.status.code(), Some(0));
        assert_eq!(std::fs::read_to_string(&start).unwrap(), std::fs::read_to_string(&back).unwrap());
    }
}

#[test]
fn counting_and_listing_matchings() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("s.json");
    std::fs::write(
        &state,
        r#"{"domain":{"shape":"rectangle","m":2,"n":2},"semifield":"rational",
            "heights":[[0,1,0],[1,0,1],[0,1,0]],"values":[["1","1","1"],["1","1","1"],["1","1","1"]]}"#,
    )
    .unwrap();
    let c = octarec(&["count", "--input", path_str(&state), "--point", "1,1,4", "--path", "both"]);
    assert_eq!(c.status.code(), Some(0), "{}", String::from_utf8_lossy(&c.stderr));
    let count: usize = stdout(&c).trim().parse().unwrap();
    let m = octarec(&["matchings", "--input", path_str(&state), "--point", "1,1,4"]);
    let text = stdout(&m);
    assert_eq!(text.lines().last().unwrap(), format!("{count} matchings"));
    let v = octarec(&["value", "--input", path_str(&state), "--point", "1,1,4"]);
    assert_eq!(stdout(&v), format!("1,1,4 = {count}\n"));
}

#[test]
fn variant_checks_pass() {
    for args in [
        vec!["check-quarter", "--size", "3", "--cases", "4", "--seed", "3"],
        vec!["check-half", "--size", "2", "--cases", "3", "--semifield", "tropical"],
        vec!["cube-check", "--size", "2", "--samples", "5", "--cases", "2"],
    ] {
        let out = octarec(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).lines().filter(|l| l.starts_with("case")).all(|l| l.contains("PASS")));
    }
}

#[test]
fn cube_slab_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("slab.json");
    let moved = dir.path().join("moved.json");
    let back = dir.path().join("back.json");
    assert_eq!(
        octarec(&["cube-evolve", "--size", "2", "--steps", "0", "--output", path_str(&start)]).status.code(),
        Some(0)
    );
    let out = octarec(&["cube-evolve", "--input", path_str(&start), "--steps", "5", "--output", path_str(&moved)]);
    assert_eq!(out.status.code(), Some(0));
    let out = octarec(&["cube-evolve", "--input", path_str(&moved), "--steps", "-5", "--output", path_str(&back)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&start).unwrap(), std::fs::read_to_string(&back).unwrap());
}

#[test]
fn json_report() {
    let w = worked();
    let out = octarec(&["check-periodicity", "--input", path_str(&w), "--samples", "3", "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["cases"][0]["c"], "5");
    assert_eq!(report["cases"][0]["ratios"].as_array().unwrap().len(), 3);
}

#[test]
fn invalid_input_exits_with_2() {
    let w = worked();
    assert_eq!(octarec(&["value", "--input", path_str(&w), "--point", "1,1,3"]).status.code(), Some(2));
    assert_eq!(octarec(&["value", "--point", "1,1,4"]).status.code(), Some(2));
    assert_eq!(octarec(&["value", "--input", "/nonexistent.json", "--point", "1,1,4"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"domain":{"shape":"rectangle","m":1,"n":1},"semifield":"rational",
            "heights":[[0,1],[1,4]],"values":[["1","2"],["3","5"]]}"#,
    )
    .unwrap();
    let out = octarec(&["value", "--input", path_str(&bad), "--point", "1,1,4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    assert_eq!(octarec(&["evolve", "--input", path_str(&w), "--shift", "1"]).status.code(), Some(2));
    assert_eq!(octarec(&["no-such-command"]).status.code(), Some(2));
}
