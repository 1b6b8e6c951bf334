use std::fs;
use std::process::{Command, Output};

fn chaoscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoscope"))
        .args(args)
        .env_remove("CHAOSCOPE_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn levels_table() {
    let o = chaoscope(&["levels", "--max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for n in ["10", "695", "90", "3421640", "182", "12560", "22", "1572"] {
        assert!(out.split_whitespace().any(|w| w == n), "{n} missing from\n{out}");
    }
}

#[test]
fn orbit_csv_rows() {
    let o = chaoscope(&["orbit", "--spine", "2", "--cycle", "1", "--pos", "1", "--obs", "1", "--horizon", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "t,l0_cycle,l0_pos,l1_cycle,l1_pos\n0,0,0,0,0\n1,0,0,1,1\n2,0,0,1,2\n3,0,0,1,3\n"
    );
}

#[test]
fn mixing_gaps_json() {
    let o = chaoscope(&["mixing-gaps", "--m", "1", "--j", "1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let report = &v["reports"][0];
    assert_eq!(report["prefix_ok"], true);
    assert_eq!(report["missing_gaps"], serde_json::json!([1]));
    let gaps: Vec<u64> = report["occurrences"]["gap_histogram"]
        .as_object()
        .unwrap()
        .keys()
        .map(|k| k.parse().unwrap())
        .collect();
    let mut expected = vec![0];
    expected.extend(2..=22);
    let mut gaps = gaps;
    gaps.sort();
    assert_eq!(gaps, expected);
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_chaoscope"))
        .args(["mixing-gaps", "--m", "1", "--j", "2"])
        .env("CHAOSCOPE_BUDGET", "1000000")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(chaoscope(&["orbit", "--spine", "2", "--cycle", "5"]).status.code(), Some(2));
    assert_eq!(chaoscope(&["levels", "--format", "dot"]).status.code(), Some(2));
    assert_eq!(chaoscope(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(chaoscope(&["dsl-check"]).status.code(), Some(2));
}

#[test]
fn failed_property_exits_one() {
    // Even generators leave every odd number out.
    let o = chaoscope(&["semigroup", "--gens", "10,12"]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn fixed_point_and_round_trips() {
    assert_eq!(chaoscope(&["fixed-point"]).status.code(), Some(0));
    let o = chaoscope(&["roundtrip", "--count", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn dot_export() {
    let o = chaoscope(&["materialize", "--level", "1", "--dot"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 11);
}

#[test]
fn artifacts_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let o = chaoscope(&["liyorke", "--pairs", "5", "--seed", "3", "--format", "csv", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names, ["liyorke.csv", "liyorke.json", "manifest.json"]);
    for name in names {
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name:?}");
    }
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(a.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["command"], "liyorke");
}

#[test]
fn cover_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("small.cover");
    fs::write(
        &good,
        "cover small mode bouquet\nlevel 1 { c1 := 4 e; }\nlevel 2 { c1 := e + 3 c1 + e; c2 := 7 e; }\n",
    )
    .unwrap();
    let o = chaoscope(&["dsl-check", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = chaoscope(&["levels", "--max", "2", "--verify", "--cover", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("14 7"));

    let bad = dir.path().join("bad.cover");
    fs::write(&bad, "cover bad mode bouquet\nlevel 1 { c1 := 4 e }\n").unwrap();
    let o = chaoscope(&["dsl-check", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("2:"), "{}", stdout(&o));
}

#[test]
fn acceptance_invocations_pass() {
    for args in [
        &["levels", "--max", "3", "--verify"][..],
        &["mixing-gaps", "--m", "1", "--j", "1,2", "--expect-gaps", "0,2,3,5..100"],
        &["semigroup"],
        &["proximal", "--level", "2", "--window-len", "700"],
        &["liyorke", "--pairs", "100"],
        &["dsl-check", "--builtin", "5", "--mutants"],
    ] {
        let o = chaoscope(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}
