//! The `extseq` executable end to end.

use std::path::Path;
use std::process::{Command, Output};

fn extseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extseq")).args(args).env_remove("EXTSEQ_BUDGET").output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const NPLUS: &str = r#"{"points":["inf"],"tails":["n"],"attach":{"n":["inf"]}}"#;

#[test]
fn validate_reports_kind_or_location() {
    let d = tempfile::tempdir().unwrap();
    let ok = write(d.path(), "s.json", NPLUS);
    let o = extseq(&["validate", &ok]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("valid space"));
    let bad = write(d.path(), "bad.json", r#"{"points":["x"],"tails":["n"],"attach":{"t":["x"]}}"#);
    let o = extseq(&["validate", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("attach.t"), "{}", stderr(&o));
    let zero = write(d.path(), "z.json", r#"{"threads":[{"walk":{"tail":"n","a":0,"b":0}}]}"#);
    let o = extseq(&["validate", &zero]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("threads[0].walk.a"));
}

#[test]
fn check_writes_reproducible_reports() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a.json"), d.path().join("b.json"));
    for p in [&a, &b] {
        let o = extseq(&["check", "--suite", "infinity-plus-diagram", "--seed", "5", "--samples", "20", "--report", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    let (ra, rb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ra, rb);
    let v: serde_json::Value = serde_json::from_slice(&ra).unwrap();
    assert_eq!(v["cases"], 20);
    assert_eq!(v["pass"], 20);
    assert_eq!(v["budget"], 8);
    assert!(v.get("wallTime").is_none() && v.get("wall_time").is_none());
}

#[test]
fn check_all_and_timing() {
    let d = tempfile::tempdir().unwrap();
    let r = d.path().join("all.json");
    let o = extseq(&["check", "--samples", "4", "--timing", "--report", r.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().count(), 12);
    assert_eq!(stderr(&o).lines().count(), 12);
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&r).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 12);
}

#[test]
fn budget_comes_from_the_environment() {
    let d = tempfile::tempdir().unwrap();
    let r = d.path().join("r.json");
    let r = r.to_str().unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_extseq"));
        c.args(["check", "--suite", "sheaf-gluing", "--samples", "10", "--report", r]).args(extra);
        match env {
            Some(v) => c.env("EXTSEQ_BUDGET", v),
            None => c.env_remove("EXTSEQ_BUDGET"),
        };
        let o = c.output().unwrap();
        let v: Option<serde_json::Value> = std::fs::read(r).ok().and_then(|b| serde_json::from_slice(&b).ok());
        (o.status.code(), v.map(|v| v["budget"].clone()))
    };
    assert_eq!(run(Some("3"), &[]), (Some(0), Some(3.into())));
    assert_eq!(run(Some("3"), &["--budget", "5"]), (Some(0), Some(5.into())));
    assert_eq!(run(None, &[]), (Some(0), Some(8.into())));
    assert_eq!(run(Some("lots"), &[]).0, Some(3));
}

#[test]
fn unknown_suite_exits_with_error() {
    let o = extseq(&["check", "--suite", "nosuch"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("unknown suite `nosuch`"));
}

#[test]
fn eval_ops() {
    let d = tempfile::tempdir().unwrap();
    let x = write(d.path(), "x.json", NPLUS);
    let walk = write(d.path(), "s.json", r#"{"threads":[{"walk":{"tail":"n","a":1,"b":0}}]}"#);
    let o = extseq(&["eval", "classify", &x, &walk]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["convergent"], true);
    assert_eq!(v["limitSet"], serde_json::json!(["inf"]));
    assert_eq!(v["proper"], false);
    let o = extseq(&["eval", "space-report", &x]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["compact"].clone(), v["s2"].clone()), (true.into(), true.into()));
    let nn = write(d.path(), "nn.json", r#"{"tails":["n"]}"#);
    let o = extseq(&["eval", "plus", &nn]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["base"], "inf");
    assert_eq!(v["space"]["attach"]["n"], serde_json::json!(["inf"]));
    let o = extseq(&["eval", "classify", &x]);
    assert_eq!(o.status.code(), Some(3));
    let o = extseq(&["eval", "frobnicate", &x]);
    assert!(stderr(&o).contains("unknown op"));
}

#[test]
fn gen_writes_valid_deterministic_instances() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    for out in [&a, &b] {
        let o = extseq(&["gen", "--profile", "s2-only", "--count", "3", "--seed", "9", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    for i in 0..3 {
        let name = format!("instance-{i:04}.json");
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
        let o = extseq(&["validate", a.join(&name).to_str().unwrap()]);
        assert!(stdout(&o).contains("valid instance"));
    }
    let o = extseq(&["gen", "--count", "0", "--out", d.path().join("c").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(d.path().join("c")).unwrap().count(), 0);
    let o = extseq(&["gen", "--profile", "weird", "--out", d.path().join("e").to_str().unwrap()]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn witness_files_replay() {
    let d = tempfile::tempdir().unwrap();
    let w = extseq::report::Witness {
        suite: "proper-eq-no-conv-subseq".into(),
        case: 0,
        verdict: extseq::Verdict::Fail,
        detail: "recorded under a broken decider".into(),
        check: extseq::suites::Check::ProperVsNoConv {
            space: serde_json::from_str(NPLUS).unwrap(),
            seq: serde_json::from_str(r#"{"threads":[{"walk":{"tail":"n","a":1,"b":0}}]}"#).unwrap(),
        },
    };
    let p = write(d.path(), "w.json", &serde_json::to_string(&w).unwrap());
    assert!(stdout(&extseq(&["validate", &p])).contains("valid witness"));
    let o = extseq(&["eval", "recheck", &p]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!((v["recorded"].clone(), v["now"].clone()), ("fail".into(), "pass".into()));
}
