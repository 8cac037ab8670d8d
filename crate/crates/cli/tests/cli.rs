use std::process::{Command, Output};

use cplstab::fock::FockVector;

fn cplstab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cplstab"))
        .args(args)
        .env_remove("CPLSTAB_MAX_DEGREE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

#[test]
fn cl_text() {
    let o = cplstab(&["cl", "--xi", "4:2:2,1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/3·h[-3]·e{0} − 1/3·h[-1]^3·e{0}");
}

#[test]
fn dim_of_weyl_module() {
    let o = cplstab(&["dim", "--n", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "32");
}

#[test]
fn stability_suite_exits_zero() {
    let o = cplstab(&["check", "--suite", "stability", "--n-max", "8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("stability: ok"));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["cl", "--xi", "4:2:9"],
        vec!["cl", "--xi", "nonsense"],
        vec!["check", "--suite", "nope"],
        vec!["straighten", "--p", "2", "--q", "1"],
        vec!["frobnicate"],
        vec!["dim", "--n", "5", "--bogus"],
    ] {
        let o = cplstab(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.starts_with("error"), "{args:?}: {err}");
    }
}

#[test]
fn degree_cap_is_enforced() {
    let o = Command::new(env!("CARGO_BIN_EXE_cplstab"))
        .args(["cl", "--xi", "6:3:2,1"])
        .env("CPLSTAB_MAX_DEGREE", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_vectors_round_trip() {
    for xi in ["4:2:2,1", "6:3:2,1", "5:2:1"] {
        let text = stdout(&cplstab(&["cl", "--xi", xi]));
        let json = stdout(&cplstab(&["cl", "--xi", xi, "--format", "json"]));
        let a: FockVector = text.parse().unwrap();
        let b = FockVector::from_json(&json).unwrap();
        assert_eq!(a, b, "{xi}");
        let translated = cplstab(&["apply-T", "--p", "-1", "--vector", &json]);
        assert_eq!(translated.status.code(), Some(0));
    }
}

#[test]
fn stable_basis_json() {
    let o = cplstab(&["stable-basis", "--j", "-1", "--d", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["chosen_n"], 6);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 2);
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("cplstab-{}.txt", std::process::id()));
    let o = cplstab(&["wn", "--n", "4", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(stdout(&o).is_empty());
    assert!(written.trim().parse::<FockVector>().is_ok());
}
