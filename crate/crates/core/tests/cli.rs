use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tsvf_lab::scenarios::{box_projector, three_box};
use tsvf_lab::tsvf::{abl, weak_value};

fn world_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/threebox.world")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsvf-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| v.to_string().parse().unwrap())
}

#[test]
fn three_box_scenario_json() {
    let v = json(&["scenario", "three-box", "--format", "json"]);
    let tsv = three_box();
    for (key, k) in [("p_A", 0), ("p_B", 1), ("p_C", 2)] {
        let p = abl(&tsv, &box_projector(k)).unwrap().probability(1.0);
        assert_eq!(num(&v[key]).to_bits(), p.to_bits(), "{key}");
    }
    assert_eq!(num(&v["p_A"]), 1.0);
    assert_eq!(num(&v["p_B"]), 1.0);
    let expected = [("P_A", 1.0), ("P_B", 1.0), ("P_C", -1.0)];
    for (name, w) in expected {
        let got = num(&v["weak_values"][name]["re"]);
        assert!((got - w).abs() < 1e-12, "{name}: {got}");
    }
    let lib = weak_value(&tsv, &box_projector(2)).unwrap().re;
    assert_eq!(num(&v["weak_values"]["P_C"]["re"]).to_bits(), lib.to_bits());
}

#[test]
fn counterfactual_on_world_file() {
    let world = world_path();
    let v = json(&[
        "counterfactual",
        "--world",
        world.to_str().unwrap(),
        "--time",
        "5",
        "--obs",
        "P_A",
    ]);
    assert_eq!(num(&v["distribution"]["1"]), 1.0);
    assert_eq!(num(&v["distribution"]["0"]), 0.0);
}

#[test]
fn pointer_sweep_csv() {
    let out = run(&[
        "pointer",
        "--scenario",
        "all-plus",
        "--obs",
        "s_xi",
        "--widths",
        "0.01,0.1,1,10,50",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("width,center,psel_prob"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[0][1].abs() <= 0.5);
    let last = rows[4][1];
    assert!((last - 0.8660254).abs() < 0.01 * 0.8660254, "{last}");
}

#[test]
fn density_export_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("density.csv");
    let out = run(&[
        "pointer",
        "--scenario",
        "three-box",
        "--obs",
        "P_C",
        "--widths",
        "0.05",
        "--grid-points",
        "512",
        "--density",
        "--format",
        "csv",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,density"));
    assert_eq!(lines.count(), 512);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let world = world_path();
    let commands: [&[&str]; 4] = [
        &["scenario", "three-box", "--shots", "20000", "--seed", "7"],
        &["scenario", "king"],
        &[
            "counterfactual",
            "--world",
            world.to_str().unwrap(),
            "--time",
            "5",
            "--obs",
            "P_C",
            "--format",
            "csv",
        ],
        &["pointer", "--scenario", "all-plus", "--obs", "s_x", "--widths", "0.1,5"],
    ];
    for args in commands {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn json_keys_are_sorted() {
    let out = run(&["scenario", "all-plus"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        run(&["pointer", "--scenario", "all-plus", "--obs", "s_x"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        run(&[
            "counterfactual",
            "--world",
            "/nonexistent/world",
            "--time",
            "5",
            "--obs",
            "P_A"
        ])
        .status
        .code(),
        Some(1)
    );
}

#[test]
fn domain_errors_exit_two_with_name() {
    let world = world_path();
    let out = run(&[
        "counterfactual",
        "--world",
        world.to_str().unwrap(),
        "--time",
        "10",
        "--obs",
        "P_A",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TimeCollision"));

    let out = run(&["weak-value", "--scenario", "three-box", "--obs", "s_q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("UnknownObservable"));
}

#[test]
fn golden_outputs() {
    let golden = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let out = run(&["scenario", "three-box"]);
    assert_eq!(out.stdout, std::fs::read(golden.join("three_box.json")).unwrap());

    let world = world_path();
    let out = run(&[
        "counterfactual",
        "--world",
        world.to_str().unwrap(),
        "--time",
        "5",
        "--obs",
        "P_C",
        "--format",
        "csv",
    ]);
    assert_eq!(
        out.stdout,
        std::fs::read(golden.join("threebox_world_p_c.csv")).unwrap()
    );
}
