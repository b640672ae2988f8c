use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn wulff_lab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_wulff-lab"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn summary(dir: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

fn run_config(task: &str, name: &str) -> (i32, tempfile::TempDir) {
    let dir = tempfile::tempdir().unwrap();
    let path = config(name);
    let (code, err) = wulff_lab(&[
        task,
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(code != 1, "{err}");
    (code, dir)
}

#[test]
fn verify_identities_euclidean_is_exact() {
    let (code, dir) = run_config("verify-identities", "verify-euclidean.json");
    assert_eq!(code, 0);
    let s = summary(dir.path());
    assert_eq!(s["schema_version"], 1);
    assert_eq!(s["passed"], true);
    assert!(s["results"]["duality"]["max_residual"].as_f64().unwrap() < 1e-12);
    assert!(!dir.path().join("trace.csv").exists());
}

#[test]
fn circle_perimeter_grows_like_exp() {
    let (code, dir) = run_config("flow", "flow-circle.json");
    assert_eq!(code, 0);
    let s = summary(dir.path());
    let ratio = s["results"]["perimeter_ratio"].as_f64().unwrap();
    assert!((ratio / 1f64.exp() - 1.0).abs() < 1e-3);

    let mut rdr = csv::Reader::from_path(dir.path().join("trace.csv")).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, wulff_lab::report::TRACE_HEADER);
    let rows: Vec<Vec<f64>> = rdr
        .records()
        .map(|r| r.unwrap().iter().map(|x| x.parse().unwrap()).collect())
        .collect();
    let (first, last) = (&rows[0], rows.last().unwrap());
    assert_eq!(last[0], 1.0);
    assert!((last[3] / first[3] / 1f64.exp() - 1.0).abs() < 1e-3);
}

#[test]
fn limacon_converges_by_t6() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{"schema_version": 1, "norm": {"family": "euclidean"},
        "surface": {"kind": "radial-fourier", "modes": [{"degree": 1, "delta": 0.3}]},
        "grid": {"dim": 1, "resolution": 128}, "flow": {"end_time": 6}}"#;
    let path = dir.path().join("c.json");
    fs::write(&path, cfg).unwrap();
    let out = dir.path().join("out");
    let (code, err) = wulff_lab(&[
        "convergence",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(summary(&out)["results"]["sup_dist_final"].as_f64().unwrap() < 1e-3);
}

#[test]
fn shipped_configs_pass() {
    for (task, name) in [
        ("verify-identities", "verify-perturbed-3d.json"),
        ("convergence", "convergence-ellipse.json"),
        ("deficits", "deficits-wulff.json"),
        ("stability-sweep", "sweep-limacon.json"),
    ] {
        let (code, dir) = run_config(task, name);
        let s = summary(dir.path());
        assert_eq!(code, 0, "{name}: {}", s["checks"]);
        assert_eq!(s["task"], task);
    }
}

#[test]
fn wulff_shape_has_vanishing_deficits() {
    let (_, dir) = run_config("deficits", "deficits-wulff.json");
    let r = &summary(dir.path())["results"];
    assert!(r["eps1"].as_f64().unwrap().abs() < 1e-7, "{r}");
    for m in r["momentum"].as_array().unwrap() {
        assert!(m["deficit"].as_f64().unwrap().abs() < 1e-7);
    }
}

#[test]
fn failed_check_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    // H_F > 0 but far too coarse for the curvature tolerance
    let cfg = r#"{"schema_version": 1, "norm": {"family": "perturbed", "epsilon": 0.1, "degree": 3},
        "grid": {"dim": 1, "resolution": 16}, "tolerances": {"wulff_curvature": 1e-12}}"#;
    let path = dir.path().join("c.json");
    fs::write(&path, cfg).unwrap();
    let out = dir.path().join("out");
    let (code, err) = wulff_lab(&[
        "verify-identities",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("check failed"));
    assert_eq!(summary(&out)["passed"], false);
}

#[test]
fn input_errors_exit_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    let cases = [
        ("{ not json", "malformed"),
        (
            r#"{"schema_version": 2, "norm": {"family": "euclidean"}, "grid": {"dim": 1, "resolution": 64}}"#,
            "version",
        ),
        (
            r#"{"schema_version": 1, "norm": {"family": "euclidean"}, "grid": {"dim": 1, "resolution": 64}, "typo": 1}"#,
            "typo",
        ),
        (
            r#"{"schema_version": 1, "norm": {"family": "euclidean"}, "grid": {"dim": 1, "resolution": 64},
            "surface": {"kind": "radial-fourier", "modes": [{"degree": 2, "delta": 0.3}]}}"#,
            "mean convex",
        ),
    ];
    for (text, what) in cases {
        let path = dir.path().join("c.json");
        fs::write(&path, text).unwrap();
        let (code, err) = wulff_lab(&["flow", "--config", path.to_str().unwrap(), "--out", out]);
        assert_eq!(code, 1, "{what}: {err}");
        assert!(err.starts_with("error:"), "{what}: {err}");
    }
    let (code, _) = wulff_lab(&[
        "flow",
        "--config",
        dir.path().join("missing.json").to_str().unwrap(),
        "--out",
        out,
    ]);
    assert_eq!(code, 1);
}

#[test]
fn seed_flag_overrides_config_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = config("deficits-wulff.json");
    let out = dir.path().join("out");
    let (code, _) = wulff_lab(&[
        "deficits",
        "--config",
        path.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--seed",
        "99",
    ]);
    assert_eq!(code, 0);
    assert_eq!(summary(&out)["config"]["seed"], 99);
}
