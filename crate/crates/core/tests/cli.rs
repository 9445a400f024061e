use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

use formicode::cli::{cmd_fit, FitSource};

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_formicode"));
    cmd.env_remove("FORMICODE_SEED");
    cmd
}

fn config() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/three_stage_30branch.json")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn simulate(out: &Path, extra: &[&str]) -> Output {
    bin()
        .args(["simulate", "--config"])
        .arg(config())
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn simulate_writes_outputs_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = simulate(dir.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("trials.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 3 * 600);
    for stage in 1..=3 {
        assert!(csv
            .lines()
            .any(|l| l.split(',').nth(1) == Some(&stage.to_string())));
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(manifest["command"], "simulate");
    assert_eq!(manifest["seed"], 17);
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(
        manifest["outputs"],
        serde_json::json!(["trials.csv", "summary.json"])
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["stages"].as_array().unwrap().len(), 3);
    assert!(
        summary["stages"][0]["fit_time_vs_goal"]["r"]
            .as_f64()
            .unwrap()
            > 0.9
    );
}

#[test]
fn seed_precedence_on_the_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str| fs::read(dir.path().join(name).join("trials.csv")).unwrap();

    assert!(simulate(&dir.path().join("config"), &[]).status.success());
    assert!(simulate(&dir.path().join("flag"), &["--seed", "17"])
        .status
        .success());
    assert_eq!(read("config"), read("flag"));
    assert!(simulate(&dir.path().join("other"), &["--seed", "18"])
        .status
        .success());
    assert_ne!(read("config"), read("other"));

    // The config names a seed, so the environment is ignored.
    let o = bin()
        .env("FORMICODE_SEED", "18")
        .args(["simulate", "--config"])
        .arg(config())
        .arg("--out")
        .arg(dir.path().join("env"))
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(read("config"), read("env"));
}

#[test]
fn env_seed_used_when_config_has_none() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(config())
        .unwrap()
        .replace("\"seed\": 17,", "");
    let cfg = dir.path().join("noseed.json");
    fs::write(&cfg, text).unwrap();
    let run = |name: &str, env: Option<&str>| {
        let mut cmd = bin();
        if let Some(v) = env {
            cmd.env("FORMICODE_SEED", v);
        }
        let out = dir.path().join(name);
        let o = cmd
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(&out)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out.join("trials.csv")).unwrap()
    };
    assert_eq!(
        run("env17", Some("17")),
        fs::read(run_to(&dir, "cfg17")).unwrap()
    );
    assert_ne!(run("env3", Some("3")), run("default", None));

    let o = bin()
        .env("FORMICODE_SEED", "many")
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("bad"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn run_to(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    let out = dir.path().join(name);
    assert!(simulate(&out, &[]).status.success());
    out.join("trials.csv")
}

#[test]
fn invalid_config_exits_2_naming_stage() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(config()).unwrap().replace(
        "{ \"type\": \"anchored\", \"anchors\": [10, 20], \"anchor_probability\": \"1/3\" }",
        "{ \"type\": \"anchored\", \"anchors\": [10, 20], \"anchor_probability\": 0.6 }",
    );
    assert!(text.contains("0.6"));
    let explicit = r#"{
        "schema_version": 1,
        "maze": {"kind": "comb", "layout": "circle", "branch_count": 3},
        "time_model": {"a": 6.0, "b": 5.0},
        "trials_per_stage": 4,
        "stages": [
            {"goals": {"type": "uniform"}, "coding": {"scheme": "unitary"}},
            {"goals": {"type": "explicit", "probabilities": {"1": 0.5, "2": 0.3, "3": 0.1}},
             "coding": {"scheme": "unitary"}}
        ]
    }"#;
    for (name, body) in [
        ("anchored.json", text.as_str()),
        ("explicit.json", explicit),
    ] {
        let cfg = dir.path().join(name);
        fs::write(&cfg, body).unwrap();
        let o = bin()
            .args(["simulate", "--config"])
            .arg(&cfg)
            .arg("--out")
            .arg(dir.path().join("out"))
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(stderr(&o).contains("stage 2"), "{name}: {}", stderr(&o));
    }

    let unknown = dir.path().join("unknown.json");
    fs::write(
        &unknown,
        explicit.replace(
            "\"trials_per_stage\"",
            "\"trails\": 1, \"trials_per_stage\"",
        ),
    )
    .unwrap();
    let o = bin()
        .args(["simulate", "--config"])
        .arg(&unknown)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trails"));
}

#[test]
fn io_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["simulate", "--config"])
        .arg(dir.path().join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = simulate(&blocker.join("sub"), &[]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn replicate_all_is_fast_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let o = bin()
        .args(["replicate", "all", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(start.elapsed().as_secs_f64() < 5.0);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("[PASS]")).count(),
        14,
        "{out}"
    );
    assert!(!out.contains("[FAIL]"));
    let report: serde_json::Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("replication_report.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(report["all_pass"], true);
    assert!(dir.path().join("manifest.json").exists());

    let o = bin()
        .args(["replicate", "--table", "routes_126", "--json"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checks"][0]["recomputed_exact"], "126");

    let o = bin().args(["replicate", "table7"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fit_recovers_simulated_slope() {
    let dir = tempfile::tempdir().unwrap();
    assert!(simulate(dir.path(), &[]).status.success());
    let trials = dir.path().join("trials.csv");
    let o = bin()
        .arg("fit")
        .arg(&trials)
        .args(["--x", "code_length", "--y", "contact_duration_s", "--json"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let a = v["fit"]["a"].as_f64().unwrap();
    assert!((a - 6.0).abs() < 0.2, "{a}");

    let direct = cmd_fit(
        &FitSource::Csv(trials),
        "code_length",
        "contact_duration_s",
        false,
    )
    .unwrap();
    assert_eq!(direct.fit.a, a);
}

#[test]
fn fit_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let flat = dir.path().join("flat.csv");
    fs::write(&flat, "x,y\n1,4\n2,4\n3,4\n").unwrap();
    let o = bin()
        .arg("fit")
        .arg(&flat)
        .args(["--x", "x", "--y", "y"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("warning: degenerate fit"));

    let line = dir.path().join("line.csv");
    fs::write(&line, "bits,t\r\n1,90\r\n3,210\r\n").unwrap();
    let o = bin()
        .arg("fit")
        .arg(&line)
        .args(["--x", "bits", "--y", "t", "--bits"])
        .output()
        .unwrap();
    let out = stdout(&o);
    assert!(out.contains("r = 1.000000"), "{out}");
    assert!(
        out.contains("transmission rate = 1.000000 bits/min"),
        "{out}"
    );

    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "x,y\n1,4\nabc,5\n").unwrap();
    let o = bin()
        .arg("fit")
        .arg(&bad)
        .args(["--x", "x", "--y", "y"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = bin()
        .args([
            "fit",
            "--table",
            "table3",
            "--x",
            "branch",
            "--y",
            "contact_s",
        ])
        .output()
        .unwrap();
    assert!(stdout(&o).contains("r = 0.934652"), "{}", stdout(&o));
}

#[test]
fn plotdata_series() {
    let dir = tempfile::tempdir().unwrap();
    assert!(simulate(dir.path(), &[]).status.success());
    let o = bin()
        .arg("plotdata")
        .arg(dir.path().join("trials.csv"))
        .args(["--kind", "time_vs_index"])
        .output()
        .unwrap();
    let text = stdout(&o);
    let blocks: Vec<&str> = text.split("\n\n\n").collect();
    assert_eq!(blocks.len(), 3);
    assert!(blocks[2].starts_with("# stage 3\n# goal mean_contact_s\n"));
    assert_eq!(blocks[0].lines().count(), 2 + 30);

    let plots = dir.path().join("plots");
    let o = bin()
        .args([
            "plotdata",
            "--table",
            "table5",
            "--kind",
            "time_vs_distance",
            "--out",
        ])
        .arg(&plots)
        .output()
        .unwrap();
    assert!(o.status.success());
    let dat = fs::read_to_string(plots.join("time_vs_distance.dat")).unwrap();
    assert_eq!(dat.lines().filter(|l| !l.starts_with('#')).count(), 44);
    assert!(plots.join("manifest.json").exists());

    let o = bin()
        .args(["plotdata", "--table", "table2", "--kind", "histogram"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_round_trips_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["export", "--table", "table5", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("table5.csv")).unwrap();
    assert!(csv.starts_with("branch,distance,times_s\n26,6,\"35,30\"\n"));
}
