//! End-to-end tests of the binary: artifact shape, determinism of outputs,
//! and the exit code contract (0 ok, 1 usage, 2 data, 3 resource).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_topostat"))
}

fn fixtures_csv() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/reference_profiles.csv")
}

fn write_toy(dir: &Path) -> PathBuf {
    let path = dir.join("toy.txt");
    std::fs::write(&path, "# toy graph\n1 2\n1 3\n2 3\n3 4\n4 2\n5 1\n5 4\n").unwrap();
    path
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn stats_writes_profile_and_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy(dir.path());
    let out_dir = dir.path().join("artifacts");
    let out = bin()
        .arg("stats")
        .arg(&toy)
        .args(["--anf-realizations", "8", "--seed", "7"])
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    for suffix in [
        "profile.json",
        "profile.csv",
        "degree_dist.csv",
        "neighbour_connectivity.csv",
        "clustering_profile.csv",
        "hopplot.csv",
        "hopplot_und.csv",
    ] {
        assert!(out_dir.join(format!("toy.{suffix}")).exists(), "missing {suffix}");
    }

    let json: serde_json::Value =
        serde_json::from_slice(&std::fs::read(out_dir.join("toy.profile.json")).unwrap()).unwrap();
    assert_eq!(json["n"], 5);
    assert_eq!(json["m"], 7);
    assert_eq!(json["stats"]["pct_wcc"], 100.0);
    assert_eq!(json["provenance"]["seed"], 7);

    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("dataset toy: n=5 m=7"));
    assert!(stdout.contains("mean_degree = 2.80000"));
}

#[test]
fn stats_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy(dir.path());
    let mut profiles = Vec::new();
    for run in ["a", "b"] {
        let out_dir = dir.path().join(run);
        let out = bin()
            .arg("stats")
            .arg(&toy)
            .args(["--anf-realizations", "8", "--seed", "99"])
            .arg("--out")
            .arg(&out_dir)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        profiles.push(std::fs::read(out_dir.join("toy.profile.json")).unwrap());
    }
    assert_eq!(profiles[0], profiles[1]);
}

#[test]
fn stats_missing_file_is_a_data_error() {
    let out = bin().args(["stats", "/nonexistent/missing.txt"]).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy(dir.path());

    let out = bin().args(["stats"]).output().unwrap();
    assert_eq!(code(&out), 1, "missing argument");

    let out = bin().arg("stats").arg(&toy).args(["--kmin-policy", "1"]).output().unwrap();
    assert_eq!(code(&out), 1, "bad kmin policy");

    let out = bin().arg("stats").arg(&toy).args(["--format", "excel"]).output().unwrap();
    assert_eq!(code(&out), 1, "bad format");

    let out = bin()
        .args(["compare", "--preset", "nope"])
        .arg(fixtures_csv())
        .output()
        .unwrap();
    assert_eq!(code(&out), 1, "bad preset");

    let out = bin()
        .args(["compare", "--alpha", "0.2"])
        .arg(fixtures_csv())
        .output()
        .unwrap();
    assert_eq!(code(&out), 1, "unsupported alpha");

    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(code(&out), 1, "unknown subcommand");

    let out = bin().arg("--help").output().unwrap();
    assert_eq!(code(&out), 0, "help is not an error");
}

#[test]
fn compare_reproduces_fixture_outcomes() {
    let dir = tempfile::tempdir().unwrap();
    let svg_path = dir.path().join("cd.svg");
    let residuals_path = dir.path().join("residuals.csv");
    let out = bin()
        .arg("compare")
        .arg(fixtures_csv())
        .args(["--preset", "paper10"])
        .args(["--datasets", "wos,citeseer,cora,histcite,dblp,arxiv"])
        .arg("--svg")
        .arg(&svg_path)
        .arg("--residuals")
        .arg(&residuals_path)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let datasets: Vec<&str> =
        report["datasets"].as_array().unwrap().iter().map(|d| d.as_str().unwrap()).collect();
    let pairs = report["significant_pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1, "exactly one significant pair");
    let a = pairs[0][0].as_u64().unwrap() as usize;
    let b = pairs[0][1].as_u64().unwrap() as usize;
    let mut pair = [datasets[a], datasets[b]];
    pair.sort();
    assert_eq!(pair, ["dblp", "wos"]);
    assert!(report["friedman_rejected"].as_bool().unwrap());

    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.contains("dblp"));

    let residuals = std::fs::read_to_string(&residuals_path).unwrap();
    assert_eq!(residuals.lines().count(), 1 + 6 * 10);
}

#[test]
fn compare_rejects_too_few_datasets() {
    let dir = tempfile::tempdir().unwrap();
    let small = dir.path().join("small.csv");
    std::fs::write(&small, "dataset,a,b\nx,1,2\ny,2,3\nz,3,5\n").unwrap();
    let out = bin()
        .arg("compare")
        .arg(&small)
        .args(["--stats", "a,b"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("4"));
}

#[test]
fn compare_mixes_profiles_and_matrix_rows() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy(dir.path());
    let out_dir = dir.path().join("p");
    let out = bin()
        .arg("stats")
        .arg(&toy)
        .args(["--anf-realizations", "8"])
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);

    // The toy profile joins the eight fixture rows; statistics undefined on
    // the toy graph stay out of the selection.
    let out = bin()
        .arg("compare")
        .arg(fixtures_csv())
        .arg(out_dir.join("toy.profile.json"))
        .args(["--stats", "pct_wcc,pct_core,mean_degree,mean_c"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["datasets"].as_array().unwrap().len(), 9);
}

#[test]
fn hopplot_exact_matches_hand_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    std::fs::write(&path, "1 2\n2 3\n").unwrap();
    let out = bin().arg("hopplot").arg(&path).args(["--directed", "--exact"]).output().unwrap();
    assert_eq!(code(&out), 0);
    // Directed path on 3 nodes: 2 pairs at hop 1, 3 pairs at hop 2.
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "hop,reached_fraction,sem");
    assert_eq!(lines[1], "0,0,0");
    assert_eq!(lines[2], "1,0.6666666666666666,0");
    assert_eq!(lines[3], "2,1,0");
    assert_eq!(lines.len(), 4);
}

#[test]
fn hopplot_seeded_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy(dir.path());
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let out = bin()
            .arg("hopplot")
            .arg(&toy)
            .args(["--seed", "11", "--anf-realizations", "12", "--anf-trials", "16"])
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn hopplot_resource_guard_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let toy = write_toy(dir.path());
    let out = bin()
        .arg("hopplot")
        .arg(&toy)
        .args(["--anf-trials", "99999999999999"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource"));
}

#[test]
fn konect_format_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("net.tsv");
    std::fs::write(&path, "% konect style\n1 2\n2 3\n3 1\n").unwrap();
    let out = bin()
        .arg("hopplot")
        .arg(&path)
        .args(["--format", "konect", "--exact"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn manifest_expectations_are_enforced() {
    let dir = tempfile::tempdir().unwrap();
    write_toy(dir.path());
    let manifest = dir.path().join("toy.manifest");
    std::fs::write(&manifest, "name = toy\npath = toy.txt\nexpected_n = 99\n").unwrap();
    let out = bin().arg("stats").arg(&manifest).output().unwrap();
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected_n"));
}
