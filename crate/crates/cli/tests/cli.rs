use std::fs;
use std::process::{Command, Output};

fn charlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_charlab"))
        .args(args)
        .output()
        .expect("spawn charlab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_passes_and_emits_schema() {
    let out = charlab(&[
        "verify", "--n-max", "8", "--alpha", "1", "--alpha", "2", "--alpha", "1/2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["schema"], 1);
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    let alphas: std::collections::BTreeSet<&str> = checks
        .iter()
        .map(|c| c["alpha"].as_str().unwrap())
        .collect();
    assert_eq!(
        alphas.into_iter().collect::<Vec<_>>(),
        ["1/1", "1/2", "2/1"]
    );
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("total") && stderr.contains("wall time"));
}

#[test]
fn kolmogorov_two_point() {
    let out = charlab(&[
        "kolmogorov",
        "--n",
        "2",
        "--alpha",
        "1",
        "--exact-below",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,alpha,method,N,distance,dkw_eps_99,seed")
    );
    let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&fields[..4], ["2", "1/1", "exact", ""]);
    let d: f64 = fields[4].parse().unwrap();
    assert!((d - 0.341345).abs() < 1e-6);
}

#[test]
fn sample_is_reproducible() {
    let args = [
        "sample", "--n", "16", "--alpha", "3/2", "--count", "1000", "--seed", "7",
    ];
    let a = charlab(&args);
    let b = charlab(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert_eq!(
        text.lines().next(),
        Some("n,alpha,draw_index,s_numerator,t_float")
    );
    assert_eq!(text.lines().count(), 1001);
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        // S = s_numerator / 2 for α = 3/2; T = S / √(3/2 · 120)
        let s = f[3].parse::<f64>().unwrap() / 2.0;
        let t: f64 = f[4].parse().unwrap();
        assert!((t - s / 180f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn path_increments_sum_to_s() {
    let out = charlab(&["path", "--n", "12", "--alpha", "2", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[0], ["1", "1", "1", "0/1"]);
    for (j, r) in rows.iter().enumerate().skip(1) {
        let (row, col): (i64, i64) = (r[1].parse().unwrap(), r[2].parse().unwrap());
        assert_eq!(r[0], (j + 1).to_string());
        assert_eq!(r[3], format!("{}/1", 2 * (col - 1) - (row - 1)));
    }
}

#[test]
fn exact_dist_columns() {
    let out = charlab(&["exact-dist", "--n", "3", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "s_numer,s_denom,t_float,prob_numer,prob_denom,cum_float"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[3].ends_with(",1"));
}

#[test]
fn rate_accepts_kolmogorov_output() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("distances.csv");
    let json = dir.path().join("rate.json");
    let csv_s = csv.to_str().unwrap();
    let out = charlab(&[
        "kolmogorov",
        "--n",
        "6,10,14,30",
        "--alpha",
        "2",
        "--count",
        "5000",
        "--seed",
        "9",
        "--exact-below",
        "20",
        "--out",
        csv_s,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = charlab(&["rate", "--input", csv_s, "--out", json.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["schema"], 1);
    let report = &doc["reports"][0];
    assert_eq!(report["alpha"], "2/1");
    assert_eq!(report["points"].as_array().unwrap().len(), 4);
    assert!(report["slope"].as_f64().unwrap() < 0.0);
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.contains(",mc,5000,"));
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    for (args, flag) in [
        (vec!["kolmogorov", "--n", "1"], "--n"),
        (
            vec!["sample", "--n", "1", "--count", "10", "--seed", "1"],
            "--n",
        ),
        (
            vec![
                "sample", "--n", "5", "--alpha", "0.5", "--count", "10", "--seed", "1",
            ],
            "--alpha",
        ),
        (vec!["exact-dist", "--n", "4", "--alpha", "1/0"], "--alpha"),
        (vec!["exact-dist", "--n", "41"], "--n"),
        (vec!["verify", "--n-max", "11"], "--n-max"),
        (vec!["kolmogorov", "--n", "30", "--count", "10"], "--count"),
        (vec!["verify", "--bogus"], "--bogus"),
    ] {
        let out = charlab(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let stderr = String::from_utf8(out.stderr).unwrap();
        assert!(stderr.contains(flag), "{args:?}: {stderr}");
    }
}
