use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn taols(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taols"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv_column(path: &Path, name: &str) -> Vec<f64> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let j = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(j).unwrap().parse().unwrap()).collect()
}

#[test]
fn noiseless_pipeline_recovers_lambda() {
    let dir = TempDir::new().unwrap();
    let o = taols(
        &["simulate", "--t", "300", "--seed", "3", "--output", "d.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let o = taols(
        &[
            "estimate",
            "--input",
            "d.csv",
            "--k-min",
            "10",
            "--k-max",
            "100",
            "--out-dir",
            "out",
            "--no-timestamp",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let summary = fs::read_to_string(dir.path().join("out/summary.txt")).unwrap();
    assert!(summary.contains("lambda: min 1.500 mean 1.500 max 1.500"), "{summary}");
    assert!(summary.contains("phi: min 20.00 mean 20.00 max 20.00"), "{summary}");
    let lambdas = csv_column(&dir.path().join("out/sweep.csv"), "lambda");
    assert_eq!(lambdas.len(), 91);
    assert!(lambdas.iter().all(|l| (l - 1.5).abs() < 1e-6));
    for f in ["lambda_ecs.svg", "phi_share.svg"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
}

#[test]
fn simulate_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let run = |out: &str, seed: &str| {
        let o = taols(
            &[
                "simulate", "--t", "200", "--noise", "spiked", "--seed", seed, "--output", out,
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(dir.path().join(out)).unwrap()
    };
    assert_eq!(run("a.csv", "9"), run("b.csv", "9"));
    assert_ne!(run("a.csv", "9"), run("c.csv", "10"));
}

#[test]
fn short_simulation_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let o = taols(&["simulate", "--t", "19"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("19"));
}

#[test]
fn malformed_csv_names_the_row() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("year,forcing_wm2,temp_anomaly_c\n");
    for y in 1850..1900 {
        let f = if y == 1873 {
            "abc".to_string()
        } else {
            format!("0.{}", y % 7)
        };
        text.push_str(&format!("{y},{f},0.0{}\n", y % 5));
    }
    fs::write(dir.path().join("bad.csv"), text).unwrap();
    let o = taols(&["estimate", "--input", "bad.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let err = stderr(&o);
    // Line 25 of the file holds year 1873.
    assert!(err.contains("line 25") && err.contains("abc"), "{err}");
    assert_eq!(err.lines().count(), 1);
}

#[test]
fn invalid_k_and_missing_files() {
    let dir = TempDir::new().unwrap();
    taols(&["simulate", "--t", "50", "--output", "d.csv"], dir.path());
    let o = taols(&["estimate", "--input", "d.csv", "--k-min", "5"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = taols(&["estimate", "--input", "d.csv", "--k-max", "51"], dir.path());
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("51"));
    let o = taols(&["estimate", "--input", "missing.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    let o = taols(&["estimate", "--input", "d.csv", "--level", "1.5"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rank_deficiency_is_a_numerical_failure() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("year,forcing_wm2,temp_anomaly_c\n");
    for y in 1900..1960 {
        text.push_str(&format!("{y},{},0\n", (y - 1900) as f64 * 0.1));
    }
    fs::write(dir.path().join("flat.csv"), text).unwrap();
    let o = taols(&["estimate", "--input", "flat.csv", "--k-max", "40"], dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn two_file_mode_uses_the_common_years() {
    let dir = TempDir::new().unwrap();
    taols(
        &["simulate", "--t", "120", "--seed", "2", "--output", "d.csv"],
        dir.path(),
    );
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let mut f = String::from("year,forcing\n");
    let mut s = String::from("year,temperature\n");
    for r in &rows[..110] {
        f.push_str(&format!("{},{}\n", r[0], r[1]));
    }
    for r in &rows[5..] {
        s.push_str(&format!("{},{}\n", r[0], r[2]));
    }
    fs::write(dir.path().join("f.csv"), f).unwrap();
    fs::write(dir.path().join("s.csv"), s).unwrap();
    let o = taols(
        &[
            "estimate",
            "--forcing",
            "f.csv",
            "--temperature",
            "s.csv",
            "--k-max",
            "60",
            "--format",
            "text",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("T = 105 (1855-1959)"), "{out}");
    assert!(!dir.path().join("taols-output/sweep.csv").exists());
}

#[test]
fn forcing_from_co2_converts_concentrations() {
    let dir = TempDir::new().unwrap();
    fs::write(
        dir.path().join("co2.csv"),
        "year,co2_ppm\n1850,280\n1851,560\n1852,424.61\n",
    )
    .unwrap();
    let o = taols(
        &["forcing-from-co2", "--input", "co2.csv", "--output", "f.csv"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let f = csv_column(&dir.path().join("f.csv"), "forcing_wm2");
    assert_eq!(f[0], 0.0);
    assert!((f[1] - 3.7084).abs() < 5e-4);
    assert!((f[2] - 2.227_641_011).abs() < 1e-8);

    fs::write(dir.path().join("neg.csv"), "year,co2_ppm\n1850,280\n1851,-1\n").unwrap();
    let o = taols(&["forcing-from-co2", "--input", "neg.csv"], dir.path());
    assert!(!o.status.success());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    taols(
        &["simulate", "--t", "100", "--seed", "5", "--output", "d.csv"],
        dir.path(),
    );
    fs::write(
        dir.path().join("run.conf"),
        "# sweep settings\ninput = d.csv\nk_min = 20\nk_max = 30\nout_dir = cfg\nformat = csv\nno_timestamp = true\n",
    )
    .unwrap();
    let o = taols(&["estimate", "--config", "run.conf", "--k-max", "25"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let ks = csv_column(&dir.path().join("cfg/sweep.csv"), "K");
    assert_eq!(ks, (20..=25).map(f64::from).collect::<Vec<_>>());
    assert!(!dir.path().join("cfg/summary.txt").exists());

    fs::write(dir.path().join("bad.conf"), "input = d.csv\nwibble = 3\n").unwrap();
    let o = taols(&["estimate", "--config", "bad.conf"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.conf:2"));
}

#[test]
fn reruns_are_byte_identical_without_timestamp() {
    let dir = TempDir::new().unwrap();
    taols(
        &[
            "simulate", "--t", "150", "--noise", "iid", "--seed", "8", "--output", "d.csv",
        ],
        dir.path(),
    );
    let files = ["sweep.csv", "lambda_ecs.svg", "phi_share.svg", "summary.txt"];
    let run = |out: &str| {
        let o = taols(
            &[
                "estimate",
                "--input",
                "d.csv",
                "--robust-se",
                "--no-timestamp",
                "--out-dir",
                out,
            ],
            dir.path(),
        );
        assert!(o.status.success(), "{}", stderr(&o));
        files.map(|f| fs::read(dir.path().join(out).join(f)).unwrap())
    };
    assert_eq!(run("a"), run("b"));

    let o = taols(&["estimate", "--input", "d.csv", "--out-dir", "c"], dir.path());
    assert!(o.status.success());
    let summary = fs::read_to_string(dir.path().join("c/summary.txt")).unwrap();
    assert!(summary.lines().last().unwrap().starts_with("generated: "));
}
