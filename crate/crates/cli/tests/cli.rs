use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_phasecycle"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn configs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn csv_rows(text: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut reader = csv::Reader::from_reader(text);
    let header = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| {
            r.unwrap()
                .iter()
                .map(|c| c.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    (header, rows)
}

#[test]
fn otto_example() {
    let out = run(&[
        "otto", "--omega1", "1", "--omega2", "2", "--t-cold", "1", "--t-hot", "4",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["conventions"], phasecycle::CONVENTIONS_VERSION);
    assert_eq!(v["inputs"]["t_hot"], 4.0);
    assert!((v["outputs"]["efficiency"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn carnot_examples() {
    let out = run(&[
        "carnot",
        "maximize-power",
        "--t-hot",
        "4",
        "--t-cold",
        "1",
        "--ds",
        "1",
        "--c1",
        "1",
        "--c2",
        "1",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let o = &json(&out)["outputs"];
    for (key, expected) in [
        ("tau_c", 2.0),
        ("tau_h", 4.0),
        ("p_star", 0.25),
        ("eta_star", 0.5),
    ] {
        assert!((o[key].as_f64().unwrap() - expected).abs() < 1e-6, "{key}");
    }
    let out = run(&[
        "carnot",
        "cycle",
        "--omega-t1",
        "2",
        "--omega-t2",
        "1",
        "--t-hot",
        "2",
        "--t-cold",
        "1",
    ]);
    let o = &json(&out)["outputs"];
    assert!((o["efficiency"].as_f64().unwrap() - 0.5).abs() < 1e-14);
    assert!((o["q_hot"].as_f64().unwrap() - 0.339_657_826_058_155).abs() < 1e-14);
}

#[test]
fn pump_sweep_csv() {
    let cfg = configs().join("loop.toml");
    let out = run(&["pump", "--config", cfg.to_str().unwrap(), "--compare-exact"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&out.stdout);
    assert_eq!(header, ["omega", "n_exact", "n_dyn", "n_geom", "residual"]);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().flatten().all(|x| x.is_finite()));
    assert_eq!(rows[0][0], 7.5e-3);
    let ratio = rows[0][4] / rows[1][4];
    assert!((1.7..=2.3).contains(&ratio), "{ratio}");
}

#[test]
fn omega_sweep_flag_overrides_config_sweep() {
    let cfg = configs().join("asymmetric-loop.toml");
    let out = run(&[
        "pump",
        "--config",
        cfg.to_str().unwrap(),
        "--omega-sweep",
        "0.1,0.001,5",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&out.stdout);
    assert_eq!(header[0], "omega");
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4][0], 0.001);
    // Geometric charge is the same at every drive frequency.
    for r in &rows {
        assert!((r[3] - rows[0][3]).abs() < 1e-9);
    }
}

#[test]
fn flags_override_config_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "otto.toml",
        "experiment = \"otto\"\n[params]\nomega1 = 1.0\nomega2 = 3.0\nt_cold = 1.0\nt_hot = 4.0\n",
    );
    let out = run(&["otto", "--config", cfg.to_str().unwrap(), "--omega2", "2"]);
    let v = json(&out);
    assert_eq!(v["inputs"]["omega2"], 2.0);
    assert!((v["outputs"]["efficiency"].as_f64().unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn run_dispatches_on_experiment_and_writes_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let cfg = configs().join("latitude-loop.toml");
    let out = run(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(points.len(), 4);
    for p in points {
        let theta = p["value"].as_f64().unwrap();
        let got = p["outputs"]["unwrapped"].as_f64().unwrap();
        assert!((got + std::f64::consts::PI * (1.0 - theta.cos())).abs() < 1e-4);
    }
}

#[test]
fn sweep_rows_follow_sweep_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.toml",
        "experiment = \"otto\"\n[params]\nomega1 = 1.0\nt_cold = 1.0\nt_hot = 9.0\n\
         [sweep]\nparameter = \"omega2\"\nstart = 1.5\nstop = 8.5\ncount = 33\n",
    );
    let out = run(&["otto", "--config", cfg.to_str().unwrap()]);
    let (_, rows) = csv_rows(&out.stdout);
    assert_eq!(rows.len(), 33);
    for (k, r) in rows.iter().enumerate() {
        assert_eq!(r[0], 1.5 + k as f64 / 32.0 * 7.0);
        assert!((r[6] - (1.0 - 1.0 / r[0])).abs() < 1e-12);
    }
}

#[test]
fn phase_path_file_with_and_without_header() {
    let dir = tempfile::tempdir().unwrap();
    let body = "0,0.2,0\n0.5,0.4,0.3\n1,0.6,0.6\n";
    let with = write(dir.path(), "a.csv", &format!("t,theta,phi\n{body}"));
    let without = write(dir.path(), "b.csv", body);
    let a = run(&["phase", "--path-file", with.to_str().unwrap()]);
    let b = run(&["phase", "--path-file", without.to_str().unwrap()]);
    assert!(a.status.success() && b.status.success(), "{}", stderr(&a));
    assert_eq!(json(&a)["outputs"], json(&b)["outputs"]);
    assert!(json(&a)["outputs"].get("dynamical").is_none());
}

#[test]
fn schema_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "experiment = \"otto\"\n[params]\nomega1 = 1.0\nomgea2 = 2.0\n",
    );
    let out = run(&["otto", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));

    let sweep = write(
        dir.path(),
        "sweep.toml",
        "experiment = \"otto\"\n[params]\nomega1 = 1.0\n[sweep]\nparameter = \"omega3\"\nstart = 1\nstop = 2\ncount = 3\n",
    );
    let out = run(&["otto", "--config", sweep.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("omega3"));

    let short = write(
        dir.path(),
        "short.toml",
        "experiment = \"otto\"\n[params]\nomega1 = 1.0\n[sweep]\nparameter = \"omega2\"\nstart = 1\nstop = 2\ncount = 1\n",
    );
    assert_eq!(
        run(&["otto", "--config", short.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let mismatch = configs().join("loop.toml");
    assert_eq!(
        run(&["otto", "--config", mismatch.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["otto", "--omega1", "one"]).status.code(), Some(2));
    assert_eq!(run(&["otto", "--omega1", "1"]).status.code(), Some(2));

    let csv = write(dir.path(), "bad.csv", "t,theta,phi\n0,0.1,0\n1,x,0\n");
    let out = run(&["phase", "--path-file", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "{}", stderr(&out));
}

#[test]
fn module_errors_exit_3_with_serialized_error() {
    let out = run(&[
        "otto", "--omega1", "1", "--omega2", "5", "--t-cold", "1", "--t-hot", "4",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "not_an_engine");
    assert_eq!(v["experiment"], "otto");

    let out = run(&[
        "carnot",
        "maximize-power",
        "--t-hot",
        "1",
        "--t-cold",
        "1",
        "--ds",
        "1",
        "--c1",
        "1",
        "--c2",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["error"]["kind"], "no_interior_maximum");
}

/// Randomized CLI runs checked against the library, seeded by
/// `PHASECYCLE_SEED`.
#[test]
fn randomized_runs_match_library() {
    let seed = std::env::var("PHASECYCLE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..8 {
        let omega1: f64 = rng.random_range(0.1..3.0);
        let t_cold: f64 = rng.random_range(0.2..2.0);
        let t_hot = t_cold * rng.random_range(1.5..6.0);
        let omega2 = omega1 * rng.random_range(1.05..(t_hot / t_cold));
        let args: Vec<String> = [
            ("--omega1", omega1),
            ("--omega2", omega2),
            ("--t-cold", t_cold),
            ("--t-hot", t_hot),
        ]
        .iter()
        .flat_map(|(k, v)| [k.to_string(), format!("{v:?}")])
        .collect();
        let out = bin().arg("otto").args(&args).output().unwrap();
        assert!(out.status.success(), "{}", stderr(&out));
        let spec =
            phasecycle::otto::OttoSpec::from_temperatures(omega1, omega2, t_cold, t_hot).unwrap();
        let expected = phasecycle::otto::cycle(&spec).unwrap();
        let got = json(&out)["outputs"]["w_net_extracted"].as_f64().unwrap();
        assert_eq!(got, expected.w_net_extracted);
    }
}
