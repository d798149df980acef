use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_cosserat-plate");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn material(alpha: f64) -> String {
    format!(
        r#"{{"lambda": 1.0, "mu": 1.0, "alpha": {alpha}, "beta": 0.1, "gamma": 0.1, "epsilon": 0.1, "rho": 1.0, "J": [1.0, 1.0, 1.0]}}"#
    )
}

fn small_plate(alpha: f64) -> String {
    format!(
        r#"{{
  "material": {},
  "geometry": {{"a": 1.0, "b": 1.0, "h": 0.1}},
  "grid": {{"nx": 9, "ny": 9}},
  "time": {{"t_final": 0.05, "cadence": 5}},
  "loads": {{"p": {{"kind": "constant", "value": 1.0}}}},
  "dispersion": {{"samples": 8}},
  "sweep": {{"coupling": [0.2], "l_t": [0.01], "l_b": [0.02], "polar_ratio": [1.0]}}
}}"#,
        material(alpha)
    )
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn validate_rejects_zero_alpha_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", &small_plate(0.0));
    let out = run(&["validate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out) + &String::from_utf8_lossy(&out.stderr);
    assert!(text.contains("α>0"), "{text}");
}

#[test]
fn validate_accepts_admissible_material() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "ok.json", &small_plate(0.5));
    let o = dir.path().join("o");
    let out = run(&["validate", "--config", cfg.to_str().unwrap(), "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(o.join("validation.json")).unwrap()).unwrap();
    assert_eq!(report["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn constants_for_unit_moduli() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!(r#"{{"material": {}, "geometry": {{"a": 1.0, "b": 1.0, "h": 1.0}}}}"#, material(0.5));
    let cfg = write_config(dir.path(), "c.json", &body);
    let o = dir.path().join("o");
    let out = run(&["constants", "--config", cfg.to_str().unwrap(), "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(o.join("constants.json")).unwrap()).unwrap();
    let tc = &v["technical"];
    assert!((tc["nu"].as_f64().unwrap() - 0.25).abs() < 1e-14, "{tc}");
    assert!((tc["d"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-14, "{tc}");
}

#[test]
fn material_file_is_resolved_next_to_config() {
    let dir = tempfile::tempdir().unwrap();
    write_config(dir.path(), "mat.json", &material(0.5));
    let cfg = write_config(
        dir.path(),
        "c.json",
        r#"{"material_file": "mat.json", "geometry": {"a": 1.0, "b": 1.0, "h": 0.1}}"#,
    );
    let out = run(&["validate", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let body = small_plate(0.5).replacen("\"grid\"", "\"gird\"", 1);
    let cfg = write_config(dir.path(), "typo.json", &body);
    let out = run(&["static", "--config", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gird"));
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["simulate", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn literal_flag_only_for_dispersion_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &small_plate(0.5));
    let out = run(&[
        "static",
        "--paper-literal-operators",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().join("o").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

fn all_outputs(cfg: &Path, out: &Path) -> Vec<(String, Vec<u8>)> {
    for cmd in ["static", "simulate", "dispersion", "sweep"] {
        let o = run(&[cmd, "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--threads", "2"]);
        assert_eq!(o.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let mut files: Vec<_> = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn outputs_are_stamped_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &small_plate(0.5));
    let first = all_outputs(&cfg, &dir.path().join("a"));
    let second = all_outputs(&cfg, &dir.path().join("b"));
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    for expected in ["static.csv", "energy.csv", "snapshots.csv", "dispersion.csv", "cutoffs.json", "sweep.csv", "summary.json"] {
        assert!(names.contains(&expected), "{names:?}");
    }
    assert_eq!(first, second);

    let hash = {
        let (_, bytes) = first.iter().find(|(n, _)| n == "summary.json").unwrap();
        let v: serde_json::Value = serde_json::from_slice(bytes).unwrap();
        v["config_sha256"].as_str().unwrap().to_string()
    };
    assert_eq!(hash.len(), 64);
    for (name, bytes) in first.iter().filter(|(n, _)| n.ends_with(".csv")) {
        let text = String::from_utf8_lossy(bytes);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(format!("# cosserat-plate {}", env!("CARGO_PKG_VERSION")).as_str()), "{name}");
        assert_eq!(lines.next(), Some(format!("# config_sha256 {hash}").as_str()), "{name}");
    }
}

#[test]
fn dispersion_starts_from_rest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", &small_plate(0.5));
    let o = dir.path().join("o");
    let out = run(&["dispersion", "--config", cfg.to_str().unwrap(), "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(o.join("dispersion.csv")).unwrap();
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[7], "ok");
        let omega: f64 = rec[6].parse().unwrap();
        assert!(omega >= 0.0 && omega.is_finite());
        rows += 1;
    }
    assert_eq!(rows, 3 * 8 * 9);
}
