use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn wallgrad() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wallgrad"));
    cmd.env_remove("WALLGRAD_THREADS");
    cmd
}

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Small grid flags so runs stay quick.
const SMALL: [&str; 4] = ["--nx", "24", "--ny", "12"];

#[test]
fn run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = wallgrad().arg("run").args(SMALL).arg("--out").arg(&out).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("method"));
    for name in ["mesh.txt", "config.toml", "cf_all.csv", "noise.csv", "cf.svg", "cf_FD3_ETA.csv"] {
        assert!(out.join(name).is_file(), "{name}");
    }
    let csv = std::fs::read_to_string(out.join("cf_all.csv")).unwrap();
    let mut labels: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    labels.dedup();
    assert_eq!(labels.len(), 8);
    let svg = std::fs::read_to_string(out.join("cf.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 9);
}

#[test]
fn run_accepts_method_list() {
    let dir = tempfile::tempdir().unwrap();
    let o = wallgrad()
        .arg("run")
        .args(SMALL)
        .args(["--methods", "fd1,CANG"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<String> = stdout(&o).lines().skip(1).take(2).map(|l| l.split_whitespace().next().unwrap().to_string()).collect();
    assert_eq!(rows, ["FD1", "CANG"]);
    assert!(!dir.path().join("cf_NG.csv").exists());
}

#[test]
fn zero_methods_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "methods = []\n").unwrap();
    let out = dir.path().join("out");
    let o = wallgrad().arg("run").arg("--config").arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert!(!o.status.success());
    assert!(stderr(&o).starts_with("error: cli.invalid-config: "), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn errors_are_machine_parsable() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(Vec<&str>, &str); 3] = [
        (vec!["run", "--methods", "FD9"], "error: wallnormal.unknown-method: "),
        (vec!["verify-linear", "--mesh", "/nonexistent/mesh.txt"], "error: mesh.io-error: "),
        (vec!["genmesh", "--stretch", "0.5"], "error: gridgen."),
    ];
    for (args, prefix) in cases {
        let o = wallgrad().current_dir(dir.path()).args(&args).output().unwrap();
        assert!(!o.status.success(), "{args:?}");
        let err = stderr(&o);
        assert!(err.starts_with(prefix), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1, "{err}");
    }
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "grid.nx = \"many\"\n").unwrap();
    let o = wallgrad().arg("run").arg("--config").arg(&bad).output().unwrap();
    assert!(stderr(&o).starts_with("error: cli.config-parse-error: "), "{}", stderr(&o));
}

#[test]
fn genmesh_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.txt"), dir.path().join("b.txt"));
    for path in [&a, &b] {
        let o = wallgrad().args(["genmesh", "--seed", "7"]).arg("--out").arg(path).output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.txt");
    wallgrad().args(["genmesh", "--seed", "8"]).arg("--out").arg(&c).output().unwrap();
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn genmesh_reproduces_shipped_meshes() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["bl_coarse", "bl_medium"] {
        let out = dir.path().join(format!("{name}.txt"));
        let cfg = repo(&format!("crates/core/tests/data/{name}.toml"));
        let o = wallgrad().arg("genmesh").arg("--config").arg(cfg).arg("--out").arg(&out).output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        let shipped = std::fs::read(repo(&format!("crates/core/tests/data/{name}.txt"))).unwrap();
        assert_eq!(std::fs::read(&out).unwrap(), shipped, "{name}");
    }
}

#[test]
fn blasius_table_first_row() {
    let o = wallgrad().arg("blasius-table").output().unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eta,f,fp,fpp"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(&row[..3], &[0.0, 0.0, 0.0]);
    assert!((row[3] - 0.332057).abs() < 1e-5, "{}", row[3]);
    assert_eq!(text.lines().count(), 2002);
}

#[test]
fn verify_linear_on_shipped_meshes() {
    for name in ["bl_coarse", "bl_medium"] {
        let o = wallgrad()
            .arg("verify-linear")
            .arg("--mesh")
            .arg(repo(&format!("crates/core/tests/data/{name}.txt")))
            .output()
            .unwrap();
        assert!(o.status.success(), "{name}: {}", stdout(&o));
        let text = stdout(&o);
        assert_eq!(text.lines().count(), 9);
        for line in text.lines().skip(1) {
            let cols: Vec<&str> = line.split_whitespace().collect();
            let err: f64 = cols[1].parse().unwrap();
            if cols[0] == "FD1" {
                assert_eq!(cols[2], "inexact");
            } else {
                assert!(err < 1e-12, "{name} {line}");
                assert_eq!(cols[2], "ok");
            }
        }
    }
}

#[test]
fn shipped_configs_load() {
    let dir = tempfile::tempdir().unwrap();
    let mesh = dir.path().join("m.txt");
    for cfg in ["configs/default.toml", "configs/noise.toml"] {
        let o = wallgrad().arg("genmesh").arg("--config").arg(repo(cfg)).arg("--out").arg(&mesh).output().unwrap();
        assert!(o.status.success(), "{cfg}: {}", stderr(&o));
    }
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for threads in ["0", "1", "4"] {
        let out = dir.path().join(threads);
        let o = wallgrad().env("WALLGRAD_THREADS", threads).arg("run").args(SMALL).arg("--out").arg(&out).output().unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push(std::fs::read(out.join("cf_all.csv")).unwrap());
    }
    assert!(outputs.windows(2).all(|w| w[0] == w[1]));
    let o = wallgrad().env("WALLGRAD_THREADS", "lots").arg("blasius-table").output().unwrap();
    assert!(stderr(&o).starts_with("error: cli.invalid-config: "), "{}", stderr(&o));
}
