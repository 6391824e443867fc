use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hb-atlas"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn out_arg(dir: &Path) -> String {
    dir.to_str().unwrap().to_string()
}

fn parse(field: &str) -> f64 {
    field.parse().unwrap()
}

#[test]
fn rate_map_rows_and_gd_row() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&[
        "rate-map", "--mu", "1", "--L", "10", "--nx", "50", "--ny", "3", "--beta-min", "-0.5", "--beta-max", "0.5",
        "--out", &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "gamma,beta,rho,accelerated");
    assert_eq!(lines.len(), 151);
    // middle row has beta = 0: plain gradient descent
    for line in &lines[51..101] {
        let f: Vec<&str> = line.split(',').collect();
        let (gamma, beta, rho) = (parse(f[0]), parse(f[1]), parse(f[2]));
        assert_eq!(beta, 0.0);
        let gd = (1.0 - gamma).abs().max((1.0 - 10.0 * gamma).abs());
        assert!((rho - gd).abs() <= 1e-15, "{gamma}: {rho} vs {gd}");
    }
    let svg = fs::read_to_string(dir.path().join("rate.svg")).unwrap();
    assert_eq!(svg.matches("<rect ").count(), 150);
    assert!(svg.contains("run.command") && svg.contains("hb-atlas/1"));
    let json = fs::read_to_string(dir.path().join("rate.json")).unwrap();
    assert!(json.contains("\"run.nx\": \"50\""));
}

#[test]
fn rate_map_default_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&["rate-map", "--nx", "100", "--ny", "100", "--out", &out_arg(dir.path())]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 10_001);
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let common = ["--nx", "8", "--ny", "8", "--kmax", "5"];
    for cmd in ["classify", "rate-map", "cycle-map"] {
        let mut args_a = vec![cmd, "--threads", "1", "--out"];
        let pa = out_arg(a.path());
        args_a.push(&pa);
        args_a.extend(common);
        let mut args_b = vec![cmd, "--threads", "3", "--out"];
        let pb = out_arg(b.path());
        args_b.push(&pb);
        args_b.extend(common);
        assert!(hb(&args_a).status.success());
        assert!(hb(&args_b).status.success());
    }
    for file in ["classify.csv", "rate.csv", "cycles.csv"] {
        let x = fs::read(a.path().join(file)).unwrap();
        let y = fs::read(b.path().join(file)).unwrap();
        assert_eq!(x, y, "{file}");
    }
}

#[test]
fn classify_gd_point_is_lyapunov() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&["classify", "--gamma", "0.1", "--beta", "0", "--out", &out_arg(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("lyapunov"));
    let rec = fs::read_to_string(dir.path().join("certs/classify.json")).unwrap();
    assert!(rec.contains("\"lyapunov\"") && rec.contains("min_eig_A"));
}

#[test]
fn classify_polyak_point_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&[
        "classify", "--L", "25", "--gamma", "0.1111111111111111", "--beta", "0.4444444444444444", "--dim2", "--out",
        &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "cycle K=3 source=dim1");
}

#[test]
fn cycle_certificates_verify_and_tampering_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&["cycle-map", "--nx", "12", "--ny", "12", "--certs", "--out", &out_arg(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let certs: Vec<_> = fs::read_dir(dir.path().join("certs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    let csv = fs::read_to_string(dir.path().join("cycles.csv")).unwrap();
    assert_eq!(certs.len(), csv.lines().filter(|l| l.contains(",cycle,")).count());
    assert!(!certs.is_empty());
    for path in certs.iter().take(50) {
        let o = hb(&["verify-cycle", path.to_str().unwrap()]);
        assert!(o.status.success(), "{}: {}", path.display(), stderr(&o));
    }
    // perturb one gradient by 1e-3
    let text = fs::read_to_string(&certs[0]).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let g = v["G"][1].as_f64().unwrap();
    v["G"][1] = serde_json::json!(g + 1e-3);
    let bad = dir.path().join("tampered.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = hb(&["verify-cycle", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let junk = dir.path().join("junk.json");
    fs::write(&junk, "{}").unwrap();
    assert_eq!(hb(&["verify-cycle", junk.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn larger_kmax_is_a_superset() {
    let lo = tempfile::tempdir().unwrap();
    let hi = tempfile::tempdir().unwrap();
    let grid = ["--nx", "16", "--ny", "16"];
    let mut a = vec!["cycle-map", "--kmax", "6", "--out"];
    let pa = out_arg(lo.path());
    a.push(&pa);
    a.extend(grid);
    let mut b = vec!["cycle-map", "--kmax", "25", "--out"];
    let pb = out_arg(hi.path());
    b.push(&pb);
    b.extend(grid);
    assert!(hb(&a).status.success());
    assert!(hb(&b).status.success());
    let x = fs::read_to_string(lo.path().join("cycles.csv")).unwrap();
    let y = fs::read_to_string(hi.path().join("cycles.csv")).unwrap();
    let mut extra = 0;
    for (l, h) in x.lines().zip(y.lines()).skip(1) {
        if l.contains(",cycle,") {
            assert!(h.contains(",cycle,"), "{l} lost at kmax 25");
        } else if h.contains(",cycle,") {
            extra += 1;
        }
    }
    assert!(extra > 0);
}

#[test]
fn permutation_atlas_census() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&["permutation-atlas", "--k", "5", "--nx", "40", "--ny", "40", "--out", &out_arg(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("K=5: 6 of 12 permutations non-empty"));
    let svgs = fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| e.as_ref().unwrap().file_name().to_string_lossy().starts_with("perm_k5_"))
        .count();
    assert_eq!(svgs, 12);
    let csv = fs::read_to_string(dir.path().join("permutations.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
}

#[test]
fn lyapunov_map_with_randomized_checks() {
    let dir = tempfile::tempdir().unwrap();
    let o = hb(&[
        "lyapunov-map", "--nx", "4", "--ny", "4", "--mc-samples", "200", "--seed", "7", "--out", &out_arg(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let json = fs::read_to_string(dir.path().join("lyapunov.json")).unwrap();
    assert!(json.contains("\"monte_carlo.failures\": \"0\""));
    let csv = fs::read_to_string(dir.path().join("lyapunov.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.contains(",lyapunov,") || l.contains(",unknown,")));
    assert!(csv.contains(",lyapunov,"));
}

#[test]
fn config_errors_exit_with_one() {
    assert_eq!(hb(&["rate-map", "--mu", "2", "--L", "1"]).status.code(), Some(1));
    assert_eq!(hb(&["rate-map", "--nx", "1"]).status.code(), Some(1));
    assert_eq!(hb(&["cycle-map", "--mode", "full", "--kmax", "10"]).status.code(), Some(1));
    assert_eq!(hb(&["nonsense"]).status.code(), Some(1));
    assert_eq!(hb(&["classify", "--gamma", "0.1"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "mu = 1\ncolour = red\n").unwrap();
    let o = hb(&["rate-map", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(":2: unknown key"));
}

#[test]
fn config_file_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, format!("nx = 5\nny = 4\nout = {}\n", dir.path().display())).unwrap();
    let o = hb(&["rate-map", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("rate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);
}
