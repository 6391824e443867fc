use std::fs;
use std::path::{Path, PathBuf};

use hb_atlas::atlas::export::{
    classification_color, export_csv, export_json, export_rate_csv, rate_color, render_svg, write_text,
};
use hb_atlas::atlas::permutations::{count_feasible, count_indeterminate, permutation_map};
use hb_atlas::atlas::{classify_cell, sweep, Classification, ClassifyConfig, RegionGrid};
use hb_atlas::cycle_lp::CycleCertificate;
use hb_atlas::dim2::RootsCycle;
use hb_atlas::lyapunov::monte_carlo_check;
use hb_atlas::permutation::reduced_permutations;
use hb_atlas::quadratic_rate::rate_map;
use hb_atlas::{Error, Tuning};
use serde_json::json;

use crate::config::RunConfig;

/// Tolerance on `|x_{t+K} - x_t|` when replaying a cycle certificate.
const REPLAY_TOL: f64 = 1e-9;
const REPLAY_PERIODS: usize = 100;
const MC_TOL: f64 = 1e-7;

pub enum Failure {
    Config(String),
    Verification(String),
    Conflict(String),
    Runtime(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) | Failure::Runtime(_) => 1,
            Failure::Verification(_) => 2,
            Failure::Conflict(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Verification(m) | Failure::Conflict(m) | Failure::Runtime(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Conflict { .. } => Failure::Conflict(e.to_string()),
            Error::InvalidClass { .. } | Error::InvalidTuning(_) | Error::InvalidInput(_) => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

pub type Outcome = Result<(), Failure>;

fn prepare_out(cfg: &RunConfig) -> Result<PathBuf, Failure> {
    fs::create_dir_all(&cfg.out).map_err(|e| Failure::Runtime(format!("{}: {e}", cfg.out.display())))?;
    Ok(cfg.out.clone())
}

fn base_config(cfg: &RunConfig) -> ClassifyConfig {
    ClassifyConfig {
        kmax: cfg.kmax,
        mode: cfg.mode,
        rho: cfg.rho,
        lp_tol: cfg.tol,
        ..ClassifyConfig::default()
    }
}

fn write_grid(grid: &mut RegionGrid<Classification>, cfg: &RunConfig, dir: &Path, stem: &str) -> Outcome {
    grid.provenance.extend(&cfg.provenance());
    export_csv(grid, &dir.join(format!("{stem}.csv")))?;
    export_json(grid, &dir.join(format!("{stem}.json")))?;
    render_svg(grid, &dir.join(format!("{stem}.svg")), &classification_color)?;
    Ok(())
}

fn summary(grid: &RegionGrid<Classification>) -> String {
    let n = |f: &dyn Fn(&Classification) -> bool| grid.cells.iter().filter(|c| f(c)).count();
    format!(
        "{} cells: {} lyapunov, {} cycle, {} unknown ({} indeterminate)",
        grid.cells.len(),
        n(&|c| c.is_lyapunov()),
        n(&|c| c.is_cycle()),
        n(&|c| c.is_unknown()),
        n(&|c| *c == Classification::Unknown { indeterminate: true })
    )
}

fn write_json(path: &Path, value: &serde_json::Value) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Runtime(e.to_string()))?;
    write_text(path, &(text + "\n"))?;
    Ok(())
}

pub fn rate_map_cmd(cfg: &RunConfig) -> Outcome {
    let dir = prepare_out(cfg)?;
    let mut grid = rate_map(&cfg.spec, &cfg.class, None)?;
    grid.provenance.extend(&cfg.provenance());
    export_rate_csv(&grid, &dir.join("rate.csv"))?;
    export_json(&grid, &dir.join("rate.json"))?;
    render_svg(&grid, &dir.join("rate.svg"), &rate_color)?;
    let acc = grid.cells.iter().filter(|c| c.accelerated).count();
    println!("{} cells, {acc} accelerated", grid.cells.len());
    Ok(())
}

pub fn cycle_map_cmd(cfg: &RunConfig, certs: bool) -> Outcome {
    let dir = prepare_out(cfg)?;
    let ccfg = ClassifyConfig {
        lyapunov: false,
        keep_certificates: certs,
        ..base_config(cfg)
    };
    let mut grid = sweep(&cfg.spec, &cfg.class, &ccfg)?;
    if let Some(all) = grid.certificates.take() {
        let cert_dir = dir.join("certs");
        fs::create_dir_all(&cert_dir).map_err(|e| Failure::Runtime(format!("{}: {e}", cert_dir.display())))?;
        for (idx, cell) in all.iter().enumerate() {
            if let Some(cert) = &cell.cycle {
                let (i, j) = cfg.spec.coords(idx);
                let value = serde_json::to_value(cert).map_err(|e| Failure::Runtime(e.to_string()))?;
                write_json(&cert_dir.join(format!("cycle_{i}_{j}.json")), &value)?;
            }
        }
    }
    write_grid(&mut grid, cfg, &dir, "cycles")?;
    println!("{}", summary(&grid));
    Ok(())
}

pub fn lyapunov_map_cmd(cfg: &RunConfig, rate_tol: Option<f64>, mc_samples: usize) -> Outcome {
    let dir = prepare_out(cfg)?;
    let ccfg = ClassifyConfig {
        dim1: false,
        rate_tol,
        keep_certificates: mc_samples > 0,
        ..base_config(cfg)
    };
    let mut grid = sweep(&cfg.spec, &cfg.class, &ccfg)?;
    let mut failures = Vec::new();
    if let Some(all) = grid.certificates.take() {
        let mut checked = 0;
        for (idx, cell) in all.iter().enumerate() {
            if let Some(cert) = &cell.lyapunov {
                let report = monte_carlo_check(cert, mc_samples, cfg.seed.wrapping_add(idx as u64));
                checked += 1;
                if !report.passes(MC_TOL) {
                    failures.push(format!("cell {idx}: {report:?}"));
                }
            }
        }
        grid.provenance.insert("monte_carlo.samples", mc_samples.to_string());
        grid.provenance.insert("monte_carlo.certificates", checked.to_string());
        grid.provenance.insert("monte_carlo.failures", failures.len().to_string());
    }
    write_grid(&mut grid, cfg, &dir, "lyapunov")?;
    println!("{}", summary(&grid));
    if !failures.is_empty() {
        return Err(Failure::Verification(format!(
            "randomized check failed for {} certificates:\n{}",
            failures.len(),
            failures.join("\n")
        )));
    }
    Ok(())
}

pub fn classify_cmd(cfg: &RunConfig, point: Option<Tuning>, dim2: bool) -> Outcome {
    let ccfg = ClassifyConfig {
        dim2,
        ..base_config(cfg)
    };
    let dir = prepare_out(cfg)?;
    match point {
        Some(t) => {
            let (class, certs) = classify_cell(&t, &cfg.class, &ccfg)?;
            let cert_dir = dir.join("certs");
            fs::create_dir_all(&cert_dir).map_err(|e| Failure::Runtime(format!("{}: {e}", cert_dir.display())))?;
            let record = json!({
                "tuning": t,
                "class": cfg.class,
                "classification": class,
                "certificates": certs,
                "provenance": cfg.provenance(),
            });
            write_json(&cert_dir.join("classify.json"), &record)?;
            if class == Classification::Conflict {
                return Err(Failure::Conflict(format!(
                    "conflicting certificates at gamma = {}, beta = {}:\n{}",
                    t.gamma,
                    t.beta,
                    serde_json::to_string_pretty(&certs).unwrap_or_default()
                )));
            }
            match class {
                Classification::Lyapunov { rho } => println!("lyapunov rho={rho}"),
                Classification::Cycle { min_k, source } => println!("cycle K={min_k} source={}", source.as_str()),
                Classification::Unknown { indeterminate: true } => println!("unknown indeterminate"),
                other => println!("{}", other.label()),
            }
        }
        None => {
            let mut grid = sweep(&cfg.spec, &cfg.class, &ccfg)?;
            write_grid(&mut grid, cfg, &dir, "classify")?;
            println!("{}", summary(&grid));
        }
    }
    Ok(())
}

pub fn verify_cycle_cmd(path: &Path) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    if let Ok(cert) = serde_json::from_str::<CycleCertificate>(&text) {
        cert.verify().map_err(|e| Failure::Verification(e.to_string()))?;
        let err = cert
            .replay_error(REPLAY_PERIODS)
            .map_err(|e| Failure::Verification(e.to_string()))?;
        if !(err <= REPLAY_TOL) {
            return Err(Failure::Verification(format!(
                "replay drifts by {err:e} over {REPLAY_PERIODS} periods"
            )));
        }
        println!("verified: K={} sigma={} replay error {err:e}", cert.k, cert.sigma);
        return Ok(());
    }
    if let Ok(cycle) = serde_json::from_str::<RootsCycle>(&text) {
        cycle.verify().map_err(|e| Failure::Verification(e.to_string()))?;
        println!("verified: K={} on the unit circle", cycle.k);
        return Ok(());
    }
    Err(Failure::Config(format!("{}: not a cycle certificate", path.display())))
}

pub fn permutation_atlas_cmd(cfg: &RunConfig, ks: &[usize]) -> Outcome {
    let dir = prepare_out(cfg)?;
    let mut csv = String::from("k,sigma,feasible_cells,indeterminate_cells\n");
    let mut rows = Vec::new();
    for &k in ks {
        let perms = reduced_permutations(k)?;
        let mut nonempty = 0;
        for sigma in &perms {
            let mut grid = permutation_map(&cfg.spec, &cfg.class, sigma, &cfg.tol)?;
            grid.provenance.extend(&cfg.provenance());
            let name: Vec<String> = sigma.images().iter().map(|r| r.to_string()).collect();
            let name = name.join("-");
            render_svg(&grid, &dir.join(format!("perm_k{k}_{name}.svg")), &classification_color)?;
            let (feasible, undecided) = (count_feasible(&grid), count_indeterminate(&grid));
            if feasible > 0 {
                nonempty += 1;
            }
            csv.push_str(&format!("{k},{name},{feasible},{undecided}\n"));
            rows.push(json!({"k": k, "sigma": sigma, "feasible_cells": feasible, "indeterminate_cells": undecided}));
        }
        println!("K={k}: {nonempty} of {} permutations non-empty", perms.len());
    }
    write_text(&dir.join("permutations.csv"), &csv)?;
    write_json(
        &dir.join("permutations.json"),
        &json!({"provenance": cfg.provenance(), "spec": cfg.spec, "class": cfg.class, "maps": rows}),
    )?;
    Ok(())
}
