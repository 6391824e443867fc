use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use hb_atlas::atlas::{GridSpec, Provenance};
use hb_atlas::cycle_lp::SearchMode;
use hb_atlas::format::fmt17;
use hb_atlas::lp::LpTolerances;
use hb_atlas::ClassParams;

/// Flags shared by every command. Unset flags fall back to the config file,
/// then to built-in defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct CommonArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long = "L", allow_negative_numbers = true)]
    pub l: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_min: Option<f64>,
    /// Defaults to 4/L.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta_max: Option<f64>,
    #[arg(long)]
    pub nx: Option<usize>,
    #[arg(long)]
    pub ny: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    /// `conjectured` or `full`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub tol_feas: Option<f64>,
    #[arg(long)]
    pub tol_infeas: Option<f64>,
    /// 0 uses every available core.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flat `key = value` file using the flag names as keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

const KEYS: [&str; 16] = [
    "mu", "L", "gamma-min", "gamma-max", "beta-min", "beta-max", "nx", "ny", "kmax", "mode", "rho", "tol-feas",
    "tol-infeas", "threads", "out", "seed",
];

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: String,
    pub class: ClassParams,
    pub spec: GridSpec,
    pub kmax: usize,
    pub mode: SearchMode,
    pub rho: f64,
    pub tol: LpTolerances,
    pub threads: usize,
    pub out: PathBuf,
    pub seed: u64,
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("{}:{}: expected key = value", path.display(), n + 1));
        };
        let key = k.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(format!("{}:{}: unknown key '{}'", path.display(), n + 1, k.trim()));
        }
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}

fn from_file<T: std::str::FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, String> {
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|_| format!("config: cannot parse {key} = '{v}'")))
        .transpose()
}

fn parse_mode(s: &str) -> Result<SearchMode, String> {
    match s {
        "conjectured" => Ok(SearchMode::ConjecturedOnly),
        "full" => Ok(SearchMode::FullEnumeration),
        other => Err(format!("--mode must be 'conjectured' or 'full', got '{other}'")),
    }
}

impl RunConfig {
    pub fn resolve(command: &str, args: &CommonArgs) -> Result<Self, String> {
        let file = match &args.config {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        macro_rules! pick {
            ($field:ident, $key:literal, $default:expr) => {
                match args.$field.clone() {
                    Some(v) => v,
                    None => from_file(&file, $key)?.unwrap_or($default),
                }
            };
        }
        let mu: f64 = pick!(mu, "mu", 1.0);
        let l: f64 = pick!(l, "L", 10.0);
        let class = ClassParams::new(mu, l).map_err(|e| e.to_string())?;
        let mode: String = pick!(mode, "mode", "conjectured".to_string());
        let cfg = RunConfig {
            command: command.to_string(),
            class,
            spec: GridSpec {
                gamma_min: pick!(gamma_min, "gamma-min", 0.0),
                gamma_max: pick!(gamma_max, "gamma-max", 4.0 / l),
                beta_min: pick!(beta_min, "beta-min", -1.0),
                beta_max: pick!(beta_max, "beta-max", 1.0),
                nx: pick!(nx, "nx", 60),
                ny: pick!(ny, "ny", 60),
            },
            kmax: pick!(kmax, "kmax", 8),
            mode: parse_mode(&mode)?,
            rho: pick!(rho, "rho", 1.0),
            tol: LpTolerances {
                feasible: pick!(tol_feas, "tol-feas", 1e-9),
                infeasible: pick!(tol_infeas, "tol-infeas", 1e-7),
            },
            threads: pick!(threads, "threads", 0),
            out: pick!(out, "out", PathBuf::from(".")),
            seed: pick!(seed, "seed", 0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        self.spec.validate().map_err(|e| e.to_string())?;
        if self.kmax < 3 || self.kmax > 25 {
            return Err(format!("--kmax must be in 3..=25, got {}", self.kmax));
        }
        if self.mode == SearchMode::FullEnumeration && self.kmax > hb_atlas::permutation::MAX_ENUMERATION_K {
            return Err(format!(
                "--mode full needs --kmax <= {}, got {}",
                hb_atlas::permutation::MAX_ENUMERATION_K,
                self.kmax
            ));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(format!("--rho must lie in (0, 1], got {}", self.rho));
        }
        if !(self.tol.feasible > 0.0 && self.tol.feasible <= self.tol.infeasible) {
            return Err(format!(
                "need 0 < --tol-feas <= --tol-infeas, got {} and {}",
                self.tol.feasible, self.tol.infeasible
            ));
        }
        Ok(())
    }

    /// Every resolved setting, under `run.` keys.
    pub fn provenance(&self) -> Provenance {
        let mut p = Provenance::new();
        let mode = match self.mode {
            SearchMode::ConjecturedOnly => "conjectured",
            SearchMode::FullEnumeration => "full",
        };
        let entries = [
            ("command", self.command.clone()),
            ("mu", fmt17(self.class.mu)),
            ("L", fmt17(self.class.l)),
            ("gamma-min", fmt17(self.spec.gamma_min)),
            ("gamma-max", fmt17(self.spec.gamma_max)),
            ("beta-min", fmt17(self.spec.beta_min)),
            ("beta-max", fmt17(self.spec.beta_max)),
            ("nx", self.spec.nx.to_string()),
            ("ny", self.spec.ny.to_string()),
            ("kmax", self.kmax.to_string()),
            ("mode", mode.to_string()),
            ("rho", fmt17(self.rho)),
            ("tol-feas", fmt17(self.tol.feasible)),
            ("tol-infeas", fmt17(self.tol.infeasible)),
            ("out", self.out.display().to_string()),
            ("seed", self.seed.to_string()),
        ];
        for (k, v) in entries {
            p.insert(format!("run.{k}"), v);
        }
        p
    }
}
