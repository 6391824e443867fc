//! Three-way classification of tunings: certified convergent (Lyapunov),
//! certified non-convergent (cycle), or neither.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::grid::{GridSpec, Provenance, RegionGrid};
use crate::cycle_lp::{cycle_exists_dim1, CycleCertificate, CycleOutcome, SearchMode};
use crate::dim2::{circle_cycle_exists, RootsCycle, MAX_DIM2_K};
use crate::error::{Error, Result};
use crate::format::{f17, fmt17};
use crate::lp::LpTolerances;
use crate::lyapunov::{best_rate, lyapunov_at, CertOutcome, LyapunovCertificate, RateOutcome};
use crate::sdp::SdpOptions;
use crate::types::{ClassParams, Tuning};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleSource {
    Dim1,
    Dim2,
}

impl CycleSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            CycleSource::Dim1 => "dim1",
            CycleSource::Dim2 => "dim2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "lowercase")]
pub enum Classification {
    Lyapunov {
        #[serde(with = "f17")]
        rho: f64,
    },
    Cycle {
        min_k: usize,
        source: CycleSource,
    },
    /// `indeterminate` marks cells where some solver could not decide.
    Unknown { indeterminate: bool },
    Conflict,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Lyapunov { .. } => "lyapunov",
            Classification::Cycle { .. } => "cycle",
            Classification::Unknown { .. } => "unknown",
            Classification::Conflict => "conflict",
        }
    }

    pub fn is_lyapunov(&self) -> bool {
        matches!(self, Classification::Lyapunov { .. })
    }

    pub fn is_cycle(&self) -> bool {
        matches!(self, Classification::Cycle { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Classification::Unknown { .. })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CellCertificates {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lyapunov: Option<LyapunovCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle: Option<CycleCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle_cycle: Option<RootsCycle>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyConfig {
    pub kmax: usize,
    pub mode: SearchMode,
    /// Rate at which the Lyapunov system is posed.
    pub rho: f64,
    pub lyapunov: bool,
    pub dim1: bool,
    pub dim2: bool,
    /// When set, Lyapunov cells report the bisected best rate.
    pub rate_tol: Option<f64>,
    pub lp_tol: LpTolerances,
    pub sdp: SdpOptions,
    pub keep_certificates: bool,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            kmax: 8,
            mode: SearchMode::ConjecturedOnly,
            rho: 1.0,
            lyapunov: true,
            dim1: true,
            dim2: false,
            rate_tol: None,
            lp_tol: LpTolerances::default(),
            sdp: SdpOptions::default(),
            keep_certificates: false,
        }
    }
}

impl ClassifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kmax < 3 {
            return Err(Error::InvalidInput(format!("kmax must be at least 3, got {}", self.kmax)));
        }
        if self.dim2 && self.kmax > MAX_DIM2_K {
            return Err(Error::InvalidInput(format!("dimension-two search is limited to K <= {MAX_DIM2_K}")));
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            return Err(Error::InvalidInput(format!("rho must lie in (0, 1], got {}", self.rho)));
        }
        if let Some(tol) = self.rate_tol {
            if !(tol > 0.0) {
                return Err(Error::InvalidInput(format!("rate tolerance must be positive, got {tol}")));
            }
        }
        if !(self.lp_tol.feasible > 0.0 && self.lp_tol.feasible <= self.lp_tol.infeasible) {
            return Err(Error::InvalidInput("need 0 < tol-feas <= tol-infeas".into()));
        }
        if !(self.lyapunov || self.dim1 || self.dim2) {
            return Err(Error::InvalidInput("no analysis enabled".into()));
        }
        Ok(())
    }

    pub fn provenance(&self) -> Provenance {
        let mut p = Provenance::new();
        let analyses: Vec<&str> = [(self.lyapunov, "lyapunov"), (self.dim1, "dim1"), (self.dim2, "dim2")]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, name)| *name)
            .collect();
        p.insert("analyses", analyses.join(" "));
        p.insert("kmax", self.kmax.to_string());
        p.insert(
            "mode",
            match self.mode {
                SearchMode::ConjecturedOnly => "conjectured",
                SearchMode::FullEnumeration => "full",
            },
        );
        p.insert("rho", fmt17(self.rho));
        if let Some(tol) = self.rate_tol {
            p.insert("rate_tol", fmt17(tol));
        }
        p.insert("tol_feas", fmt17(self.lp_tol.feasible));
        p.insert("tol_infeas", fmt17(self.lp_tol.infeasible));
        p
    }
}

enum Found<T> {
    Yes(T),
    No,
    Undecided,
}

fn from_cycle<T>(o: CycleOutcome<T>) -> Found<T> {
    match o {
        CycleOutcome::Found(c) => Found::Yes(c),
        CycleOutcome::NotFound => Found::No,
        CycleOutcome::Indeterminate(_) => Found::Undecided,
    }
}

/// Classification together with the certificates that justify it. A
/// `Conflict` keeps both kinds of certificate.
pub fn classify_cell(t: &Tuning, c: &ClassParams, cfg: &ClassifyConfig) -> Result<(Classification, CellCertificates)> {
    cfg.validate()?;
    t.validate()?;
    c.validate()?;
    let lyap = if cfg.lyapunov {
        match lyapunov_at(t, c, cfg.rho, &cfg.sdp)? {
            CertOutcome::Found(cert) => Found::Yes(*cert),
            CertOutcome::NotFound => Found::No,
            CertOutcome::Indeterminate(_) => Found::Undecided,
        }
    } else {
        Found::No
    };
    let d1 = if cfg.dim1 {
        from_cycle(cycle_exists_dim1(t, c, cfg.kmax, cfg.mode, &cfg.lp_tol)?)
    } else {
        Found::No
    };
    let d2 = if cfg.dim2 {
        from_cycle(circle_cycle_exists(t, c, cfg.kmax, &cfg.lp_tol)?)
    } else {
        Found::No
    };
    let undecided = matches!(lyap, Found::Undecided) || matches!(d1, Found::Undecided) || matches!(d2, Found::Undecided);
    let mut certs = CellCertificates::default();
    if let Found::Yes(cert) = d1 {
        certs.cycle = Some(cert);
    }
    if let Found::Yes(cert) = d2 {
        certs.circle_cycle = Some(cert);
    }
    let cycle = match (&certs.cycle, &certs.circle_cycle) {
        (Some(a), Some(b)) if b.k < a.k => Some((b.k, CycleSource::Dim2)),
        (Some(a), _) => Some((a.k, CycleSource::Dim1)),
        (None, Some(b)) => Some((b.k, CycleSource::Dim2)),
        (None, None) => None,
    };
    let class = match (lyap, cycle) {
        (Found::Yes(cert), Some(_)) => {
            certs.lyapunov = Some(cert);
            Classification::Conflict
        }
        (Found::Yes(cert), None) => {
            let mut rho = cert.rho;
            certs.lyapunov = Some(cert);
            if let Some(tol) = cfg.rate_tol {
                if let RateOutcome::Rate(best) = best_rate(t, c, tol, &cfg.sdp)? {
                    rho = best.rho;
                    certs.lyapunov = Some(*best);
                }
            }
            Classification::Lyapunov { rho }
        }
        (_, Some((min_k, source))) => Classification::Cycle { min_k, source },
        (_, None) => Classification::Unknown { indeterminate: undecided },
    };
    Ok((class, certs))
}

pub fn classify_point(t: &Tuning, c: &ClassParams, cfg: &ClassifyConfig) -> Result<Classification> {
    classify_cell(t, c, cfg).map(|(class, _)| class)
}

/// Classifies every cell centre in parallel; results are collected in cell
/// order, so the output does not depend on scheduling. Any conflict aborts
/// the sweep with both certificates in the error.
pub fn sweep(spec: &GridSpec, c: &ClassParams, cfg: &ClassifyConfig) -> Result<RegionGrid<Classification>> {
    spec.validate()?;
    c.validate()?;
    cfg.validate()?;
    let tunings: Vec<Tuning> = spec.centers().collect();
    let results: Vec<(Classification, CellCertificates)> =
        tunings.par_iter().map(|t| classify_cell(t, c, cfg)).collect::<Result<_>>()?;
    if let Some((i, (_, certs))) = results.iter().enumerate().find(|(_, (cl, _))| *cl == Classification::Conflict) {
        let t = tunings[i];
        return Err(Error::Conflict {
            gamma: t.gamma,
            beta: t.beta,
            dump: serde_json::to_string_pretty(certs).unwrap_or_default(),
        });
    }
    let mut provenance = cfg.provenance();
    provenance.insert("mu", fmt17(c.mu));
    provenance.insert("L", fmt17(c.l));
    let undecided: Vec<String> = results
        .iter()
        .enumerate()
        .filter(|(_, (cl, _))| *cl == Classification::Unknown { indeterminate: true })
        .map(|(i, _)| i.to_string())
        .collect();
    provenance.insert("indeterminate_cells", undecided.join(" "));
    let (cells, certs): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    Ok(RegionGrid {
        spec: *spec,
        class: *c,
        cells,
        provenance,
        certificates: cfg.keep_certificates.then_some(certs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c10() -> ClassParams {
        ClassParams::new(1.0, 10.0).unwrap()
    }

    #[test]
    fn gd_step_one_over_l_is_green() {
        let c = c10();
        let t = Tuning { gamma: 0.1, beta: 0.0 };
        let (class, certs) = classify_cell(&t, &c, &ClassifyConfig::default()).unwrap();
        assert_eq!(class, Classification::Lyapunov { rho: 1.0 });
        assert!(certs.lyapunov.is_some() && certs.cycle.is_none());
    }

    #[test]
    fn polyak_tuning_cycles() {
        let c = ClassParams::new(1.0, 25.0).unwrap();
        let cfg = ClassifyConfig {
            dim2: true,
            ..ClassifyConfig::default()
        };
        let (class, certs) = classify_cell(&c.polyak_tuning(), &c, &cfg).unwrap();
        assert_eq!(
            class,
            Classification::Cycle {
                min_k: 3,
                source: CycleSource::Dim1
            }
        );
        certs.cycle.unwrap().verify().unwrap();
    }

    #[test]
    fn bisected_rate_replaces_unit_rate() {
        let c = c10();
        let t = Tuning { gamma: 0.1, beta: 0.0 };
        let cfg = ClassifyConfig {
            rate_tol: Some(1e-3),
            ..ClassifyConfig::default()
        };
        let Classification::Lyapunov { rho } = classify_point(&t, &c, &cfg).unwrap() else {
            panic!("not green");
        };
        assert!(rho < 1.0);
    }

    #[test]
    fn disabled_analyses_leave_cells_unknown() {
        let c = c10();
        let t = Tuning { gamma: 0.1, beta: 0.0 };
        let cfg = ClassifyConfig {
            lyapunov: false,
            ..ClassifyConfig::default()
        };
        assert_eq!(classify_point(&t, &c, &cfg).unwrap(), Classification::Unknown { indeterminate: false });
        let none = ClassifyConfig {
            lyapunov: false,
            dim1: false,
            ..ClassifyConfig::default()
        };
        assert!(classify_point(&t, &c, &none).is_err());
    }

    #[test]
    fn small_sweep_matches_pointwise_calls() {
        let c = c10();
        let spec = GridSpec::default_for(&c, 2, 2);
        let cfg = ClassifyConfig {
            keep_certificates: true,
            ..ClassifyConfig::default()
        };
        let grid = sweep(&spec, &c, &cfg).unwrap();
        assert_eq!(grid.cells.len(), 4);
        for (t, cell) in grid.iter() {
            assert_eq!(*cell, classify_point(&t, &c, &cfg).unwrap());
        }
        assert_eq!(grid.certificates.as_ref().unwrap().len(), 4);
    }

    #[test]
    fn raising_kmax_keeps_cycle_cells() {
        let c = c10();
        let spec = GridSpec {
            gamma_min: 0.1,
            gamma_max: 0.4,
            beta_min: 0.3,
            beta_max: 0.99,
            nx: 6,
            ny: 6,
        };
        let lo = ClassifyConfig {
            kmax: 4,
            lyapunov: false,
            ..ClassifyConfig::default()
        };
        let hi = ClassifyConfig { kmax: 8, ..lo };
        let a = sweep(&spec, &c, &lo).unwrap();
        let b = sweep(&spec, &c, &hi).unwrap();
        assert!(a.cells.iter().any(|x| x.is_cycle()));
        for (x, y) in a.cells.iter().zip(&b.cells) {
            if let Classification::Cycle { min_k, .. } = x {
                assert!(matches!(y, Classification::Cycle { min_k: k, .. } if k == min_k));
            }
        }
    }

    #[test]
    fn json_tags() {
        let s = serde_json::to_string(&Classification::Cycle {
            min_k: 4,
            source: CycleSource::Dim2,
        })
        .unwrap();
        assert_eq!(s, r#"{"class":"cycle","min_k":4,"source":"dim2"}"#);
        let back: Classification = serde_json::from_str(&s).unwrap();
        assert_eq!(back.label(), "cycle");
    }
}
