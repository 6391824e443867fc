use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::f17;
use crate::types::{ClassParams, Tuning};

pub const FORMAT_VERSION: &str = "hb-atlas/1";

/// Rectangular window of the `(gamma, beta)` plane split into `nx * ny`
/// cells. Cells are sampled at their centres, so the window edges may sit on
/// `gamma = 0` or `beta = +-1` while every sample stays strictly inside.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    #[serde(with = "f17")]
    pub gamma_min: f64,
    #[serde(with = "f17")]
    pub gamma_max: f64,
    #[serde(with = "f17")]
    pub beta_min: f64,
    #[serde(with = "f17")]
    pub beta_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// `gamma in (0, 4/L]`, `beta in (-1, 1)`.
    pub fn default_for(c: &ClassParams, nx: usize, ny: usize) -> Self {
        GridSpec {
            gamma_min: 0.0,
            gamma_max: 4.0 / c.l,
            beta_min: -1.0,
            beta_max: 1.0,
            nx,
            ny,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(format!("grid: {msg}")));
        if self.nx < 2 || self.ny < 2 {
            return bad(format!("need at least 2x2 cells, got {}x{}", self.nx, self.ny));
        }
        let finite = [self.gamma_min, self.gamma_max, self.beta_min, self.beta_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return bad("non-finite bounds".into());
        }
        if !(self.gamma_min >= 0.0 && self.gamma_min < self.gamma_max) {
            return bad(format!(
                "need 0 <= gamma_min < gamma_max, got [{}, {}]",
                self.gamma_min, self.gamma_max
            ));
        }
        if !(-1.0 <= self.beta_min && self.beta_min < self.beta_max && self.beta_max <= 1.0) {
            return bad(format!(
                "need -1 <= beta_min < beta_max <= 1, got [{}, {}]",
                self.beta_min, self.beta_max
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dx(&self) -> f64 {
        (self.gamma_max - self.gamma_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.beta_max - self.beta_min) / self.ny as f64
    }

    /// Centre of the cell in column `i` (gamma) and row `j` (beta).
    pub fn center(&self, i: usize, j: usize) -> Tuning {
        Tuning {
            gamma: self.gamma_min + (i as f64 + 0.5) * self.dx(),
            beta: self.beta_min + (j as f64 + 0.5) * self.dy(),
        }
    }

    /// Row-major (beta rows, gamma columns) iterator over cell centres.
    pub fn centers(&self) -> impl Iterator<Item = Tuning> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| self.center(i, j)))
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn coords(&self, idx: usize) -> (usize, usize) {
        (idx % self.nx, idx / self.nx)
    }
}

/// Flat key/value record of everything needed to reproduce a grid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance(pub BTreeMap<String, String>);

impl Provenance {
    pub fn new() -> Self {
        let mut p = Provenance(BTreeMap::new());
        p.insert("format_version", FORMAT_VERSION);
        p
    }

    pub fn insert(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.0.insert(key.into(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn extend(&mut self, other: &Provenance) {
        for (k, v) in &other.0 {
            self.0.insert(k.clone(), v.clone());
        }
    }
}

/// Per-cell results over a [`GridSpec`], stored row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid<C> {
    pub spec: GridSpec,
    pub class: ClassParams,
    pub cells: Vec<C>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates: Option<Vec<crate::atlas::classify::CellCertificates>>,
}

impl<C> RegionGrid<C> {
    pub fn get(&self, i: usize, j: usize) -> &C {
        &self.cells[self.spec.index(i, j)]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Tuning, &C)> + '_ {
        self.spec.centers().zip(self.cells.iter())
    }

    /// Indices of the up-to-8 cells surrounding `idx`.
    pub fn neighbours(&self, idx: usize) -> Vec<usize> {
        let (i, j) = self.spec.coords(idx);
        let mut out = Vec::with_capacity(8);
        for dj in -1i64..=1 {
            for di in -1i64..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                if ii >= 0 && jj >= 0 && (ii as usize) < self.spec.nx && (jj as usize) < self.spec.ny {
                    out.push(self.spec.index(ii as usize, jj as usize));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centres_are_strictly_inside() {
        let c = ClassParams::new(1.0, 10.0).unwrap();
        let g = GridSpec::default_for(&c, 4, 5);
        g.validate().unwrap();
        let pts: Vec<_> = g.centers().collect();
        assert_eq!(pts.len(), 20);
        assert!(pts.iter().all(|t| t.gamma > 0.0 && t.beta > -1.0 && t.beta < 1.0));
        assert_eq!(pts[1], g.center(1, 0));
        assert_eq!(pts[4], g.center(0, 1));
        assert_eq!(g.coords(g.index(3, 2)), (3, 2));
    }

    #[test]
    fn invalid_specs() {
        let c = ClassParams::new(1.0, 10.0).unwrap();
        let g = GridSpec::default_for(&c, 4, 4);
        assert!(GridSpec { nx: 1, ..g }.validate().is_err());
        assert!(GridSpec { gamma_min: 1.0, gamma_max: 0.5, ..g }.validate().is_err());
        assert!(GridSpec { beta_max: 1.5, ..g }.validate().is_err());
        assert!(GridSpec { gamma_min: -0.1, ..g }.validate().is_err());
    }
}
