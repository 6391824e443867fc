//! Dimension-2 cycles on the unit circle.
//!
//! Placing `x_t` at the `K`-th roots of unity fixes the gradients through the
//! cycle condition (applied to each coordinate). Only the function values are
//! left free, and the interpolation inequalities are linear in them, so
//! existence of a cycle with this geometry is a linear feasibility problem.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atlas::grid::{GridSpec, Provenance, RegionGrid};
use crate::cycle_lp::{circulant_gradient, CycleOutcome};
use crate::error::{Error, Result};
use crate::format::{fmt17, vec2_f17, vec_f17};
use crate::interp::interp_residual;
use crate::lp::{solve_lp_with, LpOutcome, LpProblem, LpTolerances};
use crate::types::{ClassParams, DataPoint, Tuning};

/// Largest cycle length accepted by [`dim2_region`].
pub const MAX_DIM2_K: usize = 25;

/// Residual floor for an accepted certificate.
pub const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsCycle {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(with = "vec2_f17")]
    pub points: Vec<[f64; 2]>,
    #[serde(with = "vec2_f17")]
    pub grads: Vec<[f64; 2]>,
    #[serde(with = "vec_f17")]
    pub fvals: Vec<f64>,
    pub tuning: Tuning,
    pub class: ClassParams,
}

impl RootsCycle {
    pub fn data(&self) -> Vec<DataPoint> {
        (0..self.k)
            .map(|t| DataPoint {
                x: self.points[t].to_vec(),
                g: self.grads[t].to_vec(),
                f: self.fvals[t],
            })
            .collect()
    }

    /// Smallest interpolation residual over all ordered pairs of cycle points.
    pub fn min_residual(&self) -> Result<f64> {
        crate::interp::min_pairwise_residual(&self.data(), &self.class)
    }

    /// Checks the gradient identity and every pairwise interpolation inequality.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidInput(format!("circle cycle: {msg}")));
        if self.k < 3 || self.points.len() != self.k || self.grads.len() != self.k || self.fvals.len() != self.k {
            return fail(format!("inconsistent lengths for K = {}", self.k));
        }
        let want = circle_gradients(&self.points, &self.tuning)?;
        let scale = want.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in want.iter().zip(&self.grads) {
            if (a[0] - b[0]).abs().max((a[1] - b[1]).abs()) > 1e-12 * scale {
                return fail("gradients do not satisfy the cycle condition".into());
            }
        }
        let r = self.min_residual()?;
        if r < -RESIDUAL_TOL {
            return fail(format!("interpolation residual {r}"));
        }
        Ok(())
    }
}

pub fn circle_points(k: usize) -> Vec<[f64; 2]> {
    (0..k)
        .map(|t| {
            let a = 2.0 * PI * t as f64 / k as f64;
            [a.cos(), a.sin()]
        })
        .collect()
}

fn circle_gradients(points: &[[f64; 2]], t: &Tuning) -> Result<Vec<[f64; 2]>> {
    let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
    let gx = circulant_gradient(&xs, t)?;
    let gy = circulant_gradient(&ys, t)?;
    Ok(gx.into_iter().zip(gy).map(|(a, b)| [a, b]).collect())
}

/// Feasibility system in the function values `f_0, ..., f_{K-1}` (anchored
/// at `f_0 = 0`): one row `r_ij >= 0` per ordered pair.
pub fn build_circle_lp(t: &Tuning, c: &ClassParams, k: usize) -> Result<LpProblem> {
    let (_, p) = circle_system(t, c, k)?;
    Ok(p)
}

type CircleSystem = ((Vec<[f64; 2]>, Vec<[f64; 2]>), LpProblem);

fn circle_system(t: &Tuning, c: &ClassParams, k: usize) -> Result<CircleSystem> {
    t.validate()?;
    c.validate()?;
    if k < 3 {
        return Err(Error::InvalidInput(format!("cycle length must be at least 3, got {k}")));
    }
    let points = circle_points(k);
    let grads = circle_gradients(&points, t)?;
    let mut p = LpProblem::new(k);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            // with zero function values the residual is minus the constant part
            let pi = DataPoint::new(points[i].to_vec(), grads[i].to_vec(), 0.0)?;
            let pj = DataPoint::new(points[j].to_vec(), grads[j].to_vec(), 0.0)?;
            let q = -interp_residual(&pi, &pj, c)?;
            // f_i - f_j >= q
            let mut row = vec![0.0; k];
            row[i] -= 1.0;
            row[j] += 1.0;
            p.le(row, -q);
        }
    }
    let mut anchor = vec![0.0; k];
    anchor[0] = 1.0;
    p.equal(anchor, 0.0);
    Ok(((points, grads), p))
}

pub fn roots_cycle_feasible(
    t: &Tuning,
    c: &ClassParams,
    k: usize,
    tol: &LpTolerances,
) -> Result<CycleOutcome<RootsCycle>> {
    let ((points, grads), p) = circle_system(t, c, k)?;
    let fvals = match solve_lp_with(&p, tol) {
        LpOutcome::Feasible { x, .. } => x,
        LpOutcome::Infeasible { .. } => return Ok(CycleOutcome::NotFound),
        LpOutcome::Indeterminate { reason } => return Ok(CycleOutcome::Indeterminate(reason)),
    };
    let cycle = RootsCycle {
        k,
        points,
        grads,
        fvals,
        tuning: *t,
        class: *c,
    };
    match cycle.verify() {
        Ok(()) => Ok(CycleOutcome::Found(cycle)),
        Err(e) => Ok(CycleOutcome::Indeterminate(format!("solution failed verification: {e}"))),
    }
}

/// Shortest circle cycle with `3 <= K <= kmax`.
pub fn circle_cycle_exists(t: &Tuning, c: &ClassParams, kmax: usize, tol: &LpTolerances) -> Result<CycleOutcome<RootsCycle>> {
    let mut undecided = None;
    for k in 3..=kmax {
        match roots_cycle_feasible(t, c, k, tol)? {
            CycleOutcome::Found(cycle) => return Ok(CycleOutcome::Found(cycle)),
            CycleOutcome::Indeterminate(why) => {
                undecided.get_or_insert(format!("K = {k}: {why}"));
            }
            CycleOutcome::NotFound => {}
        }
    }
    Ok(match undecided {
        Some(why) => CycleOutcome::Indeterminate(why),
        None => CycleOutcome::NotFound,
    })
}

/// Smallest circle-cycle length per cell; `None` where no length up to
/// `kmax` works. Undecided cells count as `None` and are listed in the
/// provenance under `indeterminate_cells`.
pub fn dim2_region(
    spec: &GridSpec,
    c: &ClassParams,
    kmax: usize,
    tol: &LpTolerances,
) -> Result<RegionGrid<Option<usize>>> {
    spec.validate()?;
    c.validate()?;
    if !(3..=MAX_DIM2_K).contains(&kmax) {
        return Err(Error::InvalidInput(format!("kmax must be in 3..={MAX_DIM2_K}, got {kmax}")));
    }
    let tunings: Vec<Tuning> = spec.centers().collect();
    let results: Vec<CycleOutcome<RootsCycle>> = tunings
        .par_iter()
        .map(|t| circle_cycle_exists(t, c, kmax, tol))
        .collect::<Result<_>>()?;
    let mut undecided = Vec::new();
    let cells = results
        .iter()
        .enumerate()
        .map(|(i, r)| match r {
            CycleOutcome::Found(cy) => Some(cy.k),
            CycleOutcome::Indeterminate(_) => {
                undecided.push(i.to_string());
                None
            }
            CycleOutcome::NotFound => None,
        })
        .collect();
    let mut provenance = Provenance::new();
    provenance.insert("analysis", "dim2-circle");
    provenance.insert("mu", fmt17(c.mu));
    provenance.insert("L", fmt17(c.l));
    provenance.insert("kmax", kmax.to_string());
    provenance.insert("tol_feas", fmt17(tol.feasible));
    provenance.insert("tol_infeas", fmt17(tol.infeasible));
    provenance.insert("indeterminate_cells", undecided.join(" "));
    Ok(RegionGrid {
        spec: *spec,
        class: *c,
        cells,
        provenance,
        certificates: None,
    })
}
