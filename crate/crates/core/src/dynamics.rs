//! Running heavy-ball and telling what its trajectory does.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model1d::PiecewiseModel1D;
use crate::types::{HbState, Tuning};

/// One heavy-ball step: `(x_prev, x) -> (x, x - gamma g + beta (x - x_prev))`.
pub fn hb_step(state: &HbState, grad_at_cur: &[f64], t: &Tuning) -> HbState {
    debug_assert_eq!(state.x_cur.len(), grad_at_cur.len());
    let next = state
        .x_cur
        .iter()
        .zip(&state.x_prev)
        .zip(grad_at_cur)
        .map(|((x, xp), g)| hb_step_scalar(*xp, *x, *g, t))
        .collect();
    HbState {
        x_prev: state.x_cur.clone(),
        x_cur: next,
    }
}

#[inline]
pub fn hb_step_scalar(x_prev: f64, x_cur: f64, g: f64, t: &Tuning) -> f64 {
    x_cur - t.gamma * g + t.beta * (x_cur - x_prev)
}

/// Iterates past this magnitude are treated as overflow.
const OVERFLOW: f64 = 1e150;

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub points: Vec<f64>,
    /// Set when the run stopped early because an iterate blew up.
    pub diverged: bool,
}

/// Heavy-ball on `model` from `(x0, x1)`; `steps + 2` points unless it overflows.
pub fn simulate_hb(model: &PiecewiseModel1D, x0: f64, x1: f64, t: &Tuning, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidInput("need at least one step".into()));
    }
    let mut points = Vec::with_capacity(steps + 2);
    points.push(x0);
    points.push(x1);
    for _ in 0..steps {
        let n = points.len();
        let (xp, x) = (points[n - 2], points[n - 1]);
        let next = hb_step_scalar(xp, x, model.gradient(x), t);
        if !next.is_finite() || next.abs() > OVERFLOW {
            return Ok(Trajectory { points, diverged: true });
        }
        points.push(next);
    }
    Ok(Trajectory {
        points,
        diverged: false,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrajectoryKind {
    Converged,
    Periodic(usize),
    Divergent,
    Undetermined,
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectoryTolerances {
    pub converged: f64,
    pub periodic: f64,
    pub kmax: usize,
    /// Divergence bound as a multiple of the initial spread.
    pub divergence_factor: f64,
}

impl Default for TrajectoryTolerances {
    fn default() -> Self {
        TrajectoryTolerances {
            converged: 1e-9,
            periodic: 1e-9,
            kmax: 25,
            divergence_factor: 1e12,
        }
    }
}

/// Looks at the second half of the trajectory (at least `2 kmax + 2` points).
pub fn classify_trajectory(traj: &Trajectory, tol: &TrajectoryTolerances) -> TrajectoryKind {
    let pts = &traj.points;
    let min_tail = 2 * tol.kmax + 2;
    if traj.diverged {
        return TrajectoryKind::Divergent;
    }
    if pts.len() < 2 {
        return TrajectoryKind::Undetermined;
    }
    let spread = pts[0].abs().max(pts[1].abs()).max((pts[1] - pts[0]).abs());
    let bound = tol.divergence_factor * spread;
    if spread > 0.0 && pts.iter().any(|x| x.abs() > bound) {
        return TrajectoryKind::Divergent;
    }
    if pts.len() < min_tail {
        return TrajectoryKind::Undetermined;
    }
    let tail = &pts[pts.len() - (pts.len() / 2).max(min_tail)..];
    let (lo, hi) = tail.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    if hi - lo <= tol.converged {
        return TrajectoryKind::Converged;
    }
    for k in 2..=tol.kmax {
        if tail.windows(k + 1).all(|w| (w[k] - w[0]).abs() <= tol.periodic) {
            return TrajectoryKind::Periodic(k);
        }
    }
    TrajectoryKind::Undetermined
}
