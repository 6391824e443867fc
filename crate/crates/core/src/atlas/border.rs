use crate::cycle_lp::{lp_feasible_sigma, CycleOutcome};
use crate::error::{Error, Result};
use crate::lp::LpTolerances;
use crate::permutation::conjectured_permutation;
use crate::types::{ClassParams, Tuning};

/// Final bracket of a border search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Border {
    /// End where a `K`-cycle exists.
    pub inside: Tuning,
    pub outside: Tuning,
    pub iterations: usize,
}

impl Border {
    pub fn point(&self) -> Tuning {
        Tuning {
            gamma: 0.5 * (self.inside.gamma + self.outside.gamma),
            beta: 0.5 * (self.inside.beta + self.outside.beta),
        }
    }

    pub fn width(&self) -> f64 {
        (self.inside.gamma - self.outside.gamma).hypot(self.inside.beta - self.outside.beta)
    }
}

fn has_cycle(t: &Tuning, c: &ClassParams, k: usize, tol: &LpTolerances) -> Result<bool> {
    let sigma = conjectured_permutation(k)?;
    match lp_feasible_sigma(t, c, k, &sigma, tol)? {
        CycleOutcome::Found(_) => Ok(true),
        CycleOutcome::NotFound => Ok(false),
        CycleOutcome::Indeterminate(why) => Err(Error::Indeterminate(format!(
            "K = {k} at gamma = {}, beta = {}: {why}",
            t.gamma, t.beta
        ))),
    }
}

/// Bisects the segment `ray` on "a `K`-cycle with the zigzag permutation
/// exists" until the bracket is shorter than `tol`.
pub fn border_bisect(
    c: &ClassParams,
    k: usize,
    ray: (Tuning, Tuning),
    tol: f64,
    lp_tol: &LpTolerances,
) -> Result<Border> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    let (a, b) = ray;
    let (fa, fb) = (has_cycle(&a, c, k, lp_tol)?, has_cycle(&b, c, k, lp_tol)?);
    if fa == fb {
        return Err(Error::SameStatus(if fa { "feasible" } else { "infeasible" }));
    }
    let mut border = if fa {
        Border { inside: a, outside: b, iterations: 0 }
    } else {
        Border { inside: b, outside: a, iterations: 0 }
    };
    while border.width() > tol {
        let mid = border.point();
        if has_cycle(&mid, c, k, lp_tol)? {
            border.inside = mid;
        } else {
            border.outside = mid;
        }
        border.iterations += 1;
    }
    Ok(border)
}
