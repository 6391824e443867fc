//! Scalar functions of the class rebuilt from `(x_i, g_i)` data.
//!
//! In one dimension, data is interpolable by a function of `F_{mu,L}` iff the
//! secant slopes of the gradients between consecutive sorted points lie in
//! `[mu, L]`. The witness is the function whose derivative is the
//! piecewise-linear interpolant of the data, extended linearly outside.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::ClassParams;

/// Relative tolerance of the slope test, in units of `L`.
pub const SLOPE_TOL: f64 = 1e-9;
/// Points closer than this times the data spread are merged.
pub const MERGE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseModel1D {
    pub knots: Vec<f64>,
    pub grads: Vec<f64>,
    /// Function values at the knots, anchored at `values[0] = 0`.
    pub values: Vec<f64>,
    pub extension_slope: f64,
}

#[derive(Clone, Copy, Debug)]
pub struct ReconstructOptions {
    /// Curvature used left and right of the data; defaults to `(mu + L) / 2`.
    pub extension_slope: Option<f64>,
    pub slope_tol: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            extension_slope: None,
            slope_tol: SLOPE_TOL,
        }
    }
}

pub fn reconstruct_function_1d(xs: &[f64], gs: &[f64], c: &ClassParams) -> Result<PiecewiseModel1D> {
    reconstruct_function_1d_with(xs, gs, c, &ReconstructOptions::default())
}

pub fn reconstruct_function_1d_with(
    xs: &[f64],
    gs: &[f64],
    c: &ClassParams,
    opts: &ReconstructOptions,
) -> Result<PiecewiseModel1D> {
    c.validate()?;
    if xs.len() != gs.len() || xs.is_empty() {
        return Err(Error::InvalidInput(format!(
            "need matching non-empty data, got {} points and {} gradients",
            xs.len(),
            gs.len()
        )));
    }
    if xs.iter().chain(gs).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite data".into()));
    }
    let ext = opts.extension_slope.unwrap_or(0.5 * (c.mu + c.l));
    if !(c.mu <= ext && ext <= c.l) {
        return Err(Error::InvalidInput(format!(
            "extension slope {ext} outside [{}, {}]",
            c.mu, c.l
        )));
    }

    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let lo = xs[order[0]];
    let hi = xs[order[order.len() - 1]];
    let gspread = gs.iter().fold(0.0f64, |m, g| m.max(g.abs()));
    let merge_x = MERGE_TOL * (hi - lo);
    let merge_g = MERGE_TOL * gspread.max(f64::MIN_POSITIVE);

    let mut knots: Vec<f64> = Vec::with_capacity(xs.len());
    let mut grads: Vec<f64> = Vec::with_capacity(xs.len());
    for &i in &order {
        if let (Some(&xl), Some(&gl)) = (knots.last(), grads.last()) {
            if xs[i] - xl <= merge_x {
                if (gs[i] - gl).abs() > merge_g {
                    return Err(Error::InconsistentData {
                        x: xs[i],
                        g1: gl,
                        g2: gs[i],
                    });
                }
                continue;
            }
        }
        knots.push(xs[i]);
        grads.push(gs[i]);
    }

    let slack = opts.slope_tol * c.l;
    let mut values = vec![0.0; knots.len()];
    for i in 0..knots.len().saturating_sub(1) {
        let h = knots[i + 1] - knots[i];
        let slope = (grads[i + 1] - grads[i]) / h;
        if !(c.mu - slack <= slope && slope <= c.l + slack) {
            return Err(Error::NotInClass {
                index: i,
                slope,
                mu: c.mu,
                l: c.l,
            });
        }
        // exact integral of the linear gradient piece
        values[i + 1] = values[i] + 0.5 * (grads[i] + grads[i + 1]) * h;
    }
    Ok(PiecewiseModel1D {
        knots,
        grads,
        values,
        extension_slope: ext,
    })
}

impl PiecewiseModel1D {
    /// Index `i` of the knot interval `[knots[i], knots[i+1])` holding `x`,
    /// or `None` outside the data range.
    fn interval(&self, x: f64) -> Option<usize> {
        let n = self.knots.len();
        if x < self.knots[0] || x > self.knots[n - 1] {
            return None;
        }
        Some(self.knots.partition_point(|&k| k <= x).saturating_sub(1).min(n - 1))
    }

    /// Derivative of the model. At a knot this is exactly the stored gradient;
    /// points within the merge tolerance of a knot count as that knot, as they
    /// do during reconstruction.
    pub fn gradient(&self, x: f64) -> f64 {
        let n = self.knots.len();
        if let Some(i) = self.snap(x) {
            return self.grads[i];
        }
        match self.interval(x) {
            None if x < self.knots[0] => self.grads[0] + self.extension_slope * (x - self.knots[0]),
            None => self.grads[n - 1] + self.extension_slope * (x - self.knots[n - 1]),
            Some(i) => {
                if x == self.knots[i] || i + 1 == n {
                    return self.grads[i];
                }
                let s = (self.grads[i + 1] - self.grads[i]) / (self.knots[i + 1] - self.knots[i]);
                self.grads[i] + s * (x - self.knots[i])
            }
        }
    }

    /// Knot within `MERGE_TOL` times the knot spread of `x`, if any.
    fn snap(&self, x: f64) -> Option<usize> {
        let n = self.knots.len();
        let tol = MERGE_TOL * (self.knots[n - 1] - self.knots[0]);
        let i = self.knots.partition_point(|&k| k < x);
        [i.checked_sub(1), (i < n).then_some(i)]
            .into_iter()
            .flatten()
            .find(|&j| (self.knots[j] - x).abs() <= tol)
    }

    pub fn value(&self, x: f64) -> f64 {
        let n = self.knots.len();
        let quad = |x0: f64, f0: f64, g0: f64, s: f64| {
            let d = x - x0;
            f0 + g0 * d + 0.5 * s * d * d
        };
        match self.interval(x) {
            None if x < self.knots[0] => quad(self.knots[0], self.values[0], self.grads[0], self.extension_slope),
            None => quad(self.knots[n - 1], self.values[n - 1], self.grads[n - 1], self.extension_slope),
            Some(i) if i + 1 == n => self.values[i],
            Some(i) => {
                let s = (self.grads[i + 1] - self.grads[i]) / (self.knots[i + 1] - self.knots[i]);
                quad(self.knots[i], self.values[i], self.grads[i], s)
            }
        }
    }

    /// Gradient slopes on every piece, extensions included.
    pub fn slopes(&self) -> Vec<f64> {
        let mut s = vec![self.extension_slope];
        s.extend(
            self.knots
                .windows(2)
                .zip(self.grads.windows(2))
                .map(|(x, g)| (g[1] - g[0]) / (x[1] - x[0])),
        );
        s.push(self.extension_slope);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn class() -> ClassParams {
        ClassParams::new(1.0, 10.0).unwrap()
    }

    #[test]
    fn two_knot_linear_interpolation() {
        let c = class();
        let m = reconstruct_function_1d(&[0.0, 1.0], &[0.0, c.mu], &c).unwrap();
        assert_eq!(m.knots.len(), 2);
        assert_eq!(m.gradient(0.5), c.mu / 2.0);
        assert_eq!(m.values, vec![0.0, 0.5]);
        assert!((m.value(0.5) - 0.125).abs() < 1e-15);
    }

    #[test]
    fn slope_above_l_rejected() {
        let c = class();
        let g = c.l + 0.1 * (c.l - c.mu);
        assert!(matches!(
            reconstruct_function_1d(&[0.0, 1.0], &[0.0, g], &c),
            Err(Error::NotInClass { index: 0, .. })
        ));
        assert!(reconstruct_function_1d(&[0.0, 1.0], &[0.0, 0.5 * c.mu], &c).is_err());
    }

    #[test]
    fn duplicates_merge_or_conflict() {
        let c = class();
        let m = reconstruct_function_1d(&[1.0, 0.0, 1.0], &[2.0, 0.0, 2.0], &c).unwrap();
        assert_eq!(m.knots, vec![0.0, 1.0]);
        assert!(matches!(
            reconstruct_function_1d(&[1.0, 0.0, 1.0], &[2.0, 0.0, 3.0], &c),
            Err(Error::InconsistentData { .. })
        ));
    }

    #[test]
    fn unsorted_input_and_extensions() {
        let c = class();
        let m = reconstruct_function_1d(&[2.0, -1.0, 0.5], &[9.0, -4.0, 0.5], &c).unwrap();
        assert_eq!(m.knots, vec![-1.0, 0.5, 2.0]);
        assert_eq!(m.gradient(-1.0), -4.0);
        assert_eq!(m.gradient(2.0), 9.0);
        assert_eq!(m.gradient(3.0), 9.0 + 5.5);
        assert_eq!(m.gradient(-2.0), -4.0 - 5.5);
        // value is continuous across knots
        for &k in &m.knots {
            let (a, b) = (m.value(k - 1e-9), m.value(k + 1e-9));
            assert!((a - b).abs() < 1e-7);
        }
    }

    #[test]
    fn near_knot_points_snap() {
        let c = class();
        let m = reconstruct_function_1d(&[0.0, 1.0, 2.0], &[0.0, 2.0, 5.0], &c).unwrap();
        assert_eq!(m.gradient(1.0 + 1e-13), 2.0);
        assert_eq!(m.gradient(1.0 - 1e-13), 2.0);
        assert_eq!(m.gradient(-1e-13), 0.0);
        assert!((m.gradient(1.0 + 1e-6) - (2.0 + 3e-6)).abs() < 1e-12);
    }

    #[test]
    fn bad_extension_slope() {
        let c = class();
        let opts = ReconstructOptions {
            extension_slope: Some(20.0),
            ..Default::default()
        };
        assert!(reconstruct_function_1d_with(&[0.0, 1.0], &[0.0, 2.0], &c, &opts).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_and_slopes_in_class(
            steps in prop::collection::vec((0.01f64..2.0, 0.0f64..=1.0), 1..12),
            x0 in -5.0f64..5.0,
            g0 in -5.0f64..5.0,
        ) {
            let c = class();
            let (mut xs, mut gs) = (vec![x0], vec![g0]);
            for (h, frac) in &steps {
                let s = c.mu + frac * (c.l - c.mu);
                xs.push(xs.last().unwrap() + h);
                gs.push(gs.last().unwrap() + s * h);
            }
            // shuffle deterministically
            xs.reverse();
            gs.reverse();
            let m = reconstruct_function_1d(&xs, &gs, &c).unwrap();
            for (x, g) in xs.iter().zip(&gs) {
                prop_assert_eq!(m.gradient(*x), *g);
            }
            for s in m.slopes() {
                prop_assert!(s >= c.mu * (1.0 - 1e-9) && s <= c.l * (1.0 + 1e-9), "slope {}", s);
            }
        }
    }
}
