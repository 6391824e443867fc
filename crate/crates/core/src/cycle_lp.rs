//! Dimension-1 cycles of heavy-ball as linear feasibility problems.
//!
//! Heavy-ball visits `x_0, ..., x_{K-1}` periodically iff the gradients at
//! those points are `G = [(1 + beta) I - J - beta J^-1] X / gamma`, `J` being the
//! cyclic shift. A scalar function of `F_{mu,L}` with those gradients exists
//! iff, once the points are sorted, every consecutive gradient slope lies in
//! `[mu, L]`. For a fixed sort permutation this is linear in `X`.

use serde::{Deserialize, Serialize};

use crate::dynamics::simulate_hb;
use crate::error::{Error, Result};
use crate::format::{f17, vec_f17};
use crate::lp::{solve_lp_with, LpOutcome, LpProblem, LpTolerances};
use crate::model1d::{reconstruct_function_1d, SLOPE_TOL};
use crate::permutation::{conjectured_permutation, reduced_permutations, Permutation, MAX_ENUMERATION_K};
use crate::types::{ClassParams, Tuning};

/// Certificates whose closest pair of points is nearer than this (relative to
/// the unit spread) describe a degenerate cycle and are rejected.
pub const MIN_GAP: f64 = 1e-7;

/// `G_i = ((1 + beta) X_i - X_{i+1} - beta X_{i-1}) / gamma`, indices mod `K`.
pub fn circulant_gradient(xs: &[f64], t: &Tuning) -> Result<Vec<f64>> {
    let k = xs.len();
    if k < 3 {
        return Err(Error::InvalidInput(format!("cycle length must be at least 3, got {k}")));
    }
    if !(t.gamma > 0.0) {
        return Err(Error::InvalidTuning(format!("step size must be positive, got {}", t.gamma)));
    }
    Ok((0..k)
        .map(|i| ((1.0 + t.beta) * xs[i] - xs[(i + 1) % k] - t.beta * xs[(i + k - 1) % k]) / t.gamma)
        .collect())
}

/// Row `i` of the circulant operator, i.e. the coefficients of `G_i` in `X`.
fn circulant_row(i: usize, k: usize, t: &Tuning) -> Vec<f64> {
    let mut row = vec![0.0; k];
    row[i] += (1.0 + t.beta) / t.gamma;
    row[(i + 1) % k] -= 1.0 / t.gamma;
    row[(i + k - 1) % k] -= t.beta / t.gamma;
    row
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleCertificate {
    #[serde(rename = "K")]
    pub k: usize,
    pub sigma: Permutation,
    /// Iterates in time order.
    #[serde(rename = "X", with = "vec_f17")]
    pub x: Vec<f64>,
    /// Gradients at the iterates, in time order.
    #[serde(rename = "G", with = "vec_f17")]
    pub g: Vec<f64>,
    #[serde(with = "f17")]
    pub gamma: f64,
    #[serde(with = "f17")]
    pub beta: f64,
    #[serde(with = "f17")]
    pub mu: f64,
    #[serde(rename = "L", with = "f17")]
    pub l: f64,
    #[serde(with = "f17")]
    pub min_gap: f64,
}

impl CycleCertificate {
    pub fn tuning(&self) -> Tuning {
        Tuning {
            gamma: self.gamma,
            beta: self.beta,
        }
    }

    pub fn class(&self) -> ClassParams {
        ClassParams { mu: self.mu, l: self.l }
    }

    /// Re-checks every certificate invariant from the stored data alone.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidInput(format!("cycle certificate: {msg}")));
        let (t, c) = (self.tuning(), self.class());
        t.validate()?;
        c.validate()?;
        let k = self.k;
        if k < 3 || self.x.len() != k || self.g.len() != k || self.sigma.len() != k {
            return fail(format!("inconsistent lengths for K = {k}"));
        }
        let g = circulant_gradient(&self.x, &t)?;
        let gscale = self.g.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in g.iter().zip(&self.g) {
            if (a - b).abs() > 1e-12 * gscale {
                return fail(format!("gradient {b} does not match the cycle condition ({a})"));
            }
        }
        let order = self.sigma.time_of_rank();
        for r in 0..k - 1 {
            if self.x[order[r]] > self.x[order[r + 1]] {
                return fail(format!("sigma does not sort X at rank {r}"));
            }
        }
        let spread = self.x[order[k - 1]] - self.x[order[0]];
        if (spread - 1.0).abs() > 1e-9 {
            return fail(format!("spread {spread} is not normalized"));
        }
        let gap = order.windows(2).map(|w| self.x[w[1]] - self.x[w[0]]).fold(f64::INFINITY, f64::min);
        if gap <= MIN_GAP {
            return fail(format!("points {gap} apart are not distinct"));
        }
        if minimal_period(&self.x) != k {
            return fail("iterates repeat with a shorter period".into());
        }
        // slope test; this also rebuilds the interpolating function
        reconstruct_function_1d(&self.x, &self.g, &c)?;
        Ok(())
    }
}

impl CycleCertificate {
    /// Runs heavy-ball on the reconstructed function from `(x_0, x_1)` for
    /// `periods` periods and returns the largest `|x_{t+K} - x_t|`, or the
    /// largest distance to the stored iterates during the first period if
    /// that is larger. Infinite if the run overflows.
    pub fn replay_error(&self, periods: usize) -> Result<f64> {
        let k = self.k;
        let model = reconstruct_function_1d(&self.x, &self.g, &self.class())?;
        let tr = simulate_hb(&model, self.x[0], self.x[1], &self.tuning(), (periods + 1) * k)?;
        if tr.diverged {
            return Ok(f64::INFINITY);
        }
        let start = (0..k).map(|i| (tr.points[i] - self.x[i]).abs()).fold(0.0, f64::max);
        let drift = (0..=periods * k)
            .map(|i| (tr.points[i + k] - tr.points[i]).abs())
            .fold(0.0, f64::max);
        Ok(start.max(drift))
    }
}

/// Smallest `p` dividing `len` such that `xs` is invariant under a shift by `p`.
pub fn minimal_period(xs: &[f64]) -> usize {
    let k = xs.len();
    (1..=k)
        .filter(|p| k.is_multiple_of(*p))
        .find(|&p| (0..k).all(|i| xs[i] == xs[(i + p) % k]))
        .unwrap_or(k)
}

/// Feasibility system for a cycle of length `K` sorted by `sigma`.
///
/// Unknowns are the iterates `X` in time order. For each pair of consecutive
/// ranks `(r, r+1)` with gap `d = x^(r+1) - x^(r)` and gradient difference `e`:
/// `d >= 0`, `e >= mu d`, `e <= L d`. The system is homogeneous and invariant
/// under translation, so it is normalized by `x^(0) = 0` and `sum d = 1`.
pub fn build_lp(t: &Tuning, c: &ClassParams, k: usize, sigma: &Permutation) -> Result<LpProblem> {
    build(t, c, k, sigma, false)
}

/// Same system with an extra unknown `0 <= s <= every gap`, maximized. Picks
/// the feasible cycle whose closest points are farthest apart.
fn build_lp_max_gap(t: &Tuning, c: &ClassParams, k: usize, sigma: &Permutation) -> Result<LpProblem> {
    build(t, c, k, sigma, true)
}

fn build(t: &Tuning, c: &ClassParams, k: usize, sigma: &Permutation, max_gap: bool) -> Result<LpProblem> {
    t.validate()?;
    c.validate()?;
    if k < 3 || sigma.len() != k {
        return Err(Error::InvalidInput(format!(
            "need K >= 3 and a permutation of length K, got K = {k}, sigma = {sigma}"
        )));
    }
    let n = if max_gap { k + 1 } else { k };
    let order = sigma.time_of_rank();
    let rows: Vec<Vec<f64>> = (0..k).map(|i| circulant_row(i, k, t)).collect();
    let mut p = LpProblem::new(n);
    let mut gap_sum = vec![0.0; n];
    for r in 0..k - 1 {
        let (lo, hi) = (order[r], order[r + 1]);
        let mut gap = vec![0.0; n];
        gap[hi] += 1.0;
        gap[lo] -= 1.0;
        let mut dg = vec![0.0; n];
        for j in 0..k {
            dg[j] = rows[hi][j] - rows[lo][j];
        }
        // gap >= 0 (or gap >= s)
        let mut row: Vec<f64> = gap.iter().map(|v| -v).collect();
        if max_gap {
            row[k] = 1.0;
        }
        p.le(row, 0.0);
        // mu gap - dg <= 0
        p.le((0..n).map(|j| c.mu * gap[j] - dg[j]).collect(), 0.0);
        // dg - L gap <= 0
        p.le((0..n).map(|j| dg[j] - c.l * gap[j]).collect(), 0.0);
        for j in 0..n {
            gap_sum[j] += gap[j];
        }
    }
    let mut anchor = vec![0.0; n];
    anchor[order[0]] = 1.0;
    p.equal(anchor, 0.0);
    p.equal(gap_sum, 1.0);
    if max_gap {
        let mut obj = vec![0.0; n];
        obj[k] = 1.0;
        // s >= 0 keeps the system equivalent to the plain one
        p.le(obj.iter().map(|v| -v).collect(), 0.0);
        p.objective = Some(obj);
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq)]
pub enum CycleOutcome<T> {
    Found(T),
    NotFound,
    Indeterminate(String),
}

impl<T> CycleOutcome<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            CycleOutcome::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, CycleOutcome::Found(_))
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, CycleOutcome::Indeterminate(_))
    }
}

/// Solves the system for one permutation and turns a solution into a checked
/// certificate. Solutions whose points are not distinct, or that repeat with
/// a shorter period, are not cycles of length `K`.
pub fn lp_feasible_sigma(
    t: &Tuning,
    c: &ClassParams,
    k: usize,
    sigma: &Permutation,
    tol: &LpTolerances,
) -> Result<CycleOutcome<CycleCertificate>> {
    let p = build_lp_max_gap(t, c, k, sigma)?;
    let sol = match solve_lp_with(&p, tol) {
        LpOutcome::Feasible { x, .. } => x,
        LpOutcome::Infeasible { .. } => return Ok(CycleOutcome::NotFound),
        LpOutcome::Indeterminate { reason } => return Ok(CycleOutcome::Indeterminate(reason)),
    };
    let mut x: Vec<f64> = sol[..k].to_vec();
    let order = sigma.time_of_rank();
    // exact normalization: the LP only meets it to within the feasibility tolerance
    let base = x[order[0]];
    let spread = x[order[k - 1]] - base;
    if !(spread > 0.0) {
        return Ok(CycleOutcome::NotFound);
    }
    for v in x.iter_mut() {
        *v = (*v - base) / spread;
    }
    let min_gap = order.windows(2).map(|w| x[w[1]] - x[w[0]]).fold(f64::INFINITY, f64::min);
    if min_gap <= MIN_GAP || minimal_period(&x) != k {
        return Ok(CycleOutcome::NotFound);
    }
    let g = circulant_gradient(&x, t)?;
    let cert = CycleCertificate {
        k,
        sigma: sigma.clone(),
        x,
        g,
        gamma: t.gamma,
        beta: t.beta,
        mu: c.mu,
        l: c.l,
        min_gap,
    };
    match cert.verify() {
        Ok(()) => Ok(CycleOutcome::Found(cert)),
        Err(e) => Ok(CycleOutcome::Indeterminate(format!("solution failed verification: {e}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    ConjecturedOnly,
    FullEnumeration,
}

/// Permutations tried for length `K`: the zigzag first, then (for full
/// enumeration) every other reduced representative.
pub fn permutations_for(k: usize, mode: SearchMode) -> Result<Vec<Permutation>> {
    let zigzag = conjectured_permutation(k)?;
    match mode {
        SearchMode::ConjecturedOnly => Ok(vec![zigzag]),
        SearchMode::FullEnumeration => {
            let mut all = vec![zigzag.clone()];
            all.extend(reduced_permutations(k)?.into_iter().filter(|p| *p != zigzag));
            Ok(all)
        }
    }
}

/// Shortest dimension-1 cycle with `3 <= K <= kmax`.
pub fn cycle_exists_dim1(
    t: &Tuning,
    c: &ClassParams,
    kmax: usize,
    mode: SearchMode,
    tol: &LpTolerances,
) -> Result<CycleOutcome<CycleCertificate>> {
    if kmax < 3 {
        return Err(Error::InvalidInput(format!("kmax must be at least 3, got {kmax}")));
    }
    if mode == SearchMode::FullEnumeration && kmax > MAX_ENUMERATION_K {
        return Err(Error::InvalidInput(format!(
            "full enumeration is limited to K <= {MAX_ENUMERATION_K}, got {kmax}"
        )));
    }
    let mut undecided = None;
    for k in 3..=kmax {
        for sigma in permutations_for(k, mode)? {
            match lp_feasible_sigma(t, c, k, &sigma, tol)? {
                CycleOutcome::Found(cert) => return Ok(CycleOutcome::Found(cert)),
                CycleOutcome::Indeterminate(why) => {
                    undecided.get_or_insert(format!("K = {k}, sigma = {sigma}: {why}"));
                }
                CycleOutcome::NotFound => {}
            }
        }
    }
    Ok(match undecided {
        Some(why) => CycleOutcome::Indeterminate(why),
        None => CycleOutcome::NotFound,
    })
}

/// Slope `2 (1 + beta) / gamma` of the only possible 2-cycle `x_1 = -x_0`.
pub fn two_cycle_slope(t: &Tuning) -> f64 {
    2.0 * (1.0 + t.beta) / t.gamma
}

/// The period-2 orbit `(1/2, -1/2)` with gradients from the cycle condition,
/// when its slope is admissible. Used to confirm non-convergence where the
/// cycle search (which starts at `K = 3`) does not apply.
pub fn two_cycle(t: &Tuning, c: &ClassParams) -> Option<([f64; 2], [f64; 2])> {
    let s = two_cycle_slope(t);
    let slack = SLOPE_TOL * c.l;
    if c.mu - slack <= s && s <= c.l + slack {
        let x = [0.5, -0.5];
        // (1 + beta)(x_i - x_{i+1}) / gamma
        let g0 = (1.0 + t.beta) * (x[0] - x[1]) / t.gamma;
        Some((x, [g0, -g0]))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{classify_trajectory, simulate_hb, TrajectoryKind, TrajectoryTolerances};
    use proptest::prelude::*;

    fn c10() -> ClassParams {
        ClassParams::new(1.0, 10.0).unwrap()
    }

    #[test]
    fn circulant_annihilates_constants() {
        let t = Tuning { gamma: 0.3, beta: 0.6 };
        let g = circulant_gradient(&[2.5; 7], &t).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn circulant_direct_substitution() {
        let t = Tuning { gamma: 1.0, beta: 0.0 };
        assert_eq!(circulant_gradient(&[0.0, 1.0, 0.0], &t).unwrap(), vec![-1.0, 1.0, 0.0]);
        let t = Tuning { gamma: 0.5, beta: 0.5 };
        // G_2 = (1.5 * 0 - 0 - 0.5 * 1) / 0.5
        assert_eq!(circulant_gradient(&[0.0, 1.0, 0.0], &t).unwrap(), vec![-2.0, 3.0, -1.0]);
    }

    #[test]
    fn circulant_errors() {
        let t = Tuning { gamma: 1.0, beta: 0.0 };
        assert!(circulant_gradient(&[0.0, 1.0], &t).is_err());
        assert!(circulant_gradient(&[0.0, 1.0, 2.0], &Tuning { gamma: 0.0, beta: 0.0 }).is_err());
    }

    #[test]
    fn circulant_matches_hb_step() {
        let t = Tuning { gamma: 0.17, beta: -0.3 };
        let xs = [0.0, 0.4, 1.0, 0.7, 0.2];
        let g = circulant_gradient(&xs, &t).unwrap();
        let k = xs.len();
        for i in 0..k {
            let next = crate::dynamics::hb_step_scalar(xs[(i + k - 1) % k], xs[i], g[i], &t);
            assert!((next - xs[(i + 1) % k]).abs() < 1e-14);
        }
    }

    proptest! {
        #[test]
        fn circulant_is_linear(
            xs in prop::collection::vec(-5.0f64..5.0, 3..10),
            a in -3.0f64..3.0,
            b in -3.0f64..3.0,
            gamma in 0.01f64..2.0,
            beta in -0.99f64..0.99,
        ) {
            let t = Tuning { gamma, beta };
            let ys: Vec<f64> = xs.iter().map(|x| x * x - 1.0).collect();
            let comb: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| a * x + b * y).collect();
            let gx = circulant_gradient(&xs, &t).unwrap();
            let gy = circulant_gradient(&ys, &t).unwrap();
            let gc = circulant_gradient(&comb, &t).unwrap();
            for i in 0..xs.len() {
                let want = a * gx[i] + b * gy[i];
                prop_assert!((gc[i] - want).abs() <= 1e-9 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn lp_shape_for_k3() {
        let sigma = conjectured_permutation(3).unwrap();
        let p = build_lp(&Tuning { gamma: 0.1, beta: 0.5 }, &c10(), 3, &sigma).unwrap();
        assert_eq!(p.num_vars, 3);
        assert_eq!(p.inequalities.len(), 6);
        assert_eq!(p.equalities.len(), 2);
        assert!(p.objective.is_none());
    }

    #[test]
    fn constant_vector_gives_zero_gradient_rows() {
        let sigma = conjectured_permutation(5).unwrap();
        let p = build_lp(&Tuning { gamma: 0.2, beta: 0.4 }, &c10(), 5, &sigma).unwrap();
        for row in &p.inequalities {
            let v: f64 = row.coeffs.iter().sum();
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn no_cycle_for_short_gd_step() {
        let c = c10();
        let t = Tuning { gamma: 1.0 / c.l, beta: 0.0 };
        let tol = LpTolerances::default();
        for k in 3..=6 {
            for sigma in reduced_permutations(k).unwrap() {
                assert_eq!(lp_feasible_sigma(&t, &c, k, &sigma, &tol).unwrap(), CycleOutcome::NotFound);
            }
        }
        assert_eq!(
            cycle_exists_dim1(&t, &c, 9, SearchMode::FullEnumeration, &tol).unwrap(),
            CycleOutcome::NotFound
        );
        assert_eq!(
            cycle_exists_dim1(&t, &c, 25, SearchMode::ConjecturedOnly, &tol).unwrap(),
            CycleOutcome::NotFound
        );
    }

    #[test]
    fn polyak_tuning_cycles() {
        let c = ClassParams::new(1.0, 25.0).unwrap();
        let t = c.polyak_tuning();
        assert!((t.gamma - 4.0 / 36.0).abs() < 1e-15 && (t.beta - (4.0f64 / 6.0).powi(2)).abs() < 1e-15);
        let tol = LpTolerances::default();
        let out = cycle_exists_dim1(&t, &c, 25, SearchMode::ConjecturedOnly, &tol).unwrap();
        let cert = out.found().expect("a cycle at Polyak's tuning");
        cert.verify().unwrap();
        // minimality
        if cert.k > 3 {
            let shorter = cycle_exists_dim1(&t, &c, cert.k - 1, SearchMode::ConjecturedOnly, &tol).unwrap();
            assert_eq!(shorter, CycleOutcome::NotFound);
        }
    }

    #[test]
    fn certificate_replays_periodically() {
        let c = ClassParams::new(1.0, 25.0).unwrap();
        let t = c.polyak_tuning();
        let tol = LpTolerances::default();
        let cert = cycle_exists_dim1(&t, &c, 25, SearchMode::ConjecturedOnly, &tol)
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        let model = reconstruct_function_1d(&cert.x, &cert.g, &c).unwrap();
        for (x, g) in cert.x.iter().zip(&cert.g) {
            assert_eq!(model.gradient(*x), *g);
        }
        let k = cert.k;
        let tr = simulate_hb(&model, cert.x[0], cert.x[1], &t, 100 * k + k).unwrap();
        for i in 0..=100 * k {
            assert!((tr.points[i + k] - tr.points[i]).abs() <= 1e-9, "drift at {i}");
        }
        let kind = classify_trajectory(
            &tr,
            &TrajectoryTolerances {
                kmax: 25,
                ..Default::default()
            },
        );
        assert_eq!(kind, TrajectoryKind::Periodic(k));
        assert!(cert.replay_error(100).unwrap() <= 1e-9);
        let mut shifted = cert.clone();
        shifted.x[0] += 1e-3;
        assert!(shifted.replay_error(10).unwrap() > 1e-4);
    }

    #[test]
    fn scale_invariance() {
        let c = c10();
        let tol = LpTolerances::default();
        let sigma = conjectured_permutation(5).unwrap();
        let spec = crate::atlas::grid::GridSpec::default_for(&c, 9, 9);
        for t in spec.centers() {
            let base = lp_feasible_sigma(&t, &c, 5, &sigma, &tol).unwrap().is_found();
            for s in [0.1, 10.0] {
                let scaled = lp_feasible_sigma(&t.scaled(s), &c.scaled(s), 5, &sigma, &tol).unwrap().is_found();
                assert_eq!(base, scaled, "{t:?} scale {s}");
            }
        }
    }

    #[test]
    fn gd_two_cycle_beyond_two_over_l() {
        let c = c10();
        assert!(two_cycle(&Tuning { gamma: 1.9 / c.l, beta: 0.0 }, &c).is_none());
        let t = Tuning { gamma: 2.5 / c.l, beta: 0.0 };
        let (x, g) = two_cycle(&t, &c).unwrap();
        // the orbit is reproduced by a function of the class
        let model = reconstruct_function_1d(&x, &g, &c).unwrap();
        let tr = simulate_hb(&model, x[0], x[1], &t, 200).unwrap();
        assert!(tr.points.chunks(2).all(|p| p.len() < 2 || (p[0] == x[0] && p[1] == x[1])));
        // slope 2/gamma drops below mu once gamma > 2/mu
        assert!(two_cycle(&Tuning { gamma: 2.1 / c.mu, beta: 0.0 }, &c).is_none());
    }

    #[test]
    fn enumeration_limits() {
        let c = c10();
        let t = Tuning { gamma: 0.1, beta: 0.5 };
        let tol = LpTolerances::default();
        assert!(cycle_exists_dim1(&t, &c, 10, SearchMode::FullEnumeration, &tol).is_err());
        assert!(cycle_exists_dim1(&t, &c, 2, SearchMode::ConjecturedOnly, &tol).is_err());
    }

    #[test]
    fn certificate_json_fields() {
        let c = ClassParams::new(1.0, 25.0).unwrap();
        let t = c.polyak_tuning();
        let cert = cycle_exists_dim1(&t, &c, 25, SearchMode::ConjecturedOnly, &LpTolerances::default())
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        let s = serde_json::to_string(&cert).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        for key in ["K", "sigma", "X", "G", "gamma", "beta", "mu", "L", "min_gap"] {
            assert!(v.get(key).is_some(), "{key} missing in {s}");
        }
        let back: CycleCertificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cert);
        back.verify().unwrap();
    }

    #[test]
    fn tampered_certificate_rejected() {
        let c = ClassParams::new(1.0, 25.0).unwrap();
        let t = c.polyak_tuning();
        let mut cert = cycle_exists_dim1(&t, &c, 25, SearchMode::ConjecturedOnly, &LpTolerances::default())
            .unwrap()
            .found()
            .cloned()
            .unwrap();
        cert.g[1] += 1e-3;
        assert!(cert.verify().is_err());
    }

    #[test]
    fn minimal_period_detection() {
        assert_eq!(minimal_period(&[0.0, 1.0, 0.0, 1.0]), 2);
        assert_eq!(minimal_period(&[0.0, 1.0, 0.5, 0.0, 1.0, 0.5]), 3);
        assert_eq!(minimal_period(&[0.0, 1.0, 0.5]), 3);
        assert_eq!(minimal_period(&[2.0; 4]), 1);
    }
}
