//! Small dense linear feasibility problems.
//!
//! Two-phase tableau simplex over free variables (each split into a positive
//! and a negative part). Phase one minimizes the sum of artificial variables;
//! its optimum decides feasibility. An optional objective is then maximized in
//! phase two to pick a well-placed feasible point.
//!
//! The systems solved here have at most a few dozen variables and a few
//! hundred rows, so a dense tableau is the simplest correct choice.

use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub bound: f64,
}

/// Rows `coeffs . x <= bound` and `coeffs . x = bound` over free variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    pub inequalities: Vec<LinearRow>,
    pub equalities: Vec<LinearRow>,
    /// Maximized once a feasible point is known; `None` means pure feasibility.
    pub objective: Option<Vec<f64>>,
}

impl LpProblem {
    pub fn new(num_vars: usize) -> Self {
        LpProblem {
            num_vars,
            ..Default::default()
        }
    }

    pub fn le(&mut self, coeffs: Vec<f64>, bound: f64) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.inequalities.push(LinearRow { coeffs, bound });
        self
    }

    pub fn ge(&mut self, coeffs: Vec<f64>, bound: f64) -> &mut Self {
        let neg = coeffs.iter().map(|a| -a).collect();
        self.le(neg, -bound)
    }

    pub fn equal(&mut self, coeffs: Vec<f64>, bound: f64) -> &mut Self {
        debug_assert_eq!(coeffs.len(), self.num_vars);
        self.equalities.push(LinearRow { coeffs, bound });
        self
    }

    pub fn is_well_formed(&self) -> bool {
        self.inequalities
            .iter()
            .chain(&self.equalities)
            .all(|r| r.coeffs.len() == self.num_vars && r.bound.is_finite() && r.coeffs.iter().all(|a| a.is_finite()))
            && self.objective.as_ref().is_none_or(|c| c.len() == self.num_vars)
    }

    /// Largest violation over all rows, each row measured after dividing by
    /// `max(1, max |coeff|)`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let eval = |r: &LinearRow| {
            let lhs: f64 = r.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
            let norm = r.coeffs.iter().fold(1.0f64, |m, a| m.max(a.abs()));
            (lhs - r.bound) / norm
        };
        let ub = self.inequalities.iter().map(|r| eval(r).max(0.0));
        let eq = self.equalities.iter().map(|r| eval(r).abs());
        ub.chain(eq).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpTolerances {
    /// A point is accepted only if its row violation is at most this.
    pub feasible: f64,
    /// A phase-one optimum at least this large proves infeasibility.
    pub infeasible: f64,
}

impl Default for LpTolerances {
    fn default() -> Self {
        LpTolerances {
            feasible: 1e-9,
            infeasible: 1e-7,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Feasible { x: Vec<f64>, violation: f64 },
    Infeasible { phase_one: f64 },
    Indeterminate { reason: String },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, LpOutcome::Feasible { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible { .. })
    }
}

pub fn solve_lp(p: &LpProblem) -> LpOutcome {
    solve_lp_with(p, &LpTolerances::default())
}

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Col {
    Pos(usize),
    Neg(usize),
    Slack,
    Artificial,
}

struct Tableau {
    rows: usize,
    cols: usize, // excluding rhs
    data: Vec<f64>,
    kinds: Vec<Col>,
    basis: Vec<usize>,
    active: Vec<bool>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let piv = self.data[pr * w + pc];
        for c in 0..w {
            self.data[pr * w + c] /= piv;
        }
        self.data[pr * w + pc] = 1.0;
        for r in 0..self.rows {
            if r == pr || !self.active[r] {
                continue;
            }
            let f = self.data[r * w + pc];
            if f == 0.0 {
                continue;
            }
            for c in 0..w {
                self.data[r * w + c] -= f * self.data[pr * w + c];
            }
            self.data[r * w + pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Minimizes `cost . z` over the current basis; `allowed` filters entering
    /// columns. With `bounded` set the objective is known to be bounded below,
    /// so an improving column without a pivot row is rounding noise and skipped.
    fn optimize(
        &mut self,
        cost: &[f64],
        allowed: &dyn Fn(usize) -> bool,
        bounded: bool,
        max_iter: usize,
    ) -> Result<(), &'static str> {
        let mut skip = vec![false; self.cols];
        let mut bland = false;
        let mut stall = 0usize;
        let mut last_obj = f64::INFINITY;
        for _ in 0..max_iter {
            // reduced costs d_j = c_j - c_B . column_j
            let mut enter = None;
            let mut best = -COST_TOL;
            for j in 0..self.cols {
                if skip[j] || !allowed(j) || self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j];
                for r in 0..self.rows {
                    if self.active[r] {
                        d -= cost[self.basis[r]] * self.at(r, j);
                    }
                }
                if d < best {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(pc) = enter else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                if !self.active[r] {
                    continue;
                }
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    leave = match leave {
                        None => Some((r, ratio)),
                        Some((lr, lratio)) => {
                            let tie = (ratio - lratio).abs() <= 1e-12 * (1.0 + lratio);
                            if ratio < lratio && !tie || tie && self.basis[r] < self.basis[lr] {
                                Some((r, ratio))
                            } else {
                                Some((lr, lratio))
                            }
                        }
                    }
                }
            }
            let Some((pr, _)) = leave else {
                if bounded {
                    skip[pc] = true;
                    continue;
                }
                return Err("unbounded");
            };
            self.pivot(pr, pc);
            skip.iter_mut().for_each(|s| *s = false);
            let obj: f64 = (0..self.rows)
                .filter(|&r| self.active[r])
                .map(|r| cost[self.basis[r]] * self.rhs(r))
                .sum();
            if obj < last_obj - 1e-14 * (1.0 + last_obj.abs()) {
                stall = 0;
                last_obj = obj;
            } else {
                stall += 1;
                if stall > 30 {
                    // degenerate stalling: switch to Bland's rule, which cannot cycle
                    bland = true;
                }
            }
        }
        Err("iteration limit")
    }
}

pub fn solve_lp_with(p: &LpProblem, tol: &LpTolerances) -> LpOutcome {
    if !p.is_well_formed() {
        return LpOutcome::Indeterminate {
            reason: "malformed problem".into(),
        };
    }
    let n = p.num_vars;

    // Row scaling; rows without coefficients are decided on the spot.
    let mut rows: Vec<(Vec<f64>, f64, bool)> = Vec::new();
    let mut trivial_gap = 0.0f64;
    for (r, is_eq) in p
        .inequalities
        .iter()
        .map(|r| (r, false))
        .chain(p.equalities.iter().map(|r| (r, true)))
    {
        let norm = r.coeffs.iter().fold(0.0f64, |m, a| m.max(a.abs()));
        if norm == 0.0 {
            let gap = if is_eq { r.bound.abs() } else { (-r.bound).max(0.0) };
            trivial_gap = trivial_gap.max(gap);
            continue;
        }
        rows.push((r.coeffs.iter().map(|a| a / norm).collect(), r.bound / norm, is_eq));
    }
    if trivial_gap >= tol.infeasible {
        return LpOutcome::Infeasible {
            phase_one: trivial_gap,
        };
    }
    let m = rows.len();

    let mut kinds: Vec<Col> = (0..n).flat_map(|j| [Col::Pos(j), Col::Neg(j)]).collect();
    let slack_start = kinds.len();
    let n_slack = rows.iter().filter(|r| !r.2).count();
    kinds.extend(std::iter::repeat_n(Col::Slack, n_slack));
    let needs_art: Vec<bool> = rows.iter().map(|(_, b, is_eq)| *is_eq || *b < 0.0).collect();
    let art_start = kinds.len();
    kinds.extend(std::iter::repeat_n(Col::Artificial, needs_art.iter().filter(|&&a| a).count()));
    let cols = kinds.len();

    let w = cols + 1;
    let mut data = vec![0.0; m * w];
    let mut basis = vec![0; m];
    let (mut s_idx, mut a_idx) = (slack_start, art_start);
    for (r, (coeffs, b, is_eq)) in rows.iter().enumerate() {
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        for (j, a) in coeffs.iter().enumerate() {
            data[r * w + 2 * j] = sign * a;
            data[r * w + 2 * j + 1] = -sign * a;
        }
        data[r * w + cols] = sign * b;
        if !is_eq {
            data[r * w + s_idx] = sign;
            if !needs_art[r] {
                basis[r] = s_idx;
            }
            s_idx += 1;
        }
        if needs_art[r] {
            data[r * w + a_idx] = 1.0;
            basis[r] = a_idx;
            a_idx += 1;
        }
    }
    let mut tab = Tableau {
        rows: m,
        cols,
        data,
        kinds,
        basis,
        active: vec![true; m],
    };
    let max_iter = 50 * (m + cols) + 100;

    // phase one
    let cost1: Vec<f64> = tab
        .kinds
        .iter()
        .map(|k| if *k == Col::Artificial { 1.0 } else { 0.0 })
        .collect();
    if let Err(why) = tab.optimize(&cost1, &|_| true, true, max_iter) {
        return LpOutcome::Indeterminate {
            reason: format!("phase one: {why}"),
        };
    }
    let phase_one: f64 = (0..m)
        .filter(|&r| tab.kinds[tab.basis[r]] == Col::Artificial)
        .map(|r| tab.rhs(r).max(0.0))
        .sum::<f64>()
        .max(trivial_gap);
    if phase_one >= tol.infeasible {
        return LpOutcome::Infeasible { phase_one };
    }

    // drive remaining artificials out of the basis; rows where that is
    // impossible are linearly dependent and get dropped
    for r in 0..m {
        if tab.kinds[tab.basis[r]] != Col::Artificial {
            continue;
        }
        let pc = (0..art_start)
            .filter(|j| !tab.basis.contains(j))
            .max_by(|&a, &b| tab.at(r, a).abs().total_cmp(&tab.at(r, b).abs()))
            .filter(|&j| tab.at(r, j).abs() > 1e-9);
        match pc {
            Some(j) => tab.pivot(r, j),
            None => tab.active[r] = false,
        }
    }

    if let Some(obj) = &p.objective {
        let cost2: Vec<f64> = tab
            .kinds
            .iter()
            .map(|k| match k {
                Col::Pos(j) => -obj[*j],
                Col::Neg(j) => obj[*j],
                _ => 0.0,
            })
            .collect();
        // an unbounded objective still leaves a feasible basis behind
        if let Err("iteration limit") = tab.optimize(&cost2, &|j| j < art_start, false, max_iter) {
            return LpOutcome::Indeterminate {
                reason: "phase two: iteration limit".into(),
            };
        }
    }

    let z = polish(&tab, &rows);
    let mut x = vec![0.0; n];
    for (c, v) in z.iter().enumerate() {
        match tab.kinds[c] {
            Col::Pos(j) => x[j] += v,
            Col::Neg(j) => x[j] -= v,
            _ => {}
        }
    }
    let violation = p.max_violation(&x);
    if violation <= tol.feasible {
        LpOutcome::Feasible { x, violation }
    } else {
        LpOutcome::Indeterminate {
            reason: format!("phase one optimum {phase_one:e} but point violates rows by {violation:e}"),
        }
    }
}

/// Basic variable values re-solved from the scaled original rows, which
/// removes the rounding accumulated in the tableau.
fn polish(tab: &Tableau, rows: &[(Vec<f64>, f64, bool)]) -> Vec<f64> {
    let mut z = vec![0.0; tab.cols];
    let active: Vec<usize> = (0..tab.rows).filter(|&r| tab.active[r]).collect();
    for &r in &active {
        z[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let k = active.len();
    if k == 0 {
        return z;
    }
    // column entries of the original standard form (before row sign flips)
    let mut slack_of_row = vec![None; rows.len()];
    let mut s = 2 * rows[0].0.len();
    for (r, row) in rows.iter().enumerate() {
        if !row.2 {
            slack_of_row[r] = Some(s);
            s += 1;
        }
    }
    let entry = |r: usize, c: usize| -> f64 {
        match tab.kinds[c] {
            Col::Pos(j) => rows[r].0[j],
            Col::Neg(j) => -rows[r].0[j],
            Col::Slack => {
                if slack_of_row[r] == Some(c) {
                    1.0
                } else {
                    0.0
                }
            }
            Col::Artificial => f64::NAN,
        }
    };
    if active.iter().any(|&r| tab.kinds[tab.basis[r]] == Col::Artificial) {
        return z;
    }
    let b = DMatrix::from_fn(k, k, |a, bcol| entry(active[a], tab.basis[active[bcol]]));
    let rhs = DVector::from_iterator(k, active.iter().map(|&r| rows[r].1));
    if let Some(sol) = b.lu().solve(&rhs) {
        if sol.iter().all(|v| v.is_finite() && *v >= -1e-9) {
            for (a, &r) in active.iter().enumerate() {
                z[tab.basis[r]] = sol[a].max(0.0);
            }
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn contradictory_bounds() {
        let mut p = LpProblem::new(1);
        p.ge(vec![1.0], 1.0).le(vec![1.0], 0.0);
        assert!(solve_lp(&p).is_infeasible());
    }

    #[test]
    fn pinned_by_equality() {
        let mut p = LpProblem::new(1);
        p.ge(vec![1.0], 0.0).le(vec![1.0], 1.0).equal(vec![1.0], 0.5);
        match solve_lp(&p) {
            LpOutcome::Feasible { x, .. } => assert!((x[0] - 0.5).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn free_variables_can_go_negative() {
        let mut p = LpProblem::new(2);
        p.equal(vec![1.0, 1.0], -3.0).le(vec![1.0, 0.0], -5.0);
        let LpOutcome::Feasible { x, .. } = solve_lp(&p) else {
            panic!()
        };
        assert!(x[0] <= -5.0 + 1e-9 && (x[0] + x[1] + 3.0).abs() < 1e-9);
    }

    #[test]
    fn objective_selects_vertex() {
        // maximize x + y on the unit simplex-like box
        let mut p = LpProblem::new(2);
        p.le(vec![1.0, 0.0], 2.0)
            .le(vec![0.0, 1.0], 3.0)
            .le(vec![1.0, 1.0], 4.0)
            .ge(vec![1.0, 0.0], 0.0)
            .ge(vec![0.0, 1.0], 0.0);
        p.objective = Some(vec![2.0, 1.0]);
        let LpOutcome::Feasible { x, .. } = solve_lp(&p) else {
            panic!()
        };
        assert!((x[0] - 2.0).abs() < 1e-12 && (x[1] - 2.0).abs() < 1e-12, "{x:?}");
    }

    #[test]
    fn redundant_equalities_are_harmless() {
        let mut p = LpProblem::new(3);
        p.equal(vec![1.0, 1.0, 0.0], 1.0)
            .equal(vec![2.0, 2.0, 0.0], 2.0)
            .equal(vec![0.0, 1.0, 1.0], 0.0);
        assert!(solve_lp(&p).is_feasible());
        p.equal(vec![1.0, 1.0, 0.0], 1.5);
        assert!(solve_lp(&p).is_infeasible());
    }

    #[test]
    fn empty_rows() {
        let mut p = LpProblem::new(2);
        p.le(vec![0.0, 0.0], 1.0);
        assert!(solve_lp(&p).is_feasible());
        p.le(vec![0.0, 0.0], -1.0);
        assert!(solve_lp(&p).is_infeasible());
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's classic cycling LP, as a feasibility + objective problem.
        let mut p = LpProblem::new(4);
        p.le(vec![0.25, -60.0, -0.04, 9.0], 0.0)
            .le(vec![0.5, -90.0, -0.02, 3.0], 0.0)
            .le(vec![0.0, 0.0, 1.0, 0.0], 1.0);
        for j in 0..4 {
            let mut e = vec![0.0; 4];
            e[j] = 1.0;
            p.ge(e, 0.0);
        }
        p.objective = Some(vec![0.75, -150.0, 0.02, -6.0]);
        let LpOutcome::Feasible { x, .. } = solve_lp(&p) else {
            panic!()
        };
        let val: f64 = x.iter().zip([0.75, -150.0, 0.02, -6.0]).map(|(a, b)| a * b).sum();
        assert!((val - 0.05).abs() < 1e-9, "{val}");
    }

    /// Random system built around a known point; the point satisfies every row.
    pub(crate) fn random_feasible(rng: &mut ChaCha8Rng) -> (LpProblem, Vec<f64>) {
        let n = rng.random_range(1..12);
        let x0: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let mut p = LpProblem::new(n);
        let rand_row = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..n).map(|_| rng.random_range(-5.0..5.0)).collect() };
        for _ in 0..rng.random_range(1..40) {
            let a = rand_row(rng);
            let v: f64 = a.iter().zip(&x0).map(|(a, b)| a * b).sum();
            p.le(a, v + rng.random_range(0.0..2.0));
        }
        for _ in 0..rng.random_range(0..n.min(4) + 1) {
            let a = rand_row(rng);
            let v: f64 = a.iter().zip(&x0).map(|(a, b)| a * b).sum();
            p.equal(a, v);
        }
        (p, x0)
    }

    #[test]
    fn random_feasible_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let (p, _) = random_feasible(&mut rng);
            match solve_lp(&p) {
                LpOutcome::Feasible { violation, .. } => assert!(violation <= 1e-9),
                other => panic!("{other:?} for {p:?}"),
            }
        }
    }

    #[test]
    fn random_contradicted_systems() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let (mut p, _) = random_feasible(&mut rng);
            // a . x <= b together with a . x >= b + 1
            let k = rng.random_range(0..p.inequalities.len());
            let row = p.inequalities[k].clone();
            p.ge(row.coeffs, row.bound + 1.0);
            assert!(solve_lp(&p).is_infeasible(), "{p:?}");
        }
    }

    proptest! {
        #[test]
        fn feasible_point_satisfies_rows(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (p, x0) = random_feasible(&mut rng);
            prop_assert!(p.max_violation(&x0) <= 1e-9);
            match solve_lp(&p) {
                LpOutcome::Feasible { x, violation } => {
                    prop_assert!(violation <= 1e-9);
                    prop_assert_eq!(x.len(), p.num_vars);
                }
                other => prop_assert!(false, "{:?}", other),
            }
        }
    }
}
