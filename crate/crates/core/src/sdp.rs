//! Small linear-matrix-inequality feasibility problems.
//!
//! Finds `y` with `E y = h`, `sum_k y_k A_k^(b) >= 0` for every block `b`,
//! and `y_i >= 0` on a subset of coordinates. The equalities are eliminated
//! (`y = y0 + N z`), and the margin `t` of
//!
//! ```text
//! S_b(z) - t I >= 0,  y_i(z) - t >= 0,  t <= 1,  |z| <= R
//! ```
//!
//! is maximized with a log-det barrier method. A positive margin gives a
//! strictly feasible point; the barrier duality bound `t* <= t + m / kappa`
//! at a centred point proves infeasibility (within the ball) once it is
//! negative.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

#[derive(Clone, Debug, PartialEq)]
pub struct LmiSystem {
    pub num_vars: usize,
    /// `blocks[b][k]` is the symmetric coefficient of `y_k` in block `b`.
    pub blocks: Vec<Vec<DMatrix<f64>>>,
    pub nonneg: Vec<usize>,
    pub eq_matrix: DMatrix<f64>,
    pub eq_rhs: DVector<f64>,
}

impl LmiSystem {
    pub fn block_at(&self, b: usize, y: &[f64]) -> DMatrix<f64> {
        let n = self.blocks[b][0].nrows();
        let mut s = DMatrix::zeros(n, n);
        for (k, a) in self.blocks[b].iter().enumerate() {
            if y[k] != 0.0 {
                s += a * y[k];
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SdpOptions {
    /// Bound on the distance from the least-norm solution of the equalities.
    pub radius: f64,
    /// A margin this large stops the search early.
    pub target_margin: f64,
    /// Infeasibility needs a certified margin bound below `-infeasible`.
    pub infeasible: f64,
    pub max_kappa: f64,
    pub max_newton: usize,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            radius: 1e4,
            target_margin: 1e-6,
            infeasible: 1e-7,
            max_kappa: 1e14,
            max_newton: 80,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SdpOutcome {
    Feasible { y: Vec<f64>, margin: f64 },
    Infeasible { margin_bound: f64 },
    /// Best point of a system whose largest margin is zero up to rounding;
    /// only usable after an independent check.
    Marginal { y: Vec<f64>, margin: f64 },
    Indeterminate { reason: String },
}

struct Reduced {
    y0: DVector<f64>,
    null: DMatrix<f64>,
    /// Per block: constant term and one matrix per reduced coordinate.
    consts: Vec<DMatrix<f64>>,
    coeffs: Vec<Vec<DMatrix<f64>>>,
}

fn reduce(sys: &LmiSystem) -> Result<Reduced, String> {
    let n = sys.num_vars;
    let (y0, null) = if sys.eq_matrix.nrows() == 0 {
        (DVector::zeros(n), DMatrix::identity(n, n))
    } else {
        let e = &sys.eq_matrix;
        let gram = e.transpose() * e;
        let eig = SymmetricEigen::new(gram);
        let top = eig.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] <= 1e-12 * top).collect();
        let null = DMatrix::from_fn(n, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
        let y0 = e
            .clone()
            .svd(true, true)
            .solve(&sys.eq_rhs, 1e-12 * top.sqrt())
            .map_err(|e| e.to_string())?;
        if (e * &y0 - &sys.eq_rhs).amax() > 1e-9 * (1.0 + sys.eq_rhs.amax()) {
            return Err("equality constraints are inconsistent".into());
        }
        (y0, null)
    };
    let p = null.ncols();
    let mut consts = Vec::new();
    let mut coeffs = Vec::new();
    for b in 0..sys.blocks.len() {
        consts.push(sys.block_at(b, y0.as_slice()));
        let m = sys.blocks[b][0].nrows();
        let mut cb = Vec::with_capacity(p);
        for j in 0..p {
            let mut a = DMatrix::zeros(m, m);
            for k in 0..n {
                let w = null[(k, j)];
                if w != 0.0 {
                    a += &sys.blocks[b][k] * w;
                }
            }
            cb.push(a);
        }
        coeffs.push(cb);
    }
    Ok(Reduced {
        y0,
        null,
        consts,
        coeffs,
    })
}

struct Barrier<'a> {
    sys: &'a LmiSystem,
    red: &'a Reduced,
    radius2: f64,
}

impl Barrier<'_> {
    fn p(&self) -> usize {
        self.red.null.ncols()
    }

    fn y(&self, z: &DVector<f64>) -> DVector<f64> {
        &self.red.y0 + &self.red.null * z
    }

    fn block(&self, b: usize, z: &DVector<f64>, t: f64) -> DMatrix<f64> {
        let mut s = self.red.consts[b].clone();
        for (j, a) in self.red.coeffs[b].iter().enumerate() {
            if z[j] != 0.0 {
                s += a * z[j];
            }
        }
        for i in 0..s.nrows() {
            s[(i, i)] -= t;
        }
        s
    }

    /// Barrier value, or `None` outside the domain.
    fn value(&self, z: &DVector<f64>, t: f64) -> Option<f64> {
        let mut v = 0.0;
        for b in 0..self.sys.blocks.len() {
            let ch = self.block(b, z, t).cholesky()?;
            v -= 2.0 * ch.l_dirty().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        }
        let y = self.y(z);
        for &i in &self.sys.nonneg {
            let s = y[i] - t;
            if !(s > 0.0) {
                return None;
            }
            v -= s.ln();
        }
        let top = 1.0 - t;
        let ball = self.radius2 - z.norm_squared();
        if !(top > 0.0 && ball > 0.0) {
            return None;
        }
        Some(v - top.ln() - ball.ln())
    }

    /// Gradient and Hessian of the barrier in `(z, t)`.
    fn derivatives(&self, z: &DVector<f64>, t: f64) -> Option<(DVector<f64>, DMatrix<f64>)> {
        let p = self.p();
        let dim = p + 1;
        let mut g = DVector::zeros(dim);
        let mut h = DMatrix::zeros(dim, dim);
        for b in 0..self.sys.blocks.len() {
            let s = self.block(b, z, t);
            let m = s.nrows();
            let inv = s.cholesky()?.inverse();
            // X A_j for every direction, t last with A = -I
            let mut xa: Vec<DMatrix<f64>> = self.red.coeffs[b].iter().map(|a| &inv * a).collect();
            xa.push(-inv.clone());
            for j in 0..dim {
                g[j] -= xa[j].trace();
            }
            for j in 0..dim {
                for k in j..dim {
                    // tr(X A_j X A_k)
                    let mut tr = 0.0;
                    for r in 0..m {
                        for c in 0..m {
                            tr += xa[j][(r, c)] * xa[k][(c, r)];
                        }
                    }
                    h[(j, k)] += tr;
                    if k != j {
                        h[(k, j)] += tr;
                    }
                }
            }
        }
        let y = self.y(z);
        for &i in &self.sys.nonneg {
            let s = y[i] - t;
            if !(s > 0.0) {
                return None;
            }
            let mut a = DVector::zeros(dim);
            for j in 0..p {
                a[j] = self.red.null[(i, j)];
            }
            a[p] = -1.0;
            g -= &a / s;
            h += &a * a.transpose() / (s * s);
        }
        let top = 1.0 - t;
        g[p] += 1.0 / top;
        h[(p, p)] += 1.0 / (top * top);
        let ball = self.radius2 - z.norm_squared();
        for j in 0..p {
            g[j] += 2.0 * z[j] / ball;
            h[(j, j)] += 2.0 / ball;
            for k in 0..p {
                h[(j, k)] += 4.0 * z[j] * z[k] / (ball * ball);
            }
        }
        Some((g, h))
    }

    fn degree(&self) -> f64 {
        let blocks: usize = self.sys.blocks.iter().map(|b| b[0].nrows()).sum();
        (blocks + self.sys.nonneg.len() + 2) as f64
    }
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

pub fn solve_lmi(sys: &LmiSystem, opts: &SdpOptions) -> SdpOutcome {
    let red = match reduce(sys) {
        Ok(r) => r,
        Err(reason) => return SdpOutcome::Indeterminate { reason },
    };
    let bar = Barrier {
        sys,
        red: &red,
        radius2: opts.radius * opts.radius,
    };
    let p = bar.p();
    let mut z = DVector::zeros(p);
    // a margin below every block eigenvalue and multiplier is always feasible
    let y = bar.y(&z);
    let mut t = (0..sys.blocks.len())
        .map(|b| min_eig(&red.consts[b]))
        .chain(sys.nonneg.iter().map(|&i| y[i]))
        .fold(1.0f64, f64::min)
        - 1.0;
    let deg = bar.degree();
    let mut kappa = 1.0;
    let finish = |z: &DVector<f64>, t: f64| SdpOutcome::Feasible {
        y: bar.y(z).iter().copied().collect(),
        margin: t,
    };
    while kappa <= opts.max_kappa {
        for _ in 0..opts.max_newton {
            if t >= opts.target_margin {
                return finish(&z, t);
            }
            let Some((mut g, h)) = bar.derivatives(&z, t) else {
                return SdpOutcome::Indeterminate {
                    reason: "left the barrier domain".into(),
                };
            };
            // minimize -kappa t + barrier
            g[p] -= kappa;
            let step = match h.clone().cholesky() {
                Some(ch) => ch.solve(&(-&g)),
                None => match h.lu().solve(&(-&g)) {
                    Some(s) => s,
                    None => {
                        return SdpOutcome::Indeterminate {
                            reason: "singular Newton system".into(),
                        }
                    }
                },
            };
            let decrement = -g.dot(&step);
            if !(decrement.is_finite()) {
                return SdpOutcome::Indeterminate {
                    reason: "non-finite Newton step".into(),
                };
            }
            if decrement < 1e-10 {
                break;
            }
            let f0 = bar.value(&z, t).map(|v| v - kappa * t);
            let Some(f0) = f0 else {
                return SdpOutcome::Indeterminate {
                    reason: "left the barrier domain".into(),
                };
            };
            let mut a = 1.0;
            let mut moved = false;
            while a > 1e-12 {
                let zn = &z + step.rows(0, p) * a;
                let tn = t + step[p] * a;
                if let Some(v) = bar.value(&zn, tn) {
                    if v - kappa * tn <= f0 - 0.25 * a * decrement {
                        z = zn;
                        t = tn;
                        moved = true;
                        break;
                    }
                }
                a *= 0.5;
            }
            if !moved {
                break;
            }
        }
        if t > 0.0 && t >= opts.target_margin {
            return finish(&z, t);
        }
        let bound = t + deg / kappa;
        if bound < -opts.infeasible {
            return SdpOutcome::Infeasible { margin_bound: bound };
        }
        kappa *= 8.0;
    }
    if t > 0.0 {
        finish(&z, t)
    } else if t > -opts.infeasible {
        SdpOutcome::Marginal {
            y: bar.y(&z).iter().copied().collect(),
            margin: t,
        }
    } else {
        SdpOutcome::Indeterminate {
            reason: format!("margin {t:e} undecided at the largest barrier weight"),
        }
    }
}
