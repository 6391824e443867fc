//! Lyapunov certificates for heavy-ball on `F_{mu,L}`.
//!
//! The candidate is `V_t = l0 (f(x_t) - f*) + l1 (f(x_{t-1}) - f*) + q(z_t)`
//! with `q` a quadratic form in `z_t = (x_{t-1} - x*, g_{t-1}, x_t - x*, g_t)`.
//! It certifies `f(x_{t+1}) - f* <= V_{t+1} <= rho V_t` when
//!
//! * (A) `rho V_t - V_{t+1} - sum lambda_ij r_ij` and
//! * (B) `V_{t+1} - (f_{t+1} - f*) - sum nu_ij r_ij`
//!
//! both have zero function-value part and a positive semidefinite quadratic
//! part, `r_ij` being the interpolation residuals over the points
//! `{*, t-1, t, t+1}`. The quadratic parts live on the Gram matrix of
//! `(x_{t-1} - x*, x_t - x*, g_{t-1}, g_t, g_{t+1})`; `x_{t+1}` is eliminated
//! through the heavy-ball step.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::hb_step_scalar;
use crate::error::{Error, Result};
use crate::format::{f17, vec_f17};
use crate::interp::interp_residual;
use crate::quadratic_rate::rate_over_class;
use crate::sdp::{solve_lmi, LmiSystem, SdpOptions, SdpOutcome};
use crate::types::{ClassParams, DataPoint, Tuning};

/// Gram basis: `x_{t-1}, x_t, g_{t-1}, g_t, g_{t+1}` (iterates relative to `x*`).
const DIM: usize = 5;
const X_PREV: usize = 0;
const X_CUR: usize = 1;
const G_PREV: usize = 2;
const G_CUR: usize = 3;
const G_NEXT: usize = 4;

/// `ell` (2) + upper triangle of `Q` (10) + `lambda` (12) + `nu` (12).
pub const NUM_UNKNOWNS: usize = 36;
pub const NUM_PAIRS: usize = 12;
const Q_OFFSET: usize = 2;
const LAMBDA_OFFSET: usize = 12;
const NU_OFFSET: usize = 24;

/// Verification tolerance for eigenvalues, residuals and signs.
pub const VERIFY_TOL: f64 = 1e-8;

type Vec5 = [f64; DIM];

fn unit(i: usize) -> Vec5 {
    let mut v = [0.0; DIM];
    v[i] = 1.0;
    v
}

fn outer_sym(u: &Vec5, v: &Vec5) -> DMatrix<f64> {
    DMatrix::from_fn(DIM, DIM, |r, c| 0.5 * (u[r] * v[c] + v[r] * u[c]))
}

fn sub(u: &Vec5, v: &Vec5) -> Vec5 {
    std::array::from_fn(|i| u[i] - v[i])
}

/// One interpolation point in Gram coordinates; `f` indexes
/// `(f_{t-1}, f_t, f_{t+1})`, `None` for the optimum (`f* = 0`).
struct SymPoint {
    x: Vec5,
    g: Vec5,
    f: Option<usize>,
}

fn points(t: &Tuning) -> [SymPoint; 4] {
    let mut x_next = [0.0; DIM];
    x_next[X_CUR] = 1.0 + t.beta;
    x_next[X_PREV] = -t.beta;
    x_next[G_CUR] = -t.gamma;
    [
        SymPoint {
            x: [0.0; DIM],
            g: [0.0; DIM],
            f: None,
        },
        SymPoint {
            x: unit(X_PREV),
            g: unit(G_PREV),
            f: Some(0),
        },
        SymPoint {
            x: unit(X_CUR),
            g: unit(G_CUR),
            f: Some(1),
        },
        SymPoint {
            x: x_next,
            g: unit(G_NEXT),
            f: Some(2),
        },
    ]
}

/// Ordered pairs `(i, j)`, `i != j`, over `[*, t-1, t, t+1]` in row-major order.
pub fn pairs() -> Vec<(usize, usize)> {
    (0..4)
        .flat_map(|i| (0..4).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

/// `r_ij` as (function-value coefficients, Gram coefficient matrix).
fn symbolic_residual(pi: &SymPoint, pj: &SymPoint, c: &ClassParams) -> ([f64; 3], DMatrix<f64>) {
    let mut a = [0.0; 3];
    if let Some(k) = pi.f {
        a[k] += 1.0;
    }
    if let Some(k) = pj.f {
        a[k] -= 1.0;
    }
    let dx = sub(&pi.x, &pj.x);
    let dg = sub(&pi.g, &pj.g);
    let s = 1.0 / (2.0 * (1.0 - c.mu / c.l));
    let m = -outer_sym(&pj.g, &dx)
        - (outer_sym(&dg, &dg) / c.l + outer_sym(&dx, &dx) * c.mu - outer_sym(&dg, &dx) * (2.0 * c.mu / c.l)) * s;
    (a, m)
}

/// Rows of `z_t` and `z_{t+1}` in Gram coordinates.
fn lyapunov_frames(t: &Tuning) -> ([Vec5; 4], [Vec5; 4]) {
    let p = points(t);
    let zt = [unit(X_PREV), unit(G_PREV), unit(X_CUR), unit(G_CUR)];
    let zn = [unit(X_CUR), unit(G_CUR), p[3].x, unit(G_NEXT)];
    (zt, zn)
}

/// Upper-triangle index pairs of `Q`, row-major.
fn q_entries() -> Vec<(usize, usize)> {
    (0..4).flat_map(|a| (a..4).map(move |b| (a, b))).collect()
}

/// `sum_ab E_ab <z_a, z_b>` for the coefficient of one stored entry of `Q`.
fn q_entry_matrix(frame: &[Vec5; 4], a: usize, b: usize) -> DMatrix<f64> {
    if a == b {
        outer_sym(&frame[a], &frame[a])
    } else {
        outer_sym(&frame[a], &frame[b]) * 2.0
    }
}

/// Symmetric `Q` from its upper triangle.
pub fn q_matrix(upper: &[f64]) -> [[f64; 4]; 4] {
    let mut q = [[0.0; 4]; 4];
    for (k, (a, b)) in q_entries().into_iter().enumerate() {
        q[a][b] = upper[k];
        q[b][a] = upper[k];
    }
    q
}

#[derive(Clone, Debug, PartialEq)]
pub struct LmiProblem {
    pub tuning: Tuning,
    pub class: ClassParams,
    pub rho: f64,
    /// Block 0 is condition (A), block 1 condition (B).
    pub system: LmiSystem,
}

pub fn build_lmi(t: &Tuning, c: &ClassParams, rho: f64) -> Result<LmiProblem> {
    t.validate()?;
    c.validate()?;
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidInput(format!("rate must lie in (0, 1], got {rho}")));
    }
    let pts = points(t);
    let residuals: Vec<([f64; 3], DMatrix<f64>)> =
        pairs().into_iter().map(|(i, j)| symbolic_residual(&pts[i], &pts[j], c)).collect();
    let (zt, zn) = lyapunov_frames(t);
    let zero = DMatrix::zeros(DIM, DIM);
    let mut block_a = vec![zero.clone(); NUM_UNKNOWNS];
    let mut block_b = vec![zero.clone(); NUM_UNKNOWNS];
    for (k, (a, b)) in q_entries().into_iter().enumerate() {
        let now = q_entry_matrix(&zt, a, b);
        let next = q_entry_matrix(&zn, a, b);
        block_a[Q_OFFSET + k] = now * rho - &next;
        block_b[Q_OFFSET + k] = next;
    }
    for (p, (_, m)) in residuals.iter().enumerate() {
        block_a[LAMBDA_OFFSET + p] = -m;
        block_b[NU_OFFSET + p] = -m;
    }
    // function-value parts; V_t has (l1, l0, 0) on (f_{t-1}, f_t, f_{t+1}),
    // V_{t+1} has (0, l1, l0)
    let mut eq = DMatrix::zeros(6, NUM_UNKNOWNS);
    let mut rhs = DVector::zeros(6);
    eq[(0, 1)] = rho;
    eq[(1, 0)] = rho;
    eq[(1, 1)] = -1.0;
    eq[(2, 0)] = -1.0;
    eq[(4, 1)] = 1.0;
    eq[(5, 0)] = 1.0;
    rhs[5] = 1.0;
    for (p, (a, _)) in residuals.iter().enumerate() {
        for k in 0..3 {
            eq[(k, LAMBDA_OFFSET + p)] = -a[k];
            eq[(3 + k, NU_OFFSET + p)] = -a[k];
        }
    }
    Ok(LmiProblem {
        tuning: *t,
        class: *c,
        rho,
        system: LmiSystem {
            num_vars: NUM_UNKNOWNS,
            blocks: vec![block_a, block_b],
            nonneg: (LAMBDA_OFFSET..NUM_UNKNOWNS).collect(),
            eq_matrix: eq,
            eq_rhs: rhs,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LyapunovCertificate {
    /// Coefficients of `f(x_t) - f*` and `f(x_{t-1}) - f*`.
    #[serde(with = "vec_f17")]
    pub ell: Vec<f64>,
    /// Upper triangle of `Q`, row-major.
    #[serde(rename = "Q", with = "vec_f17")]
    pub q: Vec<f64>,
    #[serde(with = "vec_f17")]
    pub lambda: Vec<f64>,
    #[serde(with = "vec_f17")]
    pub nu: Vec<f64>,
    #[serde(with = "f17")]
    pub rho: f64,
    pub tuning: Tuning,
    pub class: ClassParams,
    #[serde(rename = "min_eig_A", with = "f17")]
    pub min_eig_a: f64,
    #[serde(rename = "min_eig_B", with = "f17")]
    pub min_eig_b: f64,
}

impl LyapunovCertificate {
    fn from_unknowns(y: &[f64], p: &LmiProblem) -> Self {
        let clamp = |v: &[f64]| v.iter().map(|x| x.max(0.0)).collect::<Vec<_>>();
        let mut cert = LyapunovCertificate {
            ell: y[..Q_OFFSET].to_vec(),
            q: y[Q_OFFSET..LAMBDA_OFFSET].to_vec(),
            lambda: clamp(&y[LAMBDA_OFFSET..NU_OFFSET]),
            nu: clamp(&y[NU_OFFSET..]),
            rho: p.rho,
            tuning: p.tuning,
            class: p.class,
            min_eig_a: f64::NAN,
            min_eig_b: f64::NAN,
        };
        let check = CertificateMatrices::assemble(&cert, &p.tuning, &p.class);
        cert.min_eig_a = min_eig(&check.a);
        cert.min_eig_b = min_eig(&check.b);
        cert
    }

    /// `V` at a point of the trajectory, from the current and previous
    /// iterates and their gradients (all relative to the minimizer).
    pub fn value(&self, f_cur: f64, f_prev: f64, z: [&[f64]; 4]) -> f64 {
        let q = q_matrix(&self.q);
        let mut v = self.ell[0] * f_cur + self.ell[1] * f_prev;
        for a in 0..4 {
            for b in 0..4 {
                let ip: f64 = z[a].iter().zip(z[b]).map(|(u, w)| u * w).sum();
                v += q[a][b] * ip;
            }
        }
        v
    }
}

fn min_eig(m: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

/// Both conditions of a certificate rebuilt from scalar evaluations of
/// `V` and the interpolation residuals (in dimension one), independently of
/// the matrices handed to the solver.
struct CertificateMatrices {
    a: DMatrix<f64>,
    b: DMatrix<f64>,
    fa: [f64; 3],
    fb: [f64; 3],
}

impl CertificateMatrices {
    fn assemble(cert: &LyapunovCertificate, t: &Tuning, c: &ClassParams) -> Self {
        let eval = |coef: &Vec5, f: [f64; 3]| -> (f64, f64) { condition_values(cert, t, c, coef, f) };
        let zero = [0.0; DIM];
        let fa = std::array::from_fn(|k| {
            let mut f = [0.0; 3];
            f[k] = 1.0;
            eval(&zero, f).0
        });
        let fb = std::array::from_fn(|k| {
            let mut f = [0.0; 3];
            f[k] = 1.0;
            eval(&zero, f).1
        });
        let mut a = DMatrix::zeros(DIM, DIM);
        let mut b = DMatrix::zeros(DIM, DIM);
        let diag: Vec<(f64, f64)> = (0..DIM).map(|i| eval(&unit(i), [0.0; 3])).collect();
        for i in 0..DIM {
            a[(i, i)] = diag[i].0;
            b[(i, i)] = diag[i].1;
            for j in i + 1..DIM {
                let mut v = unit(i);
                v[j] = 1.0;
                let (ea, eb) = eval(&v, [0.0; 3]);
                a[(i, j)] = 0.5 * (ea - diag[i].0 - diag[j].0);
                b[(i, j)] = 0.5 * (eb - diag[i].1 - diag[j].1);
                a[(j, i)] = a[(i, j)];
                b[(j, i)] = b[(i, j)];
            }
        }
        CertificateMatrices { a, b, fa, fb }
    }
}

/// Values of the two certified expressions on scalar data: Gram coordinates
/// `coef = (x_{t-1}, x_t, g_{t-1}, g_t, g_{t+1})` and values `f`.
fn condition_values(cert: &LyapunovCertificate, t: &Tuning, c: &ClassParams, coef: &Vec5, f: [f64; 3]) -> (f64, f64) {
    let x_next = hb_step_scalar(coef[X_PREV], coef[X_CUR], coef[G_CUR], t);
    let data = [
        DataPoint::scalar(0.0, 0.0, 0.0),
        DataPoint::scalar(coef[X_PREV], coef[G_PREV], f[0]),
        DataPoint::scalar(coef[X_CUR], coef[G_CUR], f[1]),
        DataPoint::scalar(x_next, coef[G_NEXT], f[2]),
    ];
    let v_now = cert.value(
        f[1],
        f[0],
        [&[coef[X_PREV]], &[coef[G_PREV]], &[coef[X_CUR]], &[coef[G_CUR]]],
    );
    let v_next = cert.value(f[2], f[1], [&[coef[X_CUR]], &[coef[G_CUR]], &[x_next], &[coef[G_NEXT]]]);
    let mut a = cert.rho * v_now - v_next;
    let mut b = v_next - f[2];
    for (p, (i, j)) in pairs().into_iter().enumerate() {
        let r = interp_residual(&data[i], &data[j], c).unwrap_or(f64::NAN);
        a -= cert.lambda[p] * r;
        b -= cert.nu[p] * r;
    }
    (a, b)
}

/// Why a certificate failed verification, if it did.
pub fn certificate_defect(cert: &LyapunovCertificate, t: &Tuning, c: &ClassParams, tol: f64) -> Option<String> {
    if cert.ell.len() != 2 || cert.q.len() != 10 || cert.lambda.len() != NUM_PAIRS || cert.nu.len() != NUM_PAIRS {
        return Some("wrong number of coefficients".into());
    }
    if t.validate().is_err() || c.validate().is_err() || !(cert.rho > 0.0 && cert.rho <= 1.0) {
        return Some("invalid tuning, class or rate".into());
    }
    if let Some(v) = cert.lambda.iter().chain(&cert.nu).find(|v| !(**v >= -tol)) {
        return Some(format!("negative multiplier {v}"));
    }
    let m = CertificateMatrices::assemble(cert, t, c);
    if let Some(r) = m.fa.iter().chain(&m.fb).find(|r| !(r.abs() <= tol)) {
        return Some(format!("function-value residual {r}"));
    }
    let (ea, eb) = (min_eig(&m.a), min_eig(&m.b));
    if !(ea >= -tol) {
        return Some(format!("decrease condition has eigenvalue {ea}"));
    }
    if !(eb >= -tol) {
        return Some(format!("lower bound condition has eigenvalue {eb}"));
    }
    None
}

pub fn verify_certificate(cert: &LyapunovCertificate, t: &Tuning, c: &ClassParams, tol: f64) -> bool {
    certificate_defect(cert, t, c, tol).is_none()
}

#[derive(Clone, Debug, PartialEq)]
pub enum CertOutcome {
    Found(Box<LyapunovCertificate>),
    NotFound,
    Indeterminate(String),
}

impl CertOutcome {
    pub fn certificate(&self) -> Option<&LyapunovCertificate> {
        match self {
            CertOutcome::Found(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, CertOutcome::Found(_))
    }
}

/// Solves the LMI and returns a certificate only if it passes
/// [`verify_certificate`].
pub fn sdp_feasible(p: &LmiProblem, opts: &SdpOptions) -> CertOutcome {
    match solve_lmi(&p.system, opts) {
        SdpOutcome::Feasible { y, .. } | SdpOutcome::Marginal { y, .. } => {
            let cert = LyapunovCertificate::from_unknowns(&y, p);
            match certificate_defect(&cert, &p.tuning, &p.class, VERIFY_TOL) {
                None => CertOutcome::Found(Box::new(cert)),
                Some(why) => CertOutcome::Indeterminate(format!("solver output rejected: {why}")),
            }
        }
        SdpOutcome::Infeasible { .. } => CertOutcome::NotFound,
        SdpOutcome::Indeterminate { reason } => CertOutcome::Indeterminate(reason),
    }
}

pub fn lyapunov_at(t: &Tuning, c: &ClassParams, rho: f64, opts: &SdpOptions) -> Result<CertOutcome> {
    Ok(sdp_feasible(&build_lmi(t, c, rho)?, opts))
}

#[derive(Clone, Debug, PartialEq)]
pub enum RateOutcome {
    /// Smallest certified rate found and its certificate.
    Rate(Box<LyapunovCertificate>),
    /// No certificate at `rho = 1` (or the tuning fails on quadratics).
    None,
    Indeterminate(String),
}

/// Bisection for the smallest certifiable rate in `[rho_quad, 1]`. Midpoints
/// where the solver is undecided are treated as infeasible, so the result is
/// always backed by a verified certificate.
pub fn best_rate(t: &Tuning, c: &ClassParams, tol_rho: f64, opts: &SdpOptions) -> Result<RateOutcome> {
    if !(tol_rho > 0.0) {
        return Err(Error::InvalidInput(format!("rate tolerance must be positive, got {tol_rho}")));
    }
    let lo_quad = rate_over_class(t, c).rho;
    if lo_quad >= 1.0 {
        return Ok(RateOutcome::None);
    }
    let mut best = match lyapunov_at(t, c, 1.0, opts)? {
        CertOutcome::Found(cert) => cert,
        CertOutcome::NotFound => return Ok(RateOutcome::None),
        CertOutcome::Indeterminate(why) => return Ok(RateOutcome::Indeterminate(why)),
    };
    let (mut lo, mut hi) = (lo_quad, 1.0);
    if lo > 0.0 {
        if let CertOutcome::Found(cert) = lyapunov_at(t, c, lo, opts)? {
            return Ok(RateOutcome::Rate(cert));
        }
    }
    while hi - lo > tol_rho {
        let mid = 0.5 * (lo + hi);
        match lyapunov_at(t, c, mid, opts)? {
            CertOutcome::Found(cert) => {
                hi = mid;
                best = cert;
            }
            _ => lo = mid,
        }
    }
    Ok(RateOutcome::Rate(best))
}

/// A random function of `F_{mu,L}`: `mu/2 |x|^2` plus `(L - mu)` times a
/// mixture of a quadratic with Hessian in `[0, I]` and ridge terms whose
/// profiles have curvature in `[0, 1]`.
#[derive(Clone, Debug)]
pub struct RandomClassFunction {
    mu: f64,
    l: f64,
    theta: f64,
    p: DMatrix<f64>,
    ridges: Vec<Ridge>,
}

#[derive(Clone, Debug)]
struct Ridge {
    a: DVector<f64>,
    b: f64,
    w: f64,
    /// Huber threshold; `None` for a softplus profile.
    huber: Option<f64>,
}

impl Ridge {
    fn value(&self, u: f64) -> f64 {
        match self.huber {
            Some(d) if u.abs() <= d => 0.5 * u * u,
            Some(d) => d * (u.abs() - 0.5 * d),
            // 4 log(1 + e^u) has second derivative 4 s (1 - s) <= 1
            None => 4.0 * (u.max(0.0) + (-u.abs()).exp().ln_1p()),
        }
    }

    fn slope(&self, u: f64) -> f64 {
        match self.huber {
            Some(d) => u.clamp(-d, d),
            None => 4.0 / (1.0 + (-u).exp()),
        }
    }
}

impl RandomClassFunction {
    pub fn sample(c: &ClassParams, dim: usize, rng: &mut impl Rng) -> Self {
        let b = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        let mut p = &b * b.transpose();
        let top = SymmetricEigen::new(p.clone()).eigenvalues.amax();
        if top > 0.0 {
            p /= top;
        }
        let n = rng.random_range(1..=4);
        let mut ridges: Vec<Ridge> = (0..n)
            .map(|_| {
                let mut a = DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0));
                let norm = a.norm();
                if norm > 0.0 {
                    a /= norm;
                } else {
                    a[0] = 1.0;
                }
                Ridge {
                    a,
                    b: rng.random_range(-1.0..1.0),
                    w: rng.random_range(0.1..1.0),
                    huber: rng.random_bool(0.5).then(|| rng.random_range(0.05..1.0)),
                }
            })
            .collect();
        let total: f64 = ridges.iter().map(|r| r.w).sum();
        ridges.iter_mut().for_each(|r| r.w /= total);
        RandomClassFunction {
            mu: c.mu,
            l: c.l,
            theta: rng.random_range(0.0..=1.0),
            p,
            ridges,
        }
    }

    pub fn value(&self, x: &DVector<f64>) -> f64 {
        let quad = 0.5 * x.dot(&(&self.p * x));
        let ridge: f64 = self.ridges.iter().map(|r| r.w * r.value(r.a.dot(x) - r.b)).sum();
        0.5 * self.mu * x.norm_squared() + (self.l - self.mu) * (self.theta * quad + (1.0 - self.theta) * ridge)
    }

    pub fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let mut g = &self.p * x * self.theta;
        for r in &self.ridges {
            g += &r.a * ((1.0 - self.theta) * r.w * r.slope(r.a.dot(x) - r.b));
        }
        g * (self.l - self.mu) + x * self.mu
    }

    /// Gradient descent with step `2 / (mu + L)`, which contracts by
    /// `(L - mu) / (L + mu)` per step.
    pub fn minimizer(&self) -> DVector<f64> {
        let step = 2.0 / (self.mu + self.l);
        let mut x = DVector::zeros(self.p.nrows());
        for _ in 0..100_000 {
            let g = self.gradient(&x);
            if g.norm() <= 1e-14 * self.l {
                break;
            }
            x -= g * step;
        }
        x
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloReport {
    pub samples: usize,
    /// Smallest observed `rho V_t - V_{t+1}`.
    pub worst_decrease: f64,
    /// Smallest observed `V_{t+1} - (f_{t+1} - f*)`.
    pub worst_lower: f64,
}

impl MonteCarloReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.worst_decrease >= -tol && self.worst_lower >= -tol
    }
}

/// Evaluates both certified inequalities on heavy-ball steps of random
/// functions of the class in dimensions 1 to 3.
pub fn monte_carlo_check(cert: &LyapunovCertificate, samples: usize, seed: u64) -> MonteCarloReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (t, c) = (cert.tuning, cert.class);
    let per_function = 50;
    let mut report = MonteCarloReport {
        samples: 0,
        worst_decrease: f64::INFINITY,
        worst_lower: f64::INFINITY,
    };
    while report.samples < samples {
        let dim = rng.random_range(1..=3);
        let f = RandomClassFunction::sample(&c, dim, &mut rng);
        let xs = f.minimizer();
        let fs = f.value(&xs);
        for _ in 0..per_function.min(samples - report.samples) {
            let scale = 10f64.powf(rng.random_range(-1.0..1.0));
            let x_prev = &xs + DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0) * scale);
            let x_cur = &xs + DVector::from_fn(dim, |_, _| rng.random_range(-1.0..1.0) * scale);
            let (g_prev, g_cur) = (f.gradient(&x_prev), f.gradient(&x_cur));
            let x_next = &x_cur - &g_cur * t.gamma + (&x_cur - &x_prev) * t.beta;
            let g_next = f.gradient(&x_next);
            let (dp, dc, dn) = (&x_prev - &xs, &x_cur - &xs, &x_next - &xs);
            let (fp, fc, fn_) = (f.value(&x_prev) - fs, f.value(&x_cur) - fs, f.value(&x_next) - fs);
            let v_now = cert.value(fc, fp, [dp.as_slice(), g_prev.as_slice(), dc.as_slice(), g_cur.as_slice()]);
            let v_next = cert.value(fn_, fc, [dc.as_slice(), g_cur.as_slice(), dn.as_slice(), g_next.as_slice()]);
            report.worst_decrease = report.worst_decrease.min(cert.rho * v_now - v_next);
            report.worst_lower = report.worst_lower.min(v_next - fn_);
            report.samples += 1;
        }
    }
    report
}
