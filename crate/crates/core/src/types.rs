//! Domain types shared by every analyzer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::f17;

/// The function class of `L`-smooth, `mu`-strongly convex functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    #[serde(with = "f17")]
    pub mu: f64,
    #[serde(rename = "L", with = "f17")]
    pub l: f64,
}

impl ClassParams {
    pub fn new(mu: f64, l: f64) -> Result<Self> {
        let c = ClassParams { mu, l };
        c.validate()?;
        Ok(c)
    }

    /// `mu = L` is rejected: the interpolation inequality divides by `1 - mu/L`.
    pub fn validate(&self) -> Result<()> {
        if self.mu.is_finite() && self.l.is_finite() && 0.0 < self.mu && self.mu < self.l {
            Ok(())
        } else {
            Err(Error::InvalidClass {
                mu: self.mu,
                l: self.l,
            })
        }
    }

    pub fn condition_number(&self) -> f64 {
        self.l / self.mu
    }

    /// Polyak's tuning, optimal on quadratics of the class.
    pub fn polyak_tuning(&self) -> Tuning {
        let (sm, sl) = (self.mu.sqrt(), self.l.sqrt());
        Tuning {
            gamma: 4.0 / (sl + sm).powi(2),
            beta: ((sl - sm) / (sl + sm)).powi(2),
        }
    }

    /// Rescaling `(mu, L) -> (c mu, c L)`; paired with `Tuning::scaled` it
    /// leaves every feasibility question unchanged.
    pub fn scaled(&self, c: f64) -> Self {
        ClassParams {
            mu: self.mu * c,
            l: self.l * c,
        }
    }
}

/// Step size and momentum of the heavy-ball iteration
/// `x+ = x - gamma * grad f(x) + beta * (x - x_prev)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tuning {
    #[serde(with = "f17")]
    pub gamma: f64,
    #[serde(with = "f17")]
    pub beta: f64,
}

impl Tuning {
    pub fn new(gamma: f64, beta: f64) -> Result<Self> {
        let t = Tuning { gamma, beta };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidTuning(format!(
                "step size must be positive, got {}",
                self.gamma
            )));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidTuning(format!(
                "momentum must be finite, got {}",
                self.beta
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Tuning {
            gamma: self.gamma / c,
            beta: self.beta,
        }
    }
}

/// One interpolation triple `(x, grad f(x), f(x))`.
#[derive(Clone, Debug, PartialEq)]
pub struct DataPoint {
    pub x: Vec<f64>,
    pub g: Vec<f64>,
    pub f: f64,
}

impl DataPoint {
    pub fn new(x: Vec<f64>, g: Vec<f64>, f: f64) -> Result<Self> {
        if x.len() != g.len() {
            return Err(Error::InvalidInput(format!(
                "point has dimension {} but gradient has dimension {}",
                x.len(),
                g.len()
            )));
        }
        Ok(DataPoint { x, g, f })
    }

    pub fn scalar(x: f64, g: f64, f: f64) -> Self {
        DataPoint {
            x: vec![x],
            g: vec![g],
            f,
        }
    }

    /// The minimizer of a function, placed at the origin with `f = 0`.
    pub fn optimum(dim: usize) -> Self {
        DataPoint {
            x: vec![0.0; dim],
            g: vec![0.0; dim],
            f: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// The two most recent iterates of heavy-ball.
#[derive(Clone, Debug, PartialEq)]
pub struct HbState {
    pub x_prev: Vec<f64>,
    pub x_cur: Vec<f64>,
}

impl HbState {
    pub fn new(x_prev: Vec<f64>, x_cur: Vec<f64>) -> Result<Self> {
        if x_prev.len() != x_cur.len() {
            return Err(Error::InvalidInput(format!(
                "iterates have dimensions {} and {}",
                x_prev.len(),
                x_cur.len()
            )));
        }
        Ok(HbState { x_prev, x_cur })
    }

    pub fn scalar(x_prev: f64, x_cur: f64) -> Self {
        HbState {
            x_prev: vec![x_prev],
            x_cur: vec![x_cur],
        }
    }
}
