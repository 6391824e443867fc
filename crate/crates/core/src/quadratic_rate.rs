//! Asymptotic rate of heavy-ball on quadratics of the class.
//!
//! On the eigenmode with curvature `lambda`, heavy-ball is the linear
//! recursion `e+ = (1 + beta - gamma lambda) e - beta e_prev`, whose rate is the
//! largest root modulus of `z^2 - a z + beta` with `a = 1 + beta - gamma lambda`.

use serde::{Deserialize, Serialize};

use crate::atlas::grid::{GridSpec, Provenance, RegionGrid};
use crate::error::Result;
use crate::format::f17;
use crate::types::{ClassParams, Tuning};

#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct RateValue {
    #[serde(with = "f17")]
    pub rho: f64,
}

impl RateValue {
    pub fn is_convergent(&self) -> bool {
        self.rho < 1.0
    }
}

/// Largest root modulus of `z^2 - (1 + beta - gamma lambda) z + beta`.
///
/// Complex roots (only possible for `beta >= 0`) all have modulus `sqrt(beta)`.
/// For `beta < 0` the discriminant is always positive.
pub fn spectral_radius_eigen(t: &Tuning, lambda: f64) -> RateValue {
    let a = 1.0 + t.beta - t.gamma * lambda;
    let disc = a * a - 4.0 * t.beta;
    let rho = if t.beta >= 0.0 && disc <= 0.0 {
        t.beta.sqrt()
    } else {
        0.5 * (a.abs() + disc.sqrt())
    };
    RateValue { rho }
}

/// Worst rate over `Q_{mu,L}`: attained at one of the two extreme eigenvalues.
pub fn rate_over_class(t: &Tuning, c: &ClassParams) -> RateValue {
    let lo = spectral_radius_eigen(t, c.mu);
    let hi = spectral_radius_eigen(t, c.l);
    RateValue {
        rho: lo.rho.max(hi.rho),
    }
}

/// Rate of gradient descent (`beta = 0`) with the optimal step `2/(mu+L)`.
pub fn best_gd_rate(c: &ClassParams) -> f64 {
    (c.l - c.mu) / (c.l + c.mu)
}

/// Rate of heavy-ball under Polyak's tuning.
pub fn best_hb_rate(c: &ClassParams) -> f64 {
    let (sm, sl) = (c.mu.sqrt(), c.l.sqrt());
    (sl - sm) / (sl + sm)
}

/// Default threshold of the "accelerated" mask: halfway between the best
/// gradient-descent rate and the best heavy-ball rate.
pub fn default_acceleration_threshold(c: &ClassParams) -> f64 {
    0.5 * (best_gd_rate(c) + best_hb_rate(c))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateCell {
    #[serde(flatten)]
    pub rate: RateValue,
    pub accelerated: bool,
}

pub fn rate_map(spec: &GridSpec, c: &ClassParams, threshold: Option<f64>) -> Result<RegionGrid<RateCell>> {
    spec.validate()?;
    c.validate()?;
    let thresh = threshold.unwrap_or_else(|| default_acceleration_threshold(c));
    let cells = spec
        .centers()
        .map(|t| {
            let rate = rate_over_class(&t, c);
            RateCell {
                rate,
                accelerated: rate.rho < thresh,
            }
        })
        .collect();
    let mut provenance = Provenance::new();
    provenance.insert("acceleration_threshold", crate::format::fmt17(thresh));
    Ok(RegionGrid {
        spec: *spec,
        class: *c,
        cells,
        provenance,
        certificates: None,
    })
}
