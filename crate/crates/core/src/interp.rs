//! Smooth strongly convex interpolation inequality.

use crate::error::{Error, Result};
use crate::types::{ClassParams, DataPoint};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Residual of the `F_{mu,L}` interpolation inequality for the ordered pair
/// `(i, j)`:
///
/// ```text
/// r_ij = f_i - f_j - <g_j, x_i - x_j>
///        - 1/(2(1 - mu/L)) * ( |g_i - g_j|^2 / L + mu |x_i - x_j|^2
///                              - 2 mu/L <g_j - g_i, x_j - x_i> )
/// ```
///
/// A finite data set is interpolable by some function of the class iff
/// `r_ij >= 0` for every ordered pair.
pub fn interp_residual(pi: &DataPoint, pj: &DataPoint, c: &ClassParams) -> Result<f64> {
    c.validate()?;
    let d = pi.dim();
    if pj.dim() != d || pi.g.len() != d || pj.g.len() != d {
        return Err(Error::InvalidInput("data points of different dimensions".into()));
    }
    let dx: Vec<f64> = pi.x.iter().zip(&pj.x).map(|(a, b)| a - b).collect();
    let dg: Vec<f64> = pi.g.iter().zip(&pj.g).map(|(a, b)| a - b).collect();
    let (mu, l) = (c.mu, c.l);
    let scale = 1.0 / (2.0 * (1.0 - mu / l));
    // <g_j - g_i, x_j - x_i> = <dg, dx>
    let curvature = dot(&dg, &dg) / l + mu * dot(&dx, &dx) - 2.0 * mu / l * dot(&dg, &dx);
    Ok(pi.f - pj.f - dot(&pj.g, &dx) - scale * curvature)
}

/// Smallest residual over all ordered pairs of `points`.
pub fn min_pairwise_residual(points: &[DataPoint], c: &ClassParams) -> Result<f64> {
    let mut worst = f64::INFINITY;
    for (i, pi) in points.iter().enumerate() {
        for (j, pj) in points.iter().enumerate() {
            if i != j {
                worst = worst.min(interp_residual(pi, pj, c)?);
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quad_point(lambda: f64, b: &[f64], x: &[f64]) -> DataPoint {
        let g: Vec<f64> = x.iter().zip(b).map(|(xi, bi)| lambda * xi + bi).collect();
        let f = 0.5 * lambda * dot(x, x) + dot(b, x);
        DataPoint::new(x.to_vec(), g, f).unwrap()
    }

    #[test]
    fn identical_points_have_zero_residual() {
        let c = ClassParams::new(1.0, 10.0).unwrap();
        let p = DataPoint::new(vec![0.3, -1.2], vec![2.0, 0.5], 4.0).unwrap();
        assert_eq!(interp_residual(&p, &p, &c).unwrap(), 0.0);
    }

    #[test]
    fn smoothness_violation_detected() {
        // For f = lambda x^2 / 2 and the pair (1, 0) the residual reduces to
        // (lambda - mu)(L - lambda) / (2 (L - mu)); lambda = 12 gives -22/18.
        let c = ClassParams::new(1.0, 10.0).unwrap();
        let pi = quad_point(12.0, &[0.0], &[1.0]);
        let pj = quad_point(12.0, &[0.0], &[0.0]);
        let r = interp_residual(&pi, &pj, &c).unwrap();
        assert!((r - (-22.0 / 18.0)).abs() < 1e-14, "{r}");
    }

    #[test]
    fn class_endpoints_are_tight() {
        let c = ClassParams::new(1.0, 10.0).unwrap();
        for lambda in [1.0, 10.0] {
            let pi = quad_point(lambda, &[0.0], &[1.0]);
            let pj = quad_point(lambda, &[0.0], &[0.0]);
            assert!(interp_residual(&pi, &pj, &c).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_class_and_shapes() {
        let bad = ClassParams { mu: 2.0, l: 2.0 };
        let p = DataPoint::scalar(0.0, 0.0, 0.0);
        assert!(matches!(
            interp_residual(&p, &p, &bad),
            Err(Error::InvalidClass { .. })
        ));
        let c = ClassParams::new(1.0, 2.0).unwrap();
        let q = DataPoint::optimum(2);
        assert!(interp_residual(&p, &q, &c).is_err());
    }

    proptest! {
        #[test]
        fn quadratics_in_class_are_interpolable(
            mu in 0.01f64..5.0,
            ratio in 1.01f64..100.0,
            frac in 0.0f64..=1.0,
            b in prop::collection::vec(-3.0f64..3.0, 3),
            xs in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 3), 2..6),
        ) {
            let c = ClassParams::new(mu, mu * ratio).unwrap();
            let lambda = c.mu + frac * (c.l - c.mu);
            let pts: Vec<_> = xs.iter().map(|x| quad_point(lambda, &b, x)).collect();
            let worst = min_pairwise_residual(&pts, &c).unwrap();
            let scale = 1.0 + pts.iter().map(|p| p.f.abs()).fold(0.0, f64::max);
            prop_assert!(worst >= -1e-12 * scale, "worst residual {}", worst);
        }
    }
}
