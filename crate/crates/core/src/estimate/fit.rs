use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest `t = 1 - beta` accepted by [`fit_expansion`].
pub const FIT_MAX_T: f64 = 0.1;

/// Least-squares fit of `value = c0 + c1 t + c2 t^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionFit {
    pub n: usize,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub rms_residual: f64,
    pub t_grid: Vec<f64>,
}

/// Fits a quadratic in `t = 1 - beta` to `(beta, value)` samples.
///
/// Needs at least four samples with distinct `beta` and `0 <= t <= 0.1`.
pub fn fit_expansion(n: usize, samples: &[(f64, f64)]) -> Result<ExpansionFit> {
    if samples.len() < 4 {
        return Err(Error::DegenerateGrid(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    let t_grid: Vec<f64> = samples.iter().map(|&(b, _)| 1.0 - b).collect();
    if let Some(&t) = t_grid.iter().find(|t| !(0.0..=FIT_MAX_T).contains(*t)) {
        return Err(Error::DegenerateGrid(format!("t = {t} outside [0, {FIT_MAX_T}]")));
    }
    let mut sorted = t_grid.clone();
    sorted.sort_by(f64::total_cmp);
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DegenerateGrid("repeated beta".into()));
    }

    // scale columns to unit max so the rank test is meaningful
    let tmax = sorted[sorted.len() - 1];
    if tmax == 0.0 {
        return Err(Error::DegenerateGrid("all samples at t = 0".into()));
    }
    let m = samples.len();
    let a = DMatrix::from_fn(m, 3, |i, j| (t_grid[i] / tmax).powi(j as i32));
    let b = DVector::from_iterator(m, samples.iter().map(|&(_, v)| v));
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-10 * smax) {
        return Err(Error::DegenerateGrid(format!(
            "rank-deficient design (singular values {smin:e} / {smax:e})"
        )));
    }
    let x = svd
        .solve(&b, 0.0)
        .map_err(|e| Error::DegenerateGrid(e.to_string()))?;
    let r = &a * &x - &b;
    Ok(ExpansionFit {
        n,
        c0: x[0],
        c1: x[1] / tmax,
        c2: x[2] / (tmax * tmax),
        rms_residual: (r.norm_squared() / m as f64).sqrt(),
        t_grid,
    })
}

/// Log-log least-squares slope of residuals against `t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub points_used: usize,
    /// Points dropped because the residual or `t` was not positive.
    pub zeros_filtered: usize,
}

pub fn scaling_exponent(t_grid: &[f64], residuals: &[f64]) -> Result<ScalingFit> {
    if t_grid.len() != residuals.len() {
        return Err(Error::InvalidArgument(format!(
            "{} t values but {} residuals",
            t_grid.len(),
            residuals.len()
        )));
    }
    let pts: Vec<(f64, f64)> = t_grid
        .iter()
        .zip(residuals)
        .filter(|&(&t, &r)| t > 0.0 && r > 0.0)
        .map(|(&t, &r)| (t.ln(), r.ln()))
        .collect();
    let zeros_filtered = t_grid.len() - pts.len();
    if pts.len() < 3 {
        return Err(Error::DegenerateGrid(format!(
            "need 3 positive points, got {}",
            pts.len()
        )));
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateGrid("all t values equal".into()));
    }
    Ok(ScalingFit {
        slope: sxy / sxx,
        points_used: pts.len(),
        zeros_filtered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimate::exact_radius;

    const GRID: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

    #[test]
    fn recovers_exact_quadratic() {
        let samples: Vec<_> = GRID
            .iter()
            .map(|&t| (1.0 - t, 1.0 - 0.3 * t + 0.05 * t * t))
            .collect();
        let f = fit_expansion(4, &samples).unwrap();
        assert!((f.c0 - 1.0).abs() < 1e-12);
        assert!((f.c1 + 0.3).abs() < 1e-12);
        assert!((f.c2 - 0.05).abs() < 1e-12);
        assert!(f.rms_residual < 1e-14);
    }

    #[test]
    fn r3_slope_is_minus_one_third() {
        // d/dt of [3(1-t) + sqrt(12 - 3(1-t)^2)] / 6 at t = 0 is
        // [-3 + 3/3] / 6 = -1/3
        let samples: Vec<_> = GRID
            .iter()
            .map(|&t| (1.0 - t, exact_radius(3, 1.0 - t).unwrap()))
            .collect();
        let f = fit_expansion(3, &samples).unwrap();
        assert!((f.c1 + 1.0 / 3.0).abs() < 2e-3, "c1 = {}", f.c1);
        assert!((f.c0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rejects_bad_grids() {
        let ok = |t: f64| (1.0 - t, 1.0);
        assert!(fit_expansion(3, &[ok(0.1), ok(0.05), ok(0.02)]).is_err());
        assert!(fit_expansion(3, &[ok(0.1), ok(0.05), ok(0.02), ok(0.02)]).is_err());
        assert!(fit_expansion(3, &[ok(0.3), ok(0.05), ok(0.02), ok(0.01)]).is_err());
    }

    #[test]
    fn exponent_of_pure_power() {
        let r: Vec<f64> = GRID.iter().map(|t| t.powi(3)).collect();
        let s = scaling_exponent(&GRID, &r).unwrap();
        assert!((s.slope - 3.0).abs() < 1e-12);
        assert_eq!((s.points_used, s.zeros_filtered), (4, 0));
    }

    #[test]
    fn exponent_filters_zeros() {
        let r = [1e-3, 0.0, 1.5625e-5, 1.953125e-6];
        let s = scaling_exponent(&GRID, &r).unwrap();
        assert_eq!(s.zeros_filtered, 1);
        assert!((s.slope - 3.0).abs() < 1e-12);
        assert!(scaling_exponent(&GRID, &[1.0, 0.0, 0.0, 1.0]).is_err());
        assert!(scaling_exponent(&GRID, &[1.0]).is_err());
    }
}
