//! Named suites of numerical checks, shared by the CLI and the acceptance
//! tests.

use serde::Serialize;

use crate::constants::{check_lemma8, compute_constants, recognize_rational, t_identity_residuals};
use crate::construct::{prop6_polynomial, prop7_polynomial, NearExtremal};
use crate::error::Result;
use crate::estimate::{estimate_radius, fit_expansion, scaling_exponent};
use crate::polycore::{in_s, DiskTolerance};
use crate::report::Check;

/// Tolerance on identity residuals in the invariant suites.
pub const SUITE_TOL: f64 = 1e-10;

/// Grid of `t = 1 - beta` used for residual scaling.
pub const SCALING_GRID: [f64; 4] = [0.04, 0.02, 0.01, 0.005];

/// Real-family indices checked by the scaling suite by default.
pub const SCALING_INDICES: [usize; 5] = [3, 4, 6, 7, 8];

/// The structural checks on the constants for every index in `3..=max_n`.
pub fn lemma8_suite(max_n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        let c = compute_constants(n)?;
        out.extend(check_lemma8(&c).into_iter().map(|mut ch| {
            ch.name = format!("n={n} {}", ch.name);
            ch
        }));
    }
    Ok(out)
}

/// Closed-form values of `T` for every index in `3..=max_n`.
pub fn t_identity_suite(max_n: usize) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for n in 3..=max_n {
        let c = compute_constants(n)?;
        for (name, r) in t_identity_residuals(&c) {
            out.push(Check::residual(format!("n={n} {name}"), r, SUITE_TOL));
        }
    }
    Ok(out)
}

/// Slope bounds over `3..=200`, and the degree-6 versus degree-4 comparison
/// at `beta` from both the constructions and the optimizer.
pub fn corollaries_suite(beta: f64, starts: usize, seed: u64) -> Result<Vec<Check>> {
    let mut out = slope_checks(200)?;
    out.extend(fitted_slope_checks()?);

    let t = 1.0 - beta;
    let r4 = constructed_lower_bound(4, beta)?;
    let r6 = constructed_lower_bound(6, beta)?;
    out.push(Check::strict("constructed r6 < r4", r4 - r6, 0.0));
    let expected = (11.0 / 30.0 - 1.0 / 3.0) * t;
    let ratio = (r4 - r6) / expected;
    out.push(Check::new(
        "constructed r4 - r6 within factor 2 of t/30",
        (0.5..=2.0).contains(&ratio),
        ratio,
    ));

    let e4 = estimate_radius(4, beta, starts, seed, false)?;
    let e6 = estimate_radius(6, beta, starts, seed, false)?;
    out.push(Check::strict("estimated r6 < r4", e4.value - e6.value, 0.0));
    Ok(out)
}

/// `slope(n) <= -3/10` with equality only at `n = 4`, and
/// `|slope(n) + 1/3| < 0.01` for `n >= 150`.
pub fn slope_checks(max_n: usize) -> Result<Vec<Check>> {
    let mut worst_other = f64::INFINITY;
    let mut equal_at = Vec::new();
    let mut tail = 0.0f64;
    for n in 3..=max_n {
        let c = compute_constants(n)?;
        if recognize_rational(c.slope, 1000, 1e-13) == Some(num_rational::Rational64::new(-3, 10)) {
            equal_at.push(n);
        } else {
            worst_other = worst_other.min(-0.3 - c.slope);
        }
        if n >= 150 {
            tail = tail.max((c.slope + 1.0 / 3.0).abs());
        }
    }
    Ok(vec![
        Check::new("slope = -3/10 exactly at n = 4 only", equal_at == [4], equal_at.len() as f64),
        Check::strict("slope < -3/10 elsewhere", worst_other, 0.0),
        Check::strict("|slope + 1/3| < 0.01 for n >= 150", 0.01 - tail, 0.0),
    ])
}

/// Larger of the contracted constructions of degree `degree` at `beta`.
pub fn constructed_lower_bound(degree: usize, beta: f64) -> Result<f64> {
    let c = compute_constants(degree - 1)?;
    let mut best = prop7_polynomial(&c, beta)?.contracted()?.critical_distance;
    if degree == 6 {
        best = best.max(prop6_polynomial(beta)?.contracted()?.critical_distance);
    }
    Ok(best)
}

/// Slope of a quadratic fit to the constructed lower bounds, for degrees
/// 4 through 7, against `-3/10`.
///
/// Fitted on the scaling grid: on `t` up to 0.1 the cubic contraction term
/// shifts the degree-5 slope by about 4e-3.
fn fitted_slope_checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for degree in 4..=7 {
        let samples = SCALING_GRID
            .iter()
            .map(|&t| Ok((1.0 - t, constructed_lower_bound(degree, 1.0 - t)?)))
            .collect::<Result<Vec<_>>>()?;
        let fit = fit_expansion(degree, &samples)?;
        out.push(Check::slack(
            format!("degree {degree} fitted slope <= -3/10"),
            -0.3 - fit.c1,
            2e-3,
        ));
    }
    Ok(out)
}

/// Which construction the scaling suite examines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Family {
    /// The nonreal sextic.
    Prop6,
    /// The real family at the given indices.
    Prop7(Vec<usize>),
}

/// Residuals of one construction against its predicted quadratic.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub family: String,
    /// Expansion index; `None` for the sextic.
    pub n: Option<usize>,
    pub t_grid: Vec<f64>,
    pub residuals: Vec<f64>,
    pub exponent: f64,
    pub target: f64,
    /// Exponent required to pass.
    pub threshold: f64,
    /// Largest `|Z_2|` at the solved `x`, real family only.
    pub z2_residual: Option<f64>,
    /// Whether the contracted polynomial lies in the closed disk at every `t`.
    pub contracted_in_s: bool,
}

/// Runs the residual-scaling check and returns the rows and their verdicts.
///
/// The residual is taken on the contracted polynomial, the member of
/// `S(n, beta)` that realizes the lower bound. Before contraction the real
/// family's nearest critical point is `z0`, whose distance to `beta` equals
/// the predicted quadratic identically.
pub fn scaling_suite(family: &Family) -> Result<(Vec<ScalingRow>, Vec<Check>)> {
    let dtol = DiskTolerance::new(1e-12)?;
    let mut rows = Vec::new();
    match family {
        Family::Prop6 => {
            let mut residuals = Vec::new();
            let mut member = true;
            for t in SCALING_GRID {
                let f = prop6_polynomial(1.0 - t)?;
                let done = f.contracted()?;
                residuals.push((done.critical_distance - f.predicted()).abs());
                member &= in_s(&done.poly, dtol);
            }
            let exponent = scaling_exponent(&SCALING_GRID, &residuals)?.slope;
            rows.push(ScalingRow {
                family: "prop6".into(),
                n: None,
                t_grid: SCALING_GRID.to_vec(),
                residuals,
                exponent,
                target: 2.5,
                threshold: 2.2,
                z2_residual: None,
                contracted_in_s: member,
            });
        }
        Family::Prop7(indices) => {
            for &n in indices {
                let c = compute_constants(n)?;
                let mut residuals = Vec::new();
                let mut member = true;
                let mut z2 = 0.0f64;
                for t in SCALING_GRID {
                    let f = prop7_polynomial(&c, 1.0 - t)?;
                    let done = f.contracted()?;
                    residuals.push((done.critical_distance - f.predicted()).abs());
                    member &= in_s(&done.poly, dtol);
                    z2 = z2.max(f.z_residuals.1.abs());
                }
                let exponent = scaling_exponent(&SCALING_GRID, &residuals)?.slope;
                rows.push(ScalingRow {
                    family: "prop7".into(),
                    n: Some(n),
                    t_grid: SCALING_GRID.to_vec(),
                    residuals,
                    exponent,
                    target: c.alpha + 1.0,
                    threshold: c.alpha + 1.0 - 0.3,
                    z2_residual: Some(z2),
                    contracted_in_s: member,
                });
            }
        }
    }
    let mut checks = Vec::new();
    for row in &rows {
        let label = match row.n {
            Some(n) => format!("{} n={n}", row.family),
            None => row.family.clone(),
        };
        checks.push(Check::new(
            format!("{label} exponent >= {} (target {})", row.threshold, row.target),
            row.exponent >= row.threshold,
            row.exponent,
        ));
        if let Some(z2) = row.z2_residual {
            checks.push(Check::residual(format!("{label} Z2 at solved x"), z2, 1e-9));
        }
        checks.push(Check::new(
            format!("{label} contracted roots in disk"),
            row.contracted_in_s,
            if row.contracted_in_s { 1.0 } else { 0.0 },
        ));
    }
    Ok((rows, checks))
}
