//! Scalar constants of the quadratic expansion of the Sendov radius.
//!
//! For an expansion index `n >= 3` (polynomials of degree `n + 1`, whose
//! derivatives have degree `n`), the two binding `(n+1)`-th roots of unity
//! have real parts `u1 >= -1/2 > u2`. Everything else is a rational function
//! of `u1`, `u2` and `n`:
//!
//! ```text
//! r_{n+1}(beta) = 1 + slope * t + curvature * t^2 + O(t^(alpha+1)),   t = 1 - beta
//! ```
//!
//! All values are computed in `f64` directly from the trigonometric
//! definitions.

use std::f64::consts::PI;

use num_rational::Rational64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::Check;

/// Tolerance for identities that are exact in real arithmetic.
const IDENTITY_TOL: f64 = 1e-12;
/// Slack allowed on inequalities that hold with equality for some `n`.
const EQUALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SendovConstants {
    pub n: usize,
    pub k: usize,
    pub u1: f64,
    pub u2: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
    pub d6: f64,
    /// Quadratic coefficient attained by real near-extremal polynomials.
    pub d: f64,
    /// Order of the remainder is `alpha + 1`.
    pub alpha: f64,
    /// Extra quadratic term available to nonreal polynomials (only at `n = 5`).
    pub delta: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub c3: f64,
    /// Absent for `n = 3`, where its denominator `n - 3` vanishes.
    pub c4: Option<f64>,
    /// Linear coefficient `d1 + d2 / n`.
    pub slope: f64,
    /// Quadratic coefficient `d + delta`.
    pub curvature: f64,
}

/// `cos(2 pi p / q)`, exact at quarter and half turns.
fn cos_turns(p: usize, q: usize) -> f64 {
    match (4 * p) % (4 * q) {
        0 => 1.0,
        r if r == q || r == 3 * q => 0.0,
        r if r == 2 * q => -1.0,
        _ => (2.0 * PI * p as f64 / q as f64).cos(),
    }
}

pub fn compute_constants(n: usize) -> Result<SendovConstants> {
    if n < 3 {
        return Err(Error::IndexOutOfRange(n, 3));
    }
    let nf = n as f64;
    let k = (n + 1) / 3;
    let u1 = cos_turns(k, n + 1);
    let u2 = cos_turns(k + 1, n + 1);

    let denom = 2.0 * (1.0 - u1) * (1.0 - u2);
    let d1 = (-2.0 * u1 * u2 - 1.0) / denom;
    let d2 = -1.0 / denom;
    let d3 = (-1.0 - 4.0 * d1 - 3.0 * d1 * d1 + 2.0 * d2 * d2) / 2.0;
    let d4 = (3.0 * d1 - 4.0 * d2 + 3.0 * d1 * d1 - 2.0 * d1 * d2 - 6.0 * d2 * d2) / 2.0;
    let d5 = (2.0 + 4.0 * d1 + 5.0 * d2 + 2.0 * d1 * d1 + 4.0 * d1 * d2 + 3.0 * d2 * d2) / 2.0;
    let d6 = (2.0 * d2 + 2.0 * d1 * d2 + 3.0 * d2 * d2) / 2.0;
    let d = d3 * nf + d4 + d5 / nf + d6 / (nf * nf);

    let alpha = if n == 3 || n == 5 { 1.5 } else { 2.0 };
    let delta = if n == 5 { 7.0 / 225.0 } else { 0.0 };

    let gamma2 = 2.0 * (1.0 + d1 + d2) * (d1 - 2.0 * d2 + nf * d2);
    let gamma1 = -gamma2 + (-2.0 - 4.0 * d1) * nf + (1.0 + 4.0 * d1 - 4.0 * d2);

    let t = |f: &dyn Fn(f64) -> f64| t_weighted(n, u1, u2, f(u1), f(u2));
    let c3 = t(&|u| 1.0 + 4.0 * u + 4.0 * u * u) / (nf - 2.0);
    let c4 = (n >= 4).then(|| t(&|u| 8.0 * u * u + 8.0 * u * u * u) / (nf - 3.0));

    Ok(SendovConstants {
        n,
        k,
        u1,
        u2,
        d1,
        d2,
        d3,
        d4,
        d5,
        d6,
        d,
        alpha,
        delta,
        gamma1,
        gamma2,
        c3,
        c4,
        slope: d1 + d2 / nf,
        curvature: d + delta,
    })
}

fn t_weighted(n: usize, u1: f64, u2: f64, f_u1: f64, f_u2: f64) -> f64 {
    let nf = n as f64;
    ((2.0 * nf * u1 + nf + 1.0) * f_u2 - (2.0 * nf * u2 + nf + 1.0) * f_u1) / (2.0 * (u1 - u2))
}

/// The two-point functional `T` applied to a function known through its
/// values at `u1` and `u2`.
///
/// `T / n` is a weighted average of `f(u1)` and `f(u2)` with positive
/// weights, so `T` preserves pointwise inequalities between functions.
pub fn apply_t(f_u1: f64, f_u2: f64, c: &SendovConstants) -> f64 {
    t_weighted(c.n, c.u1, c.u2, f_u1, f_u2)
}

impl SendovConstants {
    /// `T(f)` for a function given as a closure.
    pub fn t_of(&self, f: impl Fn(f64) -> f64) -> f64 {
        apply_t(f(self.u1), f(self.u2), self)
    }

    /// Evaluates `1 + slope * t + curvature * t^2`.
    pub fn quadratic(&self, t: f64) -> f64 {
        1.0 + self.slope * t + self.curvature * t * t
    }

    /// Evaluates `1 + slope * t + d * t^2`, the value attained by the real family.
    pub fn real_quadratic(&self, t: f64) -> f64 {
        1.0 + self.slope * t + self.d * t * t
    }
}

/// Recovers `x` as a fraction with denominator at most `max_den`, if one lies
/// within `tol` of it.
///
/// Uses continued-fraction convergents, so the returned fraction is the
/// simplest one in that neighbourhood.
pub fn recognize_rational(x: f64, max_den: i64, tol: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    let (mut h_prev, mut h) = (1i64, x.floor() as i64);
    let (mut k_prev, mut k) = (0i64, 1i64);
    let mut frac = x - x.floor();
    loop {
        let approx = h as f64 / k as f64;
        if (approx - x).abs() <= tol {
            return Some(Rational64::new(h, k));
        }
        if frac.abs() < 1e-300 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if a > i64::MAX as f64 / 2.0 {
            return None;
        }
        let a = a as i64;
        frac = inv - inv.floor();
        let h_next = a.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            return None;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
    }
}

/// Structural inequalities and identities the constants satisfy for every
/// `n >= 3`, plus the two bounds on `T` used by the upper-bound argument.
///
/// Failures are reported, never raised.
pub fn check_lemma8(c: &SendovConstants) -> Vec<Check> {
    let n = c.n;
    let nf = n as f64;
    let mut out = Vec::with_capacity(16);

    out.push(Check::strict("lemma8.1 u2 < -1/2", -0.5 - c.u2, 0.0));
    out.push(Check::slack("lemma8.1 u1 >= -1/2", c.u1 + 0.5, EQUALITY_SLACK));
    if n != 4 {
        out.push(Check::slack("lemma8.1 u1 <= 0", -c.u1, EQUALITY_SLACK));
    } else {
        out.push(Check::not_applicable("lemma8.1 u1 <= 0", -c.u1));
    }
    if n != 3 && n != 5 {
        out.push(Check::strict("lemma8.1 u2 > -1", c.u2 + 1.0, EQUALITY_SLACK));
    } else {
        out.push(Check::not_applicable("lemma8.1 u2 > -1", c.u2 + 1.0));
    }

    out.push(Check::strict("lemma8.2 u1 + u2 < 0", -(c.u1 + c.u2), 0.0));
    out.push(Check::strict("lemma8.2 u1 u2 > -1", c.u1 * c.u2 + 1.0, 0.0));

    out.push(Check::slack(
        "lemma8.3 2n u1 + n + 1 >= 1",
        2.0 * nf * c.u1 + nf,
        EQUALITY_SLACK * nf,
    ));
    out.push(Check::strict("lemma8.3 2n u2 + n + 1 < 0", -(2.0 * nf * c.u2 + nf + 1.0), 0.0));

    out.push(Check::strict("lemma8.4 d1 < 0", -c.d1, 0.0));
    out.push(Check::strict("lemma8.4 d2 < 0", -c.d2, 0.0));

    // d1 decreases along each residue class mod 3 and the slope
    // approaches -1/3 at rate O(1/n).
    let rate = 1.0 / (3.0 * nf) - (c.slope + 1.0 / 3.0).abs();
    let part5 = if n >= 6 {
        match compute_constants(n - 3) {
            Ok(prev) => rate.min(prev.d1 - c.d1 + EQUALITY_SLACK),
            Err(_) => rate,
        }
    } else {
        rate
    };
    out.push(Check::slack("lemma8.5 slope -> -1/3", part5, 0.0));

    out.push(Check::strict("lemma8.6 slope > -1", c.slope + 1.0, 0.0));
    let exact = recognize_rational(c.slope, 1000, 1e-13);
    let at_bound = exact == Some(Rational64::new(-3, 10));
    if n == 4 {
        let margin = if at_bound { 0.0 } else { -(c.slope + 0.3).abs() };
        out.push(Check::new("lemma8.6 slope = -3/10", at_bound, margin));
    } else {
        out.push(Check::strict(
            "lemma8.6 slope < -3/10",
            -0.3 - c.slope,
            EQUALITY_SLACK,
        ));
    }

    for (i, u) in [(1, c.u1), (2, c.u2)] {
        let r = 1.0 + (1.0 + c.d1 + c.d2) * (u - 1.0) - c.d2 * (2.0 * u * u - 2.0);
        out.push(Check::residual(
            format!("lemma8.7 identity at u{i}"),
            r,
            IDENTITY_TOL,
        ));
    }

    // bounds on T
    let c3_margin = 0.5 - c.c3;
    if matches!(n, 3 | 4 | 6) {
        out.push(Check::not_applicable("lemma11.1 c3 < 1/2", c3_margin));
    } else {
        out.push(Check::strict("lemma11.1 c3 < 1/2", c3_margin, 0.0));
    }
    let t8 = c.t_of(|u| 8.0 * u * u + 8.0 * u * u * u);
    out.push(Check::slack("lemma11.2 T(8u^2 + 8u^3) >= 0", t8, EQUALITY_SLACK * nf));

    out
}

/// Residuals of the closed-form values of `T` on the five test functions
/// `1`, `2 + 2u`, `1/(1-u)`, `u/(1-u)` and `(1 + 2u)^2`.
pub fn t_identity_residuals(c: &SendovConstants) -> [(&'static str, f64); 6] {
    let nf = c.n as f64;
    let (d1, d2) = (c.d1, c.d2);
    let sq = c.t_of(|u| 1.0 + 4.0 * u + 4.0 * u * u);
    [
        ("T(1) = n", c.t_of(|_| 1.0) - nf),
        ("T(2+2u) = n-1", c.t_of(|u| 2.0 + 2.0 * u) - (nf - 1.0)),
        (
            "T(1/(1-u)) = n + n d1 + d2",
            c.t_of(|u| 1.0 / (1.0 - u)) - (nf + nf * d1 + d2),
        ),
        ("T(u/(1-u)) = n d1 + d2", c.t_of(|u| u / (1.0 - u)) - (nf * d1 + d2)),
        (
            "T(1+4u+4u^2) in d1, d2",
            sq + (nf + 1.0 + d1 + 3.0 * nf * d1 + 3.0 * d2) / d2,
        ),
        (
            "T(1+4u+4u^2) in u1, u2",
            sq + (nf + 2.0 + 2.0 * (nf + 1.0) * (c.u1 + c.u2) + 4.0 * nf * c.u1 * c.u2),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::all_passed;

    fn q(a: i64, b: i64) -> Rational64 {
        Rational64::new(a, b)
    }

    fn exact(x: f64) -> Rational64 {
        recognize_rational(x, 10_000, 1e-12).expect("not a small rational")
    }

    #[test]
    fn rejects_small_n() {
        assert!(compute_constants(2).is_err());
        assert!(compute_constants(0).is_err());
    }

    #[test]
    fn n3_values() {
        let c = compute_constants(3).unwrap();
        assert_eq!(exact(c.u1), q(0, 1));
        assert_eq!(exact(c.u2), q(-1, 1));
        assert_eq!(exact(c.d1), q(-1, 4));
        assert_eq!(exact(c.d2), q(-1, 4));
        assert_eq!(exact(c.slope), q(-1, 3));
        assert_eq!(c.alpha, 1.5);
        assert!(c.c4.is_none());
    }

    #[test]
    fn n5_values() {
        let c = compute_constants(5).unwrap();
        assert_eq!(exact(c.u1), q(-1, 2));
        assert_eq!(exact(c.u2), q(-1, 1));
        assert_eq!(exact(c.d1), q(-1, 3));
        assert_eq!(exact(c.d2), q(-1, 6));
        assert_eq!(exact(c.slope), q(-11, 30));
        assert_eq!(exact(c.delta), q(7, 225));
        assert_eq!(exact(c.curvature), q(29, 450));
        assert_eq!(exact(c.gamma1), q(-13, 6));
        assert_eq!(exact(c.gamma2), q(-5, 6));
        assert_eq!(exact(c.c3), q(1, 3));
        assert_eq!(exact(c.c4.unwrap()), q(2, 1));
        assert_eq!(c.alpha, 1.5);
    }

    #[test]
    fn n5_d_matches_curvature_minus_delta() {
        // oracle: rational difference of the two reported values
        let c = compute_constants(5).unwrap();
        let expected = q(29, 450) - q(7, 225);
        assert_eq!(expected, q(1, 30));
        assert!((c.d - 1.0 / 30.0).abs() < 1e-12);
        assert_eq!(exact(c.d), expected);
    }

    #[test]
    fn n6_table_row() {
        let c = compute_constants(6).unwrap();
        assert!((c.u1 - -0.2225).abs() < 5e-5);
        assert!((c.u2 - -0.9010).abs() < 5e-5);
        assert!((c.d1 - -0.3014).abs() < 5e-5);
    }

    #[test]
    fn k_is_floor_of_third() {
        for n in 3..60 {
            let c = compute_constants(n).unwrap();
            assert!(3 * c.k <= n + 1 && 3 * (c.k + 1) > n + 1);
            let nf = n as f64;
            assert!((c.u1 - (2.0 * PI * c.k as f64 / (nf + 1.0)).cos()).abs() < 1e-14);
        }
    }

    #[test]
    fn t_of_constants() {
        for n in [3, 4, 7, 50] {
            let c = compute_constants(n).unwrap();
            assert!((c.t_of(|_| 1.0) - n as f64).abs() < 1e-12);
            assert!((c.t_of(|u| 2.0 + 2.0 * u) - (n as f64 - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn t_of_u_over_one_minus_u_at_n5() {
        // oracle: the defining two-point formula in exact arithmetic
        let (u1, u2, n) = (q(-1, 2), q(-1, 1), q(5, 1));
        let f = |u: Rational64| u / (q(1, 1) - u);
        let two = q(2, 1);
        let expected =
            ((two * n * u1 + n + 1) * f(u2) - (two * n * u2 + n + 1) * f(u1)) / (two * (u1 - u2));
        assert_eq!(expected, q(-11, 6));
        let c = compute_constants(5).unwrap();
        let got = c.t_of(|u| u / (1.0 - u));
        assert!((got - -11.0 / 6.0).abs() < 1e-12);
        assert!((got - (5.0 * c.d1 + c.d2)).abs() < 1e-12);
    }

    #[test]
    fn apply_t_is_monotone() {
        let c = compute_constants(9).unwrap();
        assert!(apply_t(0.1, 0.2, &c) <= apply_t(0.3, 0.2, &c));
        assert!(apply_t(0.1, 0.2, &c) <= apply_t(0.1, 0.25, &c));
    }

    #[test]
    fn lemma8_n4_reports_zero_equality_margin() {
        let c = compute_constants(4).unwrap();
        let checks = check_lemma8(&c);
        let part6 = checks.iter().find(|c| c.name == "lemma8.6 slope = -3/10").unwrap();
        assert!(part6.passed);
        assert_eq!(part6.measure, 0.0);
        assert!(all_passed(&checks));
    }

    #[test]
    fn lemma11_n7_value() {
        let c = compute_constants(7).unwrap();
        assert!((c.c3 - 0.4627).abs() < 5e-5);
        let checks = check_lemma8(&c);
        let e = checks.iter().find(|c| c.name.starts_with("lemma11.1")).unwrap();
        assert!(e.applies && e.passed);
    }

    #[test]
    fn lemma8_n100_all_pass() {
        let checks = check_lemma8(&compute_constants(100).unwrap());
        assert!(all_passed(&checks), "{checks:?}");
        assert_eq!(checks.len(), 17);
    }

    #[test]
    fn c3_c4_at_n4_and_n6() {
        let c = compute_constants(4).unwrap();
        assert_eq!(exact(c.c3), q(3, 2));
        assert_eq!(exact(c.c4.unwrap()), q(4, 1));
        let c = compute_constants(6).unwrap();
        assert!((c.c3 - 0.729).abs() < 5e-4);
        assert!((c.c4.unwrap() - 0.972).abs() < 5e-4);
    }

    #[test]
    fn recognize_rational_basics() {
        assert_eq!(recognize_rational(-0.3, 100, 1e-14), Some(q(-3, 10)));
        assert_eq!(recognize_rational(29.0 / 450.0, 1000, 1e-14), Some(q(29, 450)));
        assert_eq!(recognize_rational(2f64.sqrt(), 1000, 1e-12), None);
        assert_eq!(recognize_rational(3.0, 10, 0.0), Some(q(3, 1)));
    }
}
