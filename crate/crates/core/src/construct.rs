//! Near-extremal polynomials for `beta` close to 1, and the contraction that
//! pulls a polynomial with roots slightly outside the unit disk back into
//! `S(n, beta)`.
//!
//! Both families are built from their derivative in factored form, so their
//! critical points are known exactly and never have to be recovered by root
//! finding. That matters: the real family has an `(n-2)`-fold critical point,
//! which a root finder resolves only to about `eps^(1/(n-2))`.

use num_complex::Complex64;
use serde::Serialize;

use crate::constants::SendovConstants;
use crate::error::{Error, Result};
use crate::polycore::{
    antiderivative_from, complex_pair, complex_vec, from_roots, nearest_distance, ComplexPoly,
    RootedPoly,
};

/// Largest `t = 1 - beta` accepted by the constructions.
pub const MAX_T: f64 = 0.2;

/// Minimum distance between `beta` and every other root required by
/// [`contract_to_disk`].
pub const CONTRACTION_CLEARANCE: f64 = 0.1;

/// Slack on `|z| <= 1` tolerated after contracting.
const CONTRACTED_SLACK: f64 = 1e-14;

fn check_beta(beta: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange {
            beta,
            reason: "need 0 <= beta <= 1",
        });
    }
    let t = 1.0 - beta;
    if t > MAX_T {
        return Err(Error::BetaOutOfRange {
            beta,
            reason: "construction needs 1 - beta <= 0.2",
        });
    }
    Ok(t)
}

/// A polynomial vanishing at `beta` whose critical points are known in
/// closed form.
pub trait NearExtremal {
    fn beta(&self) -> f64;
    fn p(&self) -> &ComplexPoly;
    /// Roots of `P'` with multiplicity.
    fn critical_points(&self) -> Vec<Complex64>;
    /// The value the expansion predicts for `|P|_beta`.
    fn predicted(&self) -> f64;

    /// `|P|_beta` from the factored critical points.
    fn critical_distance(&self) -> f64 {
        nearest_distance(&self.critical_points(), self.beta())
    }

    /// Roots of `P`, with the one at `beta` designated.
    fn rooted(&self) -> Result<RootedPoly> {
        RootedPoly::from_poly(self.p(), self.beta())
    }

    /// The polynomial after [`contract_to_disk`], with its critical points
    /// carried through the same affine map.
    fn contracted(&self) -> Result<Contracted> {
        let raw = self.rooted()?;
        let factor = contraction_factor(&raw)?;
        let poly = apply_contraction(&raw, factor)?;
        let beta = Complex64::new(self.beta(), 0.0);
        let critical_points: Vec<Complex64> = self
            .critical_points()
            .into_iter()
            .map(|w| beta + (w - beta) * (1.0 - factor))
            .collect();
        let critical_distance = nearest_distance(&critical_points, self.beta());
        Ok(Contracted {
            raw_max_modulus: raw.max_modulus(),
            poly,
            factor,
            critical_points,
            critical_distance,
        })
    }
}

/// A construction after contraction into the closed unit disk.
#[derive(Debug, Clone, Serialize)]
pub struct Contracted {
    pub poly: RootedPoly,
    /// The `c` of the map `z -> z - c (z - beta)`; zero when nothing moved.
    pub factor: f64,
    #[serde(with = "complex_vec")]
    pub critical_points: Vec<Complex64>,
    pub critical_distance: f64,
    /// Largest root modulus before contracting.
    pub raw_max_modulus: f64,
}

/// The nonreal sextic family with `P' = (z - u)^4 (z - v)`.
#[derive(Debug, Clone, Serialize)]
pub struct Prop6Construction {
    pub beta: f64,
    #[serde(with = "complex_pair")]
    pub u: Complex64,
    #[serde(with = "complex_pair")]
    pub v: Complex64,
    pub pprime: ComplexPoly,
    pub p: ComplexPoly,
    /// `1 - (11/30) t + (29/450) t^2`.
    pub predicted: f64,
}

pub fn prop6_polynomial(beta: f64) -> Result<Prop6Construction> {
    let t = check_beta(beta)?;
    let h = t.sqrt();
    let s15 = 15f64.sqrt();
    let i = Complex64::I;
    let u = -i * (s15 / 15.0) * h - 0.6 * t + i * (s15 / 300.0) * h * t - (33.0 / 600.0) * t * t;
    let v = i * (4.0 * s15 / 15.0) * h - 0.1 * t
        + i * (46.0 * s15 / 300.0) * h * t
        + (532.0 / 600.0) * t * t;
    let pprime = from_roots(&[u, u, u, u, v], Complex64::ONE)?;
    let p = antiderivative_from(&pprime, beta);
    Ok(Prop6Construction {
        beta,
        u,
        v,
        pprime,
        p,
        predicted: 1.0 - (11.0 / 30.0) * t + (29.0 / 450.0) * t * t,
    })
}

impl NearExtremal for Prop6Construction {
    fn beta(&self) -> f64 {
        self.beta
    }
    fn p(&self) -> &ComplexPoly {
        &self.p
    }
    fn critical_points(&self) -> Vec<Complex64> {
        vec![self.u, self.u, self.u, self.u, self.v]
    }
    fn predicted(&self) -> f64 {
        self.predicted
    }
}

/// The real family with `P' = (z - z0)^(n-2) q(z)`, `q` quadratic with a
/// complex-conjugate root pair.
#[derive(Debug, Clone, Serialize)]
pub struct Prop7Construction {
    pub n: usize,
    pub beta: f64,
    pub b1: f64,
    pub b2: f64,
    pub z0: f64,
    pub x: f64,
    pub t1: f64,
    /// Coefficients of `q` in ascending degree; the last is always 1.
    pub qcoeffs: [f64; 3],
    #[serde(with = "complex_vec")]
    pub q_roots: Vec<Complex64>,
    pub pprime: ComplexPoly,
    pub p: ComplexPoly,
    /// `Z_1` and `Z_2` at the solved `x`.
    pub z_residuals: (f64, f64),
    /// `1 + slope t + d t^2`.
    pub predicted: f64,
}

/// `Z_i(x)` evaluated at `u = u_i`. Linear in `x`.
pub fn z_value(c: &SendovConstants, u: f64, x: f64) -> f64 {
    let n = c.n as f64;
    let dd = c.d;
    let (b1, b2) = (1.0 + c.d1 + c.d2 / n, (n - 1.0) * c.d2);
    let t1 = t1(n, b1, b2);
    (n * dd - 2.0 * dd - 2.0 * x) / n + (t1 + 2.0 * dd + 2.0 * x) * (2.0 * u + 2.0) / (n - 1.0)
        - (n - 1.0) * c.d2 * b1 * (4.0 * u * u + 4.0 * u + 1.0)
        + 0.5 * (c.gamma1 + c.gamma2 * u) / (1.0 - u)
}

fn t1(n: f64, b1: f64, b2: f64) -> f64 {
    (n * n - n) * b1 * b1 / 2.0 + (n - 2.0) * b1 * b2 + b2
}

/// Solves `Z_1(x) = 0` and returns `x` with both residuals `(Z_1(x), Z_2(x))`.
///
/// The two equations are proportional, so `Z_2(x)` vanishes as well up to
/// rounding.
pub fn solve_x(c: &SendovConstants) -> (f64, (f64, f64)) {
    let at0 = z_value(c, c.u1, 0.0);
    let slope = z_value(c, c.u1, 1.0) - at0;
    let x = -at0 / slope;
    (x, (z_value(c, c.u1, x), z_value(c, c.u2, x)))
}

pub fn prop7_polynomial(c: &SendovConstants, beta: f64) -> Result<Prop7Construction> {
    let t = check_beta(beta)?;
    let n = c.n;
    let nf = n as f64;
    let b1 = 1.0 + c.d1 + c.d2 / nf;
    let b2 = (nf - 1.0) * c.d2;
    let z0 = -b1 * t - c.d * t * t;
    let (x, z_residuals) = solve_x(c);
    let qcoeffs = [
        -b2 * t + (b1 * b1 + b2 + 2.0 * c.d + 2.0 * x) * t * t,
        (b2 + 2.0 * b1) * t - 2.0 * x * t * t,
        1.0,
    ];
    let q = ComplexPoly::from_real(&qcoeffs)?;
    let q_roots = quadratic_roots(qcoeffs[1], qcoeffs[0]);
    let pprime = from_roots(&vec![Complex64::new(z0, 0.0); n - 2], Complex64::ONE)?.mul(&q);
    let p = antiderivative_from(&pprime, beta);
    Ok(Prop7Construction {
        n,
        beta,
        b1,
        b2,
        z0,
        x,
        t1: t1(nf, b1, b2),
        qcoeffs,
        q_roots,
        pprime,
        p,
        z_residuals,
        predicted: c.real_quadratic(t),
    })
}

/// Roots of `z^2 + b z + c` for real `b`, `c`.
fn quadratic_roots(b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * c;
    if disc < 0.0 {
        let im = (-disc).sqrt() / 2.0;
        vec![Complex64::new(-b / 2.0, -im), Complex64::new(-b / 2.0, im)]
    } else {
        // avoid cancellation in the smaller root
        let big = -(b + b.signum() * disc.sqrt()) / 2.0;
        let small = if big == 0.0 { 0.0 } else { c / big };
        vec![Complex64::new(small, 0.0), Complex64::new(big, 0.0)]
    }
}

impl Prop7Construction {
    /// Discriminant of `q`; negative means a conjugate pair of roots.
    pub fn q_discriminant(&self) -> f64 {
        self.qcoeffs[1] * self.qcoeffs[1] - 4.0 * self.qcoeffs[0]
    }
}

impl NearExtremal for Prop7Construction {
    fn beta(&self) -> f64 {
        self.beta
    }
    fn p(&self) -> &ComplexPoly {
        &self.p
    }
    fn critical_points(&self) -> Vec<Complex64> {
        let mut pts = vec![Complex64::new(self.z0, 0.0); self.n - 2];
        pts.extend_from_slice(&self.q_roots);
        pts
    }
    fn predicted(&self) -> f64 {
        self.predicted
    }
}

/// The `c` of the contraction `z -> z - c (z - beta)` for `p`, or zero when
/// every root already lies in the closed unit disk.
pub fn contraction_factor(p: &RootedPoly) -> Result<f64> {
    let beta = Complex64::new(p.beta(), 0.0);
    for z in p.free_roots() {
        if (z - beta).norm() < CONTRACTION_CLEARANCE {
            return Err(Error::RootNearBeta {
                root: z,
                radius: CONTRACTION_CLEARANCE,
            });
        }
    }
    let c = p
        .free_roots()
        .filter(|z| z.norm() > 1.0)
        .map(|z| (z.norm_sqr() - 1.0) / (z - beta).norm_sqr())
        .fold(0.0, f64::max);
    if c >= 1.0 {
        return Err(Error::ContractionTooLarge(c));
    }
    Ok(c)
}

fn apply_contraction(p: &RootedPoly, c: f64) -> Result<RootedPoly> {
    if c == 0.0 {
        return Ok(p.clone());
    }
    let beta = Complex64::new(p.beta(), 0.0);
    let roots: Vec<Complex64> = p
        .roots()
        .iter()
        .enumerate()
        .map(|(i, &z)| if i == p.designated() { z } else { z - (z - beta) * c })
        .collect();
    let out = p.with_roots(roots);
    let worst = out.max_modulus();
    if worst > 1.0 + CONTRACTED_SLACK {
        return Err(Error::ContractionFailed(worst));
    }
    Ok(out)
}

/// Moves every root toward `beta` along `z -> z - c (z - beta)` with the
/// smallest `c` that puts all of them in the closed unit disk.
///
/// Returns `p` unchanged if it is already in `S(n, beta)`. The map is applied
/// once; a root left outside (beyond rounding) is an error.
pub fn contract_to_disk(p: &RootedPoly) -> Result<RootedPoly> {
    let c = contraction_factor(p)?;
    apply_contraction(p, c)
}
