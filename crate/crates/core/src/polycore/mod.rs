//! Dense complex polynomials, the root finder, and the critical-distance
//! functional `|P|_beta`.

mod roots;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use roots::{find_roots, find_roots_default, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Slack allowed on `|z| <= 1` when testing membership in `S(n, beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskTolerance {
    pub eps: f64,
}

impl DiskTolerance {
    pub const EXACT: DiskTolerance = DiskTolerance { eps: 0.0 };

    pub fn new(eps: f64) -> Result<Self> {
        if !(eps >= 0.0 && eps.is_finite()) {
            return Err(Error::InvalidArgument(format!("disk tolerance {eps} must be >= 0")));
        }
        Ok(DiskTolerance { eps })
    }
}

impl Default for DiskTolerance {
    fn default() -> Self {
        DiskTolerance { eps: 1e-12 }
    }
}

/// A polynomial stored by its coefficients in ascending degree.
///
/// The leading coefficient is always nonzero: trailing zeros are stripped on
/// construction and the zero polynomial is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| *c == Complex64::ZERO) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroLeading);
        }
        Ok(ComplexPoly { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        ComplexPoly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        ComplexPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs[self.degree()]
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * z + c)
    }

    /// Value at `z` together with `sum |c_k| |z|^k`, the scale against which a
    /// residual is judged.
    pub fn eval_with_scale(&self, z: Complex64) -> (Complex64, f64) {
        let r = z.norm();
        self.coeffs
            .iter()
            .rev()
            .fold((Complex64::ZERO, 0.0), |(acc, s), &c| (acc * z + c, s * r + c.norm()))
    }

    /// Largest coefficient modulus.
    pub fn coefficient_scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn mul(&self, other: &ComplexPoly) -> ComplexPoly {
        let mut out = vec![Complex64::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        // leading coefficient is a product of nonzeros
        ComplexPoly { coeffs: out }
    }

    pub fn scale(&self, s: Complex64) -> Result<ComplexPoly> {
        ComplexPoly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest `|Im c_k|` over the coefficients.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }
}

/// `leading * prod (z - r_j)`, expanded one linear factor at a time.
pub fn from_roots(roots: &[Complex64], leading: Complex64) -> Result<ComplexPoly> {
    if leading == Complex64::ZERO {
        return Err(Error::ZeroLeading);
    }
    let mut coeffs = Vec::with_capacity(roots.len() + 1);
    coeffs.push(leading);
    for &r in roots {
        // multiply by (z - r): shift up, subtract r * old
        coeffs.push(Complex64::ZERO);
        for k in (0..coeffs.len()).rev() {
            let lower = if k > 0 { coeffs[k - 1] } else { Complex64::ZERO };
            coeffs[k] = lower - r * coeffs[k];
        }
    }
    Ok(ComplexPoly { coeffs })
}

pub fn derivative(p: &ComplexPoly) -> Result<ComplexPoly> {
    if p.degree() == 0 {
        return Err(Error::DegreeTooLow { needed: 1, got: 0 });
    }
    let coeffs = p
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect();
    Ok(ComplexPoly { coeffs })
}

/// The antiderivative of `pprime` that vanishes at `beta`.
pub fn antiderivative_from(pprime: &ComplexPoly, beta: f64) -> ComplexPoly {
    let mut coeffs = Vec::with_capacity(pprime.coeffs.len() + 1);
    coeffs.push(Complex64::ZERO);
    coeffs.extend(
        pprime
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| c / (k + 1) as f64),
    );
    let mut p = ComplexPoly { coeffs };
    let at_beta = p.eval(Complex64::new(beta, 0.0));
    p.coeffs[0] = -at_beta;
    p
}

/// Roots of `P'`, via [`derivative`] and [`find_roots_default`].
pub fn critical_points(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    find_roots_default(&derivative(p)?)
}

/// Distance from `beta` to the nearest of `points` (infinite if empty).
pub fn nearest_distance(points: &[Complex64], beta: f64) -> f64 {
    let b = Complex64::new(beta, 0.0);
    points.iter().map(|&w| (w - b).norm()).fold(f64::INFINITY, f64::min)
}

/// `|P|_beta`: the distance from `beta` to the closest root of `P'`.
///
/// Roots of `P'` are found numerically. A `k`-fold root of `P'` is only
/// resolved to about `eps^(1/k)`, so for polynomials whose critical points are
/// known in factored form prefer [`nearest_distance`] on those points.
pub fn critical_distance(p: &ComplexPoly, beta: f64) -> Result<f64> {
    if p.degree() < 2 {
        return Err(Error::DegreeTooLow {
            needed: 2,
            got: p.degree(),
        });
    }
    let (at_beta, scale) = p.eval_with_scale(Complex64::new(beta, 0.0));
    if at_beta.norm() > 1e-8 * scale.max(f64::MIN_POSITIVE) {
        log::warn!(
            "critical_distance: |P(beta)| = {:e} relative to scale {:e}; beta is not a root",
            at_beta.norm(),
            scale
        );
    }
    Ok(nearest_distance(&critical_points(p)?, beta))
}

/// A polynomial held by its roots, one of which is the distinguished root at
/// `beta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootedPoly {
    #[serde(with = "complex_vec")]
    roots: Vec<Complex64>,
    #[serde(with = "complex_pair")]
    leading: Complex64,
    beta: f64,
    designated: usize,
}

/// How far a root may sit from `beta` and still be taken as the designated root.
const DESIGNATION_TOL: f64 = 1e-9;

impl RootedPoly {
    /// The designated root is snapped exactly onto `beta`.
    pub fn new(
        mut roots: Vec<Complex64>,
        leading: Complex64,
        beta: f64,
        designated: usize,
    ) -> Result<Self> {
        if leading == Complex64::ZERO {
            return Err(Error::ZeroLeading);
        }
        let len = roots.len();
        let slot = roots
            .get_mut(designated)
            .ok_or(Error::BadDesignatedRoot { index: designated, len })?;
        if (*slot - Complex64::new(beta, 0.0)).norm() > DESIGNATION_TOL {
            return Err(Error::InvalidArgument(format!(
                "designated root {slot} is not beta = {beta}"
            )));
        }
        *slot = Complex64::new(beta, 0.0);
        Ok(RootedPoly {
            roots,
            leading,
            beta,
            designated,
        })
    }

    /// Roots `beta` followed by `others`, leading coefficient one.
    pub fn with_free_roots(beta: f64, others: &[Complex64]) -> Self {
        let mut roots = Vec::with_capacity(others.len() + 1);
        roots.push(Complex64::new(beta, 0.0));
        roots.extend_from_slice(others);
        RootedPoly {
            roots,
            leading: Complex64::ONE,
            beta,
            designated: 0,
        }
    }

    /// Factors `p` numerically and designates the root nearest `beta`.
    pub fn from_poly(p: &ComplexPoly, beta: f64) -> Result<Self> {
        let roots = find_roots_default(p)?;
        let b = Complex64::new(beta, 0.0);
        let designated = roots
            .iter()
            .enumerate()
            .min_by(|a, c| (*a.1 - b).norm().total_cmp(&(*c.1 - b).norm()))
            .map(|(i, _)| i)
            .ok_or(Error::DegreeTooLow { needed: 1, got: 0 })?;
        RootedPoly::new(roots, p.leading(), beta, designated)
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn leading(&self) -> Complex64 {
        self.leading
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn designated(&self) -> usize {
        self.designated
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Roots other than the designated one.
    pub fn free_roots(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.roots
            .iter()
            .enumerate()
            .filter(move |(i, _)| *i != self.designated)
            .map(|(_, &z)| z)
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_poly(&self) -> ComplexPoly {
        from_roots(&self.roots, self.leading).expect("leading coefficient is nonzero")
    }

    pub(crate) fn with_roots(&self, roots: Vec<Complex64>) -> RootedPoly {
        RootedPoly {
            roots,
            ..self.clone()
        }
    }
}

/// Membership in `S(n, beta)`: every root within `1 + eps` of the origin and
/// the designated root at `beta`.
pub fn in_s(p: &RootedPoly, dtol: DiskTolerance) -> bool {
    let at_beta = p.roots[p.designated] == Complex64::new(p.beta, 0.0);
    at_beta && p.roots.iter().all(|z| z.norm() <= 1.0 + dtol.eps)
}

impl Serialize for ComplexPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            #[serde(with = "complex_vec")]
            coeffs: &'a Vec<Complex64>,
        }
        Wire { coeffs: &self.coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            #[serde(with = "complex_vec")]
            coeffs: Vec<Complex64>,
        }
        let w = Wire::deserialize(d)?;
        ComplexPoly::new(w.coeffs).map_err(serde::de::Error::custom)
    }
}

/// Complex numbers as `[re, im]` pairs.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}

/// Lists of complex numbers as `[[re, im], ...]`.
pub mod complex_vec {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| [z.re, z.im]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Complex64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        Ok(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
