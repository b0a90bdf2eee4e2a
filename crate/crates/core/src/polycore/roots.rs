//! Simultaneous root iteration (Aberth–Ehrlich).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use super::ComplexPoly;
use crate::error::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_ITER: usize = 200;

/// [`find_roots`] with the default tolerance and iteration cap.
pub fn find_roots_default(p: &ComplexPoly) -> Result<Vec<Complex64>> {
    find_roots(p, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// All `deg(p)` roots of `p`, with multiplicity, sorted by `(re, im)`.
///
/// Iterates until every approximation is at the rounding floor of Horner
/// evaluation or stops moving. The result is accepted when each root `r`
/// satisfies `|p(r)| <= tol * sum |c_k| |r|^k`; otherwise the best iterates are
/// returned inside [`Error::NoConvergence`].
///
/// Exact zero low-order coefficients are deflated as exact roots at the
/// origin. Multiple roots come back as clusters of nearby approximations.
pub fn find_roots(p: &ComplexPoly, tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let deg = p.degree();
    if deg == 0 {
        return Err(Error::DegreeTooLow { needed: 1, got: 0 });
    }
    let lead = p.leading();
    let zeros = p.coeffs().iter().take_while(|c| **c == Complex64::ZERO).count();
    let monic: Vec<Complex64> = p.coeffs()[zeros..].iter().map(|&c| c / lead).collect();
    let reduced = ComplexPoly { coeffs: monic };

    let mut roots = vec![Complex64::ZERO; zeros];
    if reduced.degree() > 0 {
        let mut z = initial_guesses(&reduced);
        let iterations = aberth(&reduced, &mut z, max_iter);
        let worst = z
            .iter()
            .map(|&r| {
                let (v, s) = reduced.eval_with_scale(r);
                v.norm() / s.max(f64::MIN_POSITIVE)
            })
            .fold(0.0, f64::max);
        roots.extend(z);
        if !(worst <= tol) {
            sort_roots(&mut roots);
            return Err(Error::NoConvergence {
                iterations,
                worst_residual: worst,
                best: roots,
            });
        }
    }
    sort_roots(&mut roots);
    Ok(roots)
}

fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Points on a circle whose radius is the geometric mean of the root moduli,
/// rotated off the axes by a fixed irrational angle.
fn initial_guesses(p: &ComplexPoly) -> Vec<Complex64> {
    let deg = p.degree();
    let c0 = p.coeffs()[0].norm();
    let mut radius = c0.powf(1.0 / deg as f64);
    if !(radius.is_finite() && radius > 0.0) {
        radius = 1.0;
    }
    (0..deg)
        .map(|j| {
            let theta = (2.0 * PI * j as f64 + SQRT_2) / deg as f64;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

/// Gauss–Seidel Aberth sweeps on a monic polynomial. Returns the number of
/// sweeps taken.
fn aberth(p: &ComplexPoly, z: &mut [Complex64], max_iter: usize) -> usize {
    let deg = p.degree();
    let dp: Vec<Complex64> = p
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| c * k as f64)
        .collect();
    // Horner's rounding error is bounded by about 2 deg eps times the scale.
    let floor = 2.0 * (deg as f64 + 1.0) * f64::EPSILON;
    let mut done = vec![false; deg];

    for sweep in 1..=max_iter {
        for i in 0..deg {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let (val, scale) = p.eval_with_scale(zi);
            if val.norm() <= floor * scale {
                done[i] = true;
                continue;
            }
            let dval = dp.iter().rev().fold(Complex64::ZERO, |acc, &c| acc * zi + c);
            let step = if dval == Complex64::ZERO {
                // stationary point: nudge off it
                Complex64::new(1e-8 * (1.0 + zi.norm()), 1e-8)
            } else {
                let newton = val / dval;
                let repulsion: Complex64 = z
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &zj)| {
                        let d = zi - zj;
                        if d == Complex64::ZERO {
                            Complex64::ZERO
                        } else {
                            d.inv()
                        }
                    })
                    .sum();
                let denom = Complex64::ONE - newton * repulsion;
                if denom == Complex64::ZERO || !denom.is_finite() {
                    newton
                } else {
                    newton / denom
                }
            };
            if !step.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] = zi - step;
            if step.norm() <= f64::EPSILON * zi.norm() {
                done[i] = true;
            }
        }
        if done.iter().all(|&d| d) {
            return sweep;
        }
    }
    max_iter
}
