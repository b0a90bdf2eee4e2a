//! Multistart Nelder–Mead search for the supremum of `|P|_beta`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::constants::compute_constants;
use crate::construct::{prop6_polynomial, prop7_polynomial, NearExtremal, MAX_T};
use crate::error::{Error, Result};
use crate::polycore::{complex_vec, derivative, find_roots_default, from_roots, nearest_distance};

pub const DEFAULT_STARTS: usize = 64;
/// Simplex diameter (max-norm) at which a local search stops.
pub const SIMPLEX_TOL: f64 = 1e-10;
/// Iteration cap for one local search.
pub const MAX_ITER: usize = 2000;
const MAX_RESTARTS: usize = 3;
/// Roots are projected onto the unit circle only beyond this slack.
const DISK_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusEstimate {
    /// Degree of the polynomials searched.
    pub n: usize,
    pub beta: f64,
    pub value: f64,
    /// All `n` roots of the best polynomial, `beta` first.
    #[serde(with = "complex_vec")]
    pub best_roots: Vec<Complex64>,
    pub starts: usize,
    pub seed: u64,
    /// Whether any local search met [`SIMPLEX_TOL`].
    pub converged: bool,
}

/// `|P|_beta` for the monic `P` with roots `beta` and `free`, with critical
/// points found numerically.
///
/// If the root finder stalls its best iterates are used; the value is then
/// still a distance to approximate critical points.
pub fn root_objective(beta: f64, free: &[Complex64]) -> f64 {
    let mut roots = Vec::with_capacity(free.len() + 1);
    roots.push(Complex64::new(beta, 0.0));
    roots.extend_from_slice(free);
    let Ok(dp) = from_roots(&roots, Complex64::ONE).and_then(|p| derivative(&p)) else {
        return f64::NEG_INFINITY;
    };
    match find_roots_default(&dp) {
        Ok(crit) | Err(Error::NoConvergence { best: crit, .. }) => nearest_distance(&crit, beta),
        Err(_) => f64::NEG_INFINITY,
    }
}

/// How the free roots are encoded as a real parameter vector.
#[derive(Debug, Clone, Copy)]
enum Layout {
    /// Each root as `(re, im)`.
    Complex { roots: usize },
    /// Conjugate pairs as `(re, im)` followed by real roots.
    Real { pairs: usize, reals: usize },
}

impl Layout {
    fn new(free: usize, real_only: bool) -> Self {
        if real_only {
            let pairs = free / 2;
            Layout::Real {
                pairs,
                reals: free - 2 * pairs,
            }
        } else {
            Layout::Complex { roots: free }
        }
    }

    fn dim(self) -> usize {
        match self {
            Layout::Complex { roots } => 2 * roots,
            Layout::Real { pairs, reals } => 2 * pairs + reals,
        }
    }

    fn project(self, x: &mut [f64]) {
        let npairs = match self {
            Layout::Complex { roots } => roots,
            Layout::Real { pairs, .. } => pairs,
        };
        for k in 0..npairs {
            let r = x[2 * k].hypot(x[2 * k + 1]);
            if r > 1.0 + DISK_SLACK {
                x[2 * k] /= r;
                x[2 * k + 1] /= r;
            }
        }
        for v in &mut x[2 * npairs..] {
            *v = v.clamp(-1.0, 1.0);
        }
    }

    fn decode(self, x: &[f64]) -> Vec<Complex64> {
        match self {
            Layout::Complex { roots } => (0..roots)
                .map(|k| Complex64::new(x[2 * k], x[2 * k + 1]))
                .collect(),
            Layout::Real { pairs, reals } => {
                let mut out = Vec::with_capacity(2 * pairs + reals);
                for k in 0..pairs {
                    let z = Complex64::new(x[2 * k], x[2 * k + 1]);
                    out.push(z);
                    out.push(z.conj());
                }
                out.extend(x[2 * pairs..].iter().map(|&r| Complex64::new(r, 0.0)));
                out
            }
        }
    }

    /// Encodes an arbitrary root list. In the real layout the roots with the
    /// largest `|im|` stand for the pairs and the rest contribute their real
    /// parts.
    fn encode(self, roots: &[Complex64]) -> Vec<f64> {
        let mut x = match self {
            Layout::Complex { .. } => roots.iter().flat_map(|z| [z.re, z.im]).collect(),
            Layout::Real { pairs, reals } => {
                let mut sorted = roots.to_vec();
                sorted.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
                // one representative per conjugate pair
                let mut reps: Vec<Complex64> = Vec::with_capacity(pairs);
                let mut rest = Vec::new();
                for z in sorted {
                    let twin = reps
                        .iter()
                        .position(|r| (r.conj() - z).norm() < 1e-9 && r.im != 0.0);
                    if twin.is_some() {
                        continue;
                    }
                    if reps.len() < pairs && z.im.abs() > 0.0 {
                        reps.push(Complex64::new(z.re, z.im.abs()));
                    } else {
                        rest.push(z);
                    }
                }
                rest.sort_by(|a, b| a.im.abs().total_cmp(&b.im.abs()));
                let mut x: Vec<f64> = reps.iter().flat_map(|z| [z.re, z.im]).collect();
                x.resize(2 * pairs, 0.0);
                x.extend(rest.iter().take(reals).map(|z| z.re));
                x.resize(2 * pairs + reals, 0.0);
                x
            }
        };
        self.project(&mut x);
        x
    }
}

struct LocalResult {
    x: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Nelder–Mead with dimension-adaptive coefficients, maximizing `f`.
/// Every trial point is projected before evaluation.
fn nelder_mead(
    f: &impl Fn(&[f64]) -> f64,
    project: impl Fn(&mut [f64]),
    x0: &[f64],
    step: f64,
) -> LocalResult {
    let d = x0.len();
    let df = d as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / df);
    let rho = 0.75 - 1.0 / (2.0 * df);
    let sigma = 1.0 - 1.0 / df;
    // minimize the negation
    let cost = |x: &[f64]| {
        let v = -f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let trial = |x: Vec<f64>| {
        let mut x = x;
        project(&mut x);
        let c = cost(&x);
        (x, c)
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), cost(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        // step inward when the outward step would be projected back
        x[i] += step;
        let mut t = trial(x);
        if t.0 == x0 {
            let mut x = x0.to_vec();
            x[i] -= step;
            t = trial(x);
        }
        simplex.push(t);
    }

    let mut converged = false;
    for _ in 0..MAX_ITER {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < SIMPLEX_TOL {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / df;
            }
        }
        let worst = simplex[d].clone();
        let along = |s: f64, from: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, w)| c + s * (c - w))
                .collect()
        };
        let reflected = trial(along(alpha, &worst.0));
        if reflected.1 < simplex[0].1 {
            let expanded = trial(along(gamma, &worst.0));
            simplex[d] = if expanded.1 < reflected.1 { expanded } else { reflected };
            continue;
        }
        if reflected.1 < simplex[d - 1].1 {
            simplex[d] = reflected;
            continue;
        }
        let contracted = if reflected.1 < worst.1 {
            let c = trial(along(alpha * rho, &worst.0));
            (c.1 <= reflected.1).then_some(c)
        } else {
            let c = trial(along(-rho, &worst.0));
            (c.1 < worst.1).then_some(c)
        };
        match contracted {
            Some(c) => simplex[d] = c,
            None => {
                let x0 = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x = x0
                        .iter()
                        .zip(&v.0)
                        .map(|(b, y)| b + sigma * (y - b))
                        .collect();
                    *v = trial(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, c) = simplex.swap_remove(0);
    LocalResult {
        x,
        value: -c,
        converged,
    }
}

/// Local search with restarts from the incumbent on shrinking simplices.
fn local_search(f: &impl Fn(&[f64]) -> f64, layout: Layout, x0: Vec<f64>, step: f64) -> LocalResult {
    let project = |x: &mut [f64]| layout.project(x);
    let mut best = nelder_mead(f, project, &x0, step);
    let mut step = step;
    for _ in 0..MAX_RESTARTS {
        step *= 0.1;
        let next = nelder_mead(f, project, &best.x, step);
        let gained = next.value - best.value;
        if gained > 0.0 {
            best = next;
        } else {
            best.converged |= next.converged;
        }
        if gained <= 1e-13 {
            break;
        }
    }
    best
}

fn unit_roots(count: usize, skip_one: bool) -> Vec<Complex64> {
    let (lo, m) = if skip_one { (1, count + 1) } else { (0, count) };
    (lo..lo + count)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
        .collect()
}

/// Free roots for structured or random start `index`.
fn start_roots(free: usize, index: usize, seed: u64) -> Vec<Complex64> {
    match index {
        // roots of z^n - 1 other than 1
        0 => unit_roots(free, true),
        // roots of z^(n-1) - 1, the shape of z^n - z
        1 => unit_roots(free, false),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(index as u64);
            if index.is_multiple_of(2) {
                unit_roots(free, true)
                    .into_iter()
                    .map(|w| {
                        let shrink = 1.0 - 0.1 * rng.random::<f64>();
                        let turn = 0.2 * (rng.random::<f64>() - 0.5);
                        w * Complex64::from_polar(shrink, turn)
                    })
                    .collect()
            } else {
                (0..free)
                    .map(|_| {
                        let r = rng.random::<f64>().sqrt();
                        Complex64::from_polar(r, 2.0 * PI * rng.random::<f64>())
                    })
                    .collect()
            }
        }
    }
}

/// Free roots of the contracted near-extremal constructions of degree `n`,
/// where they apply.
pub fn construction_seeds(n: usize, beta: f64, real_only: bool) -> Vec<Vec<Complex64>> {
    let t = 1.0 - beta;
    let mut seeds = Vec::new();
    if !(t > 0.0 && t <= MAX_T) {
        return seeds;
    }
    if n >= 4 {
        let built = compute_constants(n - 1).and_then(|c| prop7_polynomial(&c, beta));
        match built.and_then(|f| f.contracted()) {
            Ok(done) => seeds.push(done.poly.free_roots().collect()),
            Err(e) => log::debug!("no real-family seed for n={n} beta={beta}: {e}"),
        }
    }
    if n == 6 && !real_only {
        match prop6_polynomial(beta).and_then(|f| f.contracted()) {
            Ok(done) => seeds.push(done.poly.free_roots().collect()),
            Err(e) => log::debug!("no sextic seed for beta={beta}: {e}"),
        }
    }
    seeds
}

/// Estimates `r_n(beta)`, the supremum of `|P|_beta` over degree-`n`
/// polynomials with all roots in the closed unit disk and one root at `beta`.
///
/// Runs `starts` local searches from structured and seeded random points,
/// plus one from each applicable contracted construction. With `real_only`
/// the free roots are restricted to conjugate pairs and real roots.
/// Identical arguments give bit-identical results.
pub fn estimate_radius(
    n: usize,
    beta: f64,
    starts: usize,
    seed: u64,
    real_only: bool,
) -> Result<RadiusEstimate> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("degree must be at least 2, got {n}")));
    }
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::BetaOutOfRange {
            beta,
            reason: "need 0 <= beta <= 1",
        });
    }
    if starts == 0 {
        return Err(Error::InvalidArgument("starts must be at least 1".into()));
    }
    let free = n - 1;
    let layout = Layout::new(free, real_only);
    let seeds = construction_seeds(n, beta, real_only);
    let objective = |x: &[f64]| root_objective(beta, &layout.decode(x));

    let results: Vec<LocalResult> = (0..starts + seeds.len())
        .into_par_iter()
        .map(|i| {
            let (roots, step) = if i < starts {
                (start_roots(free, i, seed), 0.1)
            } else {
                (seeds[i - starts].clone(), 0.01)
            };
            let x0 = layout.encode(&roots);
            debug_assert_eq!(x0.len(), layout.dim());
            local_search(&objective, layout, x0, step)
        })
        .collect();

    let converged = results.iter().any(|r| r.converged);
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.value > results[best].value {
            best = i;
        }
    }
    log::debug!(
        "n={n} beta={beta}: best start {best} of {} value {}",
        results.len(),
        results[best].value
    );
    let mut best_roots = vec![Complex64::new(beta, 0.0)];
    best_roots.extend(layout.decode(&results[best].x));
    Ok(RadiusEstimate {
        n,
        beta,
        value: results[best].value,
        best_roots,
        starts,
        seed,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts_round_trip() {
        let roots = [
            Complex64::new(0.1, 0.5),
            Complex64::new(0.1, -0.5),
            Complex64::new(-0.3, 0.0),
        ];
        let real = Layout::new(3, true);
        let x = real.encode(&roots);
        assert_eq!(x, vec![0.1, 0.5, -0.3]);
        assert_eq!(real.decode(&x), roots.to_vec());
        let cx = Layout::new(3, false);
        assert_eq!(cx.decode(&cx.encode(&roots)), roots.to_vec());
    }

    #[test]
    fn projection_keeps_roots_in_disk() {
        let layout = Layout::new(2, false);
        let mut x = vec![3.0, 4.0, 0.2, 0.1];
        layout.project(&mut x);
        assert!((x[0] - 0.6).abs() < 1e-15 && (x[1] - 0.8).abs() < 1e-15);
        assert_eq!(&x[2..], &[0.2, 0.1]);
    }

    #[test]
    fn objective_of_z3_minus_z() {
        let v = root_objective(0.0, &[Complex64::ONE, -Complex64::ONE]);
        assert!((v - (1.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn degree_two_is_exact() {
        let e = estimate_radius(2, 0.6, 4, 1, false).unwrap();
        assert!((e.value - 0.8).abs() < 1e-6, "{}", e.value);
        assert!(e.best_roots.iter().all(|z| z.norm() <= 1.0 + 1e-12));
        assert_eq!(e.best_roots[0], Complex64::new(0.6, 0.0));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(estimate_radius(1, 0.5, 4, 0, false).is_err());
        assert!(estimate_radius(3, 1.5, 4, 0, false).is_err());
        assert!(estimate_radius(3, 0.5, 0, 0, false).is_err());
    }

    #[test]
    fn starts_are_reproducible() {
        assert_eq!(start_roots(4, 7, 42), start_roots(4, 7, 42));
        assert_ne!(start_roots(4, 7, 42), start_roots(4, 7, 43));
        assert_ne!(start_roots(4, 7, 42), start_roots(4, 9, 42));
        assert!(start_roots(5, 11, 3).iter().all(|z| z.norm() <= 1.0));
    }
}
