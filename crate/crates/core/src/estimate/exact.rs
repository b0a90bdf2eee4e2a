use crate::constants::compute_constants;
use crate::error::{Error, Result};

/// `r_n(beta)` where a closed form is known: `n` in {2, 3} for any `beta`,
/// and `beta` in {0, 1} for any `n`.
pub fn exact_radius(n: usize, beta: f64) -> Option<f64> {
    if n < 2 || !(0.0..=1.0).contains(&beta) {
        return None;
    }
    if beta == 1.0 {
        return Some(1.0);
    }
    match n {
        2 => Some((1.0 + beta) / 2.0),
        3 => Some((3.0 * beta + (12.0 - 3.0 * beta * beta).sqrt()) / 6.0),
        _ if beta == 0.0 => Some((1.0 / n as f64).powf(1.0 / (n as f64 - 1.0))),
        _ => None,
    }
}

/// The two-term expansion of `r_{n+1}(beta)` about `beta = 1`.
pub fn quadratic_approx(n_plus_1: usize, beta: f64) -> Result<f64> {
    if n_plus_1 < 4 {
        return Err(Error::IndexOutOfRange(n_plus_1, 4));
    }
    Ok(compute_constants(n_plus_1 - 1)?.quadratic(1.0 - beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(exact_radius(2, 0.5), Some(0.75));
        let r3 = exact_radius(3, 0.5).unwrap();
        assert!((r3 - (1.5 + 11.25f64.sqrt()) / 6.0).abs() < 1e-15);
        assert!((r3 - 0.809017).abs() < 1e-6);
        assert!((exact_radius(7, 0.0).unwrap() - 0.72302).abs() < 1e-5);
        assert_eq!(exact_radius(9, 1.0), Some(1.0));
        assert_eq!(exact_radius(5, 0.5), None);
        assert_eq!(exact_radius(1, 0.5), None);
        assert_eq!(exact_radius(3, 1.5), None);
    }

    #[test]
    fn closed_forms_agree_where_they_overlap() {
        // n = 3 at beta = 0 is also (1/3)^(1/2)
        assert!((exact_radius(3, 0.0).unwrap() - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((exact_radius(2, 0.0).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quadratic_examples() {
        let q4 = quadratic_approx(4, 0.99).unwrap();
        let c3 = compute_constants(3).unwrap();
        assert!((q4 - (1.0 - 0.01 / 3.0 + c3.curvature * 1e-4)).abs() < 1e-15);
        assert!((q4 - 0.996667).abs() < 1e-5);
        let q6 = quadratic_approx(6, 0.99).unwrap();
        assert!((q6 - (1.0 - 11.0 / 3000.0 + 29.0 / 450.0 * 1e-4)).abs() < 1e-12, "{q6}");
        for m in 4..10 {
            assert_eq!(quadratic_approx(m, 1.0).unwrap(), 1.0);
        }
        assert!(quadratic_approx(3, 0.9).is_err());
    }
}
