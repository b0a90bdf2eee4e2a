use serde::Serialize;

/// One named pass/fail entry of a numerical check.
///
/// `measure` is the quantity the verdict was read from: the signed slack of
/// an inequality (nonnegative when it holds) or the absolute residual of an
/// identity. Entries with `applies == false` are listed for completeness and
/// always pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measure: f64,
    pub applies: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, measure: f64) -> Self {
        Check {
            name: name.into(),
            passed,
            measure,
            applies: true,
        }
    }

    /// Inequality `slack >= -tol`.
    pub fn slack(name: impl Into<String>, slack: f64, tol: f64) -> Self {
        Check::new(name, slack >= -tol, slack)
    }

    /// Strict inequality `slack > tol`.
    pub fn strict(name: impl Into<String>, slack: f64, tol: f64) -> Self {
        Check::new(name, slack > tol, slack)
    }

    /// Identity `|residual| < tol`.
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Check::new(name, residual.abs() < tol, residual.abs())
    }

    pub fn not_applicable(name: impl Into<String>, measure: f64) -> Self {
        Check {
            name: name.into(),
            passed: true,
            measure,
            applies: false,
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
