//! Numerical estimates of the Sendov radius and tools for fitting its
//! expansion near `beta = 1`.

mod exact;
mod fit;
mod search;

pub use exact::{exact_radius, quadratic_approx};
pub use fit::{fit_expansion, scaling_exponent, ExpansionFit, ScalingFit, FIT_MAX_T};
pub use search::{
    construction_seeds, estimate_radius, root_objective, RadiusEstimate, DEFAULT_STARTS, MAX_ITER,
    SIMPLEX_TOL,
};
