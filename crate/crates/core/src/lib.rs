//! Constants, near-extremal constructions and numerical estimates for the
//! Sendov radius `r_n(beta)` near `beta = 1`.
//!
//! See the guide in `book/` for a walkthrough.

pub mod constants;
pub mod construct;
pub mod error;
pub mod estimate;
pub mod polycore;
pub mod report;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/constants.md")]
    mod constants {}
    #[doc = include_str!("../../../book/src/polynomials.md")]
    mod polynomials {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/estimation.md")]
    mod estimation {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
