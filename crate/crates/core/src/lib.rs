//! Behaviour at infinity of mixed polynomials `f(z, z̄) : ℂⁿ → ℂ`.
//!
//! The crate parses a mixed polynomial, computes its Newton data exactly,
//! detects radial and polar weighted homogeneity, searches numerically for
//! mixed singular points of face restrictions (non-degeneracy), estimates
//! the asymptotic non-regular values `S(f)` and `S(f/|f|)`, traces the flow
//! that realizes the Milnor fibration at infinity, and combines all of this
//! into a verdict on whether that fibration exists.
//!
//! Exact answers (supports, faces, homogeneity types) are labelled exact;
//! answers that come from numerical search are labelled heuristic.

pub mod analysis;
pub mod atinfinity;
pub mod catalog;
pub mod error;
pub mod gaussian;
pub mod homogeneity;
pub mod linalg;
pub mod mixedpoly;
pub mod newton;
pub mod nondegen;
pub mod optimize;
pub mod parser;
pub mod plots;
mod serde_helpers;

pub use error::{Error, Result};
pub use gaussian::GaussianRational;
pub use mixedpoly::{MixedPolynomial, MixedTerm, WirtingerGradient};
pub use num_complex::Complex64;

#[cfg(test)]
pub(crate) mod testing {
    use num_complex::Complex64;

    use crate::catalog;
    use crate::mixedpoly::MixedPolynomial;

    pub fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub fn f_ex() -> MixedPolynomial {
        catalog::load("semitame").unwrap()
    }

    pub fn f_rad() -> MixedPolynomial {
        catalog::load("radial_norm").unwrap()
    }

    pub fn g_pol() -> MixedPolynomial {
        catalog::load("polar_quartic").unwrap()
    }

    pub fn fermat() -> MixedPolynomial {
        catalog::load("fermat_cubic").unwrap()
    }
}
