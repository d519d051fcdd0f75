//! High-accuracy scalar special functions and adaptive quadrature.
//!
//! Everything here is pure and reentrant; values are immutable and safe to
//! call from any number of threads.
//!
//! Modified Bessel functions are exposed in exponentially scaled form only
//! (`e^-x I_v(x)`). Downstream expressions assemble unscaled products with
//! explicit exponent bookkeeping, so terms like `e^-2g I0(sqrt(2) g)` never
//! overflow.

mod bessel;
mod erf;
mod gamma;
mod hypergeom;
mod marcum;
mod quad;

pub use bessel::{bessel_i0_scaled, bessel_i1_scaled, bessel_i_half, bessel_i_half_scaled};
pub use erf::{erf, erfc, gauss_q};
pub use gamma::{ln_gamma, ln_pochhammer, pochhammer};
pub use hypergeom::{gauss_2f1, hyp_1f0, kummer_1f1, ln_kummer_1f1};
pub use marcum::marcum_q1;
pub use quad::integrate_adaptive;

#[allow(unused_imports)]
pub(crate) use gamma::ln_gamma_signed;

use crate::error::{Error, Result};

/// Convergence control shared by series and quadrature routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance.
    pub rel: f64,
    /// Absolute tolerance floor.
    pub abs: f64,
    /// Iteration / panel budget.
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64, max_iter: usize) -> Result<Self> {
        if !(rel >= 0.0) || !(abs >= 0.0) {
            return Err(Error::domain("tolerances must be non-negative"));
        }
        if rel == 0.0 && abs == 0.0 {
            return Err(Error::domain("rel and abs tolerance must not both be zero"));
        }
        if max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        Ok(Tolerance { rel, abs, max_iter })
    }
}

impl Default for Tolerance {
    /// Comfortable headroom above the 1e-10 accuracy targets used downstream.
    fn default() -> Self {
        Tolerance {
            rel: 1e-12,
            abs: 1e-300,
            max_iter: 10_000,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_rejects_degenerate_settings() {
        assert!(Tolerance::new(0.0, 0.0, 100).is_err());
        assert!(Tolerance::new(1e-12, 0.0, 0).is_err());
        assert!(Tolerance::new(-1.0, 1e-300, 10).is_err());
        assert!(Tolerance::new(1e-10, 0.0, 10).is_ok());
    }
}
