//! Conditional (instantaneous-SNR) error probabilities over AWGN.
//!
//! Exact references, exponential-sum and bound-combination approximations,
//! and the piecewise two-exponential fit of the bound mixing weight. All
//! functions are pure over immutable inputs.

mod dqpsk;
mod fit;
mod mpsk;

pub use dqpsk::{
    chi_exact, chi_fitted, dqpsk_bep_approx, dqpsk_bep_approx_with, dqpsk_bep_exact,
    dqpsk_bep_lower, dqpsk_bep_upper, k_term, marcum_q1_approx, relative_error, ChiFitRow,
    ChiFitTable, CombinedCoefficients,
};
pub use fit::{fit_two_exp, refit_chi, RefitOutcome, TwoExpFit};
pub use mpsk::{mpsk_coefficients, mpsk_sep_approx, mpsk_sep_exact, MpskCoefficients};

use crate::error::{Error, Result};

/// Modulation scheme an error-probability query targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ModulationSpec {
    /// M-ary phase-shift keying; `m` must be a power of two >= 2.
    Mpsk { m: u32 },
    /// Differential QPSK with Gray coding (no order parameter).
    GcDqpsk,
}

impl ModulationSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ModulationSpec::Mpsk { m } => validate_order(*m).map(|_| ()),
            ModulationSpec::GcDqpsk => Ok(()),
        }
    }
}

pub(crate) fn validate_order(m: u32) -> Result<f64> {
    if m >= 2 && m.is_power_of_two() {
        Ok(m as f64)
    } else {
        Err(Error::domain(format!(
            "M-PSK order must be a power of two >= 2, got {m}"
        )))
    }
}

/// Constants of the Gray-coded DQPSK error-probability kernel.
///
/// `a` and `b` are the noncentrality scalings (`a b = sqrt 2` exactly),
/// `delta = sqrt(b/a) > 1` is the bound tightening ratio and
/// `eta = (1 - delta^2) / delta < 0` its combination weight.
#[derive(Debug, Clone, Copy)]
pub struct DqpskConstants {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub eta: f64,
}

impl DqpskConstants {
    pub fn new() -> Self {
        let a = (2.0 - std::f64::consts::SQRT_2).sqrt();
        let b = (2.0 + std::f64::consts::SQRT_2).sqrt();
        let delta = (b / a).sqrt();
        let eta = (1.0 - delta * delta) / delta;
        DqpskConstants { a, b, delta, eta }
    }
}

impl Default for DqpskConstants {
    fn default() -> Self {
        Self::new()
    }
}
