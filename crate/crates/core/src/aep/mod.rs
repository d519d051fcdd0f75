//! Fading-averaged error probabilities: closed-form series, high-SNR
//! asymptotics, truncation-error bounds, and independent quadrature /
//! Monte-Carlo oracles.

mod diversity;
mod dqpsk;
mod mpsk;
mod oracle;

pub use diversity::{diversity_order, DiversityPoint};
pub use dqpsk::{
    abep_dqpsk_asymptotic, abep_dqpsk_closed, abep_dqpsk_closed_ln, abep_dqpsk_terms,
    truncation_bound, TruncationBoundVariant,
};
pub use mpsk::{asep_mpsk_asymptotic, asep_mpsk_closed, asep_mpsk_closed_ln};
pub use oracle::{aep_monte_carlo, aep_quadrature_oracle, EpKind, McEstimate};

use crate::error::{Error, Result};

/// Truncation control for the averaged-BEP series.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SeriesControl {
    /// Hard cap on the number of summed terms (indices `k < max_terms`).
    pub max_terms: usize,
    /// Early-stop threshold relative to the running partial sum.
    pub rel_tol: f64,
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::domain("max_terms must be >= 1"));
        }
        if !(rel_tol > 0.0) {
            return Err(Error::domain("rel_tol must be > 0"));
        }
        Ok(SeriesControl { max_terms, rel_tol })
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 80,
            rel_tol: 1e-12,
        }
    }
}

/// A converged averaged error probability with bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct AepResult {
    pub value: f64,
    /// Highest series index actually summed, plus one.
    pub terms_used: usize,
    /// Closed-form bound on the discarded tail, when computable.
    pub truncation_bound: Option<f64>,
}
