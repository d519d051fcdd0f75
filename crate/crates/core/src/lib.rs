// Negated float comparisons (`!(x > 0.0)`) are deliberate NaN-rejecting
// domain guards throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! Error-probability analysis for M-PSK and Gray-coded DQPSK over AWGN and
//! kappa-mu shadowed fading.
//!
//! The crate is organised in four layers:
//!
//! * [`specfun`] — scalar special functions (Gaussian Q, scaled modified
//!   Bessel, Marcum Q1, confluent and Gauss hypergeometric series, log-gamma)
//!   plus a generic adaptive Gauss-Kronrod quadrature engine.
//! * [`awgn`] — conditional (instantaneous-SNR) error probabilities: exact
//!   references, exponential-sum and bound-combination approximations, and
//!   the piecewise two-exponential mixing-weight fit.
//! * [`fading`] — the kappa-mu shadowed SNR distribution: PDF/CDF, classical
//!   model presets, and two interchangeable deterministic samplers.
//! * [`aep`] — fading-averaged error probabilities: closed-form series,
//!   high-SNR asymptotics, truncation-error bounds, and independent
//!   quadrature / Monte-Carlo oracles.

pub mod aep;
pub mod awgn;
pub mod error;
pub mod fading;
pub mod specfun;

pub use error::{Error, Result};
