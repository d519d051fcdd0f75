//! Independent references for the closed forms: direct quadrature of the
//! averaging integral and semi-analytic Monte Carlo.

use super::dqpsk::coefficient_row;
use crate::awgn::{
    dqpsk_bep_approx_with, dqpsk_bep_exact, mpsk_sep_approx, mpsk_sep_exact, ModulationSpec,
};
use crate::error::Result;
use crate::fading::{average_over_snr, sample, KappaMuShadowedParams, McControl, SamplerKind};
use crate::specfun::Tolerance;

/// Which conditional error probability goes under the averaging integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EpKind {
    /// The exact conditional EP (quadrature / Marcum series).
    Exact,
    /// The exponential-sum / bound-combination approximant. For DQPSK this
    /// uses the single fitted row selected by the mean SNR, matching the
    /// closed-form series it is the oracle for.
    Approx,
}

fn conditional_ep(
    scheme: ModulationSpec,
    kind: EpKind,
    row: &crate::awgn::ChiFitRow,
    tol: &Tolerance,
    gamma: f64,
) -> f64 {
    match (scheme, kind) {
        (ModulationSpec::Mpsk { m }, EpKind::Exact) => mpsk_sep_exact(m, gamma, tol).unwrap_or(0.0),
        (ModulationSpec::Mpsk { m }, EpKind::Approx) => mpsk_sep_approx(m, gamma).unwrap_or(0.0),
        (ModulationSpec::GcDqpsk, EpKind::Exact) => dqpsk_bep_exact(gamma, tol).unwrap_or(0.0),
        (ModulationSpec::GcDqpsk, EpKind::Approx) => dqpsk_bep_approx_with(gamma, row),
    }
}

/// Average the chosen conditional EP against the SNR density by adaptive
/// quadrature over [0, inf).
///
/// With `EpKind::Exact` the integrand itself is evaluated iteratively, so
/// its small residual error looks like noise to the outer panel estimates;
/// ask for an outer tolerance a couple of digits looser than the inner one.
pub fn aep_quadrature_oracle(
    p: &KappaMuShadowedParams,
    scheme: ModulationSpec,
    kind: EpKind,
    tol: &Tolerance,
) -> Result<f64> {
    scheme.validate()?;
    let row = coefficient_row(p);
    let inner_tol = Tolerance {
        rel: (tol.rel * 1e-2).max(1e-13),
        ..*tol
    };
    average_over_snr(p, tol, |g| {
        conditional_ep(scheme, kind, &row, &inner_tol, g)
    })
}

/// Monte-Carlo mean and standard error.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Semi-analytic Monte Carlo: average the conditional EP over sampled SNRs
/// (no bit-level simulation). Deterministic in `(seed, streams, n_samples)`.
pub fn aep_monte_carlo(
    p: &KappaMuShadowedParams,
    scheme: ModulationSpec,
    kind: EpKind,
    mc: &McControl,
) -> Result<McEstimate> {
    scheme.validate()?;
    let row = coefficient_row(p);
    // The sampler noise floor is ~1/sqrt(n); a 1e-8 conditional-EP tolerance
    // keeps the per-sample evaluation far below it at a fraction of the cost.
    let ep_tol = Tolerance {
        rel: 1e-8,
        abs: 1e-14,
        max_iter: 400,
    };
    let snrs = sample(p, mc, SamplerKind::InverseCdf)?;
    let n = snrs.len() as f64;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, g) in snrs.into_iter().enumerate() {
        let h = conditional_ep(scheme, kind, &row, &ep_tol, g);
        let delta = h - mean;
        mean += delta / (i as f64 + 1.0);
        m2 += delta * (h - mean);
    }
    let var = if n > 1.0 { m2 / (n - 1.0) } else { 0.0 };
    Ok(McEstimate {
        mean,
        std_error: (var / n).sqrt(),
    })
}
