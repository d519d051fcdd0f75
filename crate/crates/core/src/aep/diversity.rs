//! Diversity order: how fast the averaged error probability falls with the
//! mean SNR on a log-log scale.

use super::dqpsk::abep_dqpsk_closed_ln;
use super::mpsk::asep_mpsk_closed_ln;
use super::SeriesControl;
use crate::awgn::ModulationSpec;
use crate::error::{Error, Result};
use crate::fading::KappaMuShadowedParams;

/// One grid point of the diversity sweep.
///
/// `ratio` is `-ln P / ln gamma_bar` (the plotted metric, converging like
/// `1/ln gamma_bar`); `slope` is the local log-log derivative from finite
/// differences, which reaches the multipath-cluster count `mu` much sooner
/// and is what the high-SNR claims are checked against.
#[derive(Debug, Clone, Copy)]
pub struct DiversityPoint {
    pub gamma_bar: f64,
    pub ratio: f64,
    pub slope: f64,
}

fn ln_aep(p: &KappaMuShadowedParams, scheme: ModulationSpec) -> Result<f64> {
    let ctrl = SeriesControl::default();
    match scheme {
        ModulationSpec::Mpsk { m } => asep_mpsk_closed_ln(p, m),
        ModulationSpec::GcDqpsk => abep_dqpsk_closed_ln(p, &ctrl),
    }
}

/// Evaluate the closed-form averaged EP over an ascending mean-SNR grid
/// (linear units) and report the diversity metrics per point. Everything is
/// computed in log space, so deep-SNR points that underflow a plain f64
/// probability still produce finite entries.
pub fn diversity_order(
    p: &KappaMuShadowedParams,
    scheme: ModulationSpec,
    gamma_bar_grid: &[f64],
) -> Result<Vec<DiversityPoint>> {
    scheme.validate()?;
    if gamma_bar_grid.len() < 2 {
        return Err(Error::domain("diversity grid needs at least 2 points"));
    }
    if gamma_bar_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("diversity grid must be strictly ascending"));
    }
    let ln_p: Vec<f64> = gamma_bar_grid
        .iter()
        .map(|&gb| ln_aep(&p.with_gamma_bar(gb)?, scheme))
        .collect::<Result<_>>()?;
    let ln_g: Vec<f64> = gamma_bar_grid.iter().map(|g| g.ln()).collect();

    let n = ln_p.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = match i {
            0 => (0, 1),
            _ if i == n - 1 => (n - 2, n - 1),
            _ => (i - 1, i + 1),
        };
        let slope = -(ln_p[hi] - ln_p[lo]) / (ln_g[hi] - ln_g[lo]);
        out.push(DiversityPoint {
            gamma_bar: gamma_bar_grid[i],
            ratio: -ln_p[i] / ln_g[i],
            slope,
        });
    }
    Ok(out)
}
