//! Averaged M-PSK symbol error probability: closed form and high-SNR
//! asymptote.

use crate::awgn::mpsk_coefficients;
use crate::error::{Error, Result};
use crate::fading::{derived_constants, KappaMuShadowedParams};

/// `ln` of the closed-form averaged SEP,
/// `lambda sum_l A_l (nu + B_l)^-mu (1 - omega/(nu + B_l))^-m`.
///
/// Averaging the exponential-sum SEP against the SNR density integrates
/// term by term in closed form, so the only approximation inherited here is
/// the conditional-SEP fit itself.
pub fn asep_mpsk_closed_ln(p: &KappaMuShadowedParams, m_order: u32) -> Result<f64> {
    let coef = mpsk_coefficients(m_order)?;
    let k = derived_constants(p)?;
    let mut sum = 0.0f64;
    for (&a, &b) in coef.a.iter().zip(coef.b.iter()) {
        if a == 0.0 {
            continue;
        }
        let base = k.nu + b;
        let shadow_ratio = k.omega / base;
        if !(shadow_ratio < 1.0) {
            return Err(Error::domain(format!(
                "non-positive power base: omega {} >= nu + B {}",
                k.omega, base
            )));
        }
        // a (nu+B)^-mu (1 - omega/(nu+B))^-m, in logs against huge mu, m.
        let ln_term = a.ln() - p.mu * base.ln() - p.m * (-shadow_ratio).ln_1p();
        sum += ln_term.exp();
    }
    Ok(k.ln_lambda + sum.ln())
}

/// Closed-form averaged SEP.
pub fn asep_mpsk_closed(p: &KappaMuShadowedParams, m_order: u32) -> Result<f64> {
    Ok(asep_mpsk_closed_ln(p, m_order)?.exp())
}

/// High-SNR asymptote `lambda sum_l A_l B_l^-mu`; all mean-SNR dependence
/// rides on `lambda ~ gamma_bar^-mu`.
pub fn asep_mpsk_asymptotic(p: &KappaMuShadowedParams, m_order: u32) -> Result<f64> {
    let coef = mpsk_coefficients(m_order)?;
    let k = derived_constants(p)?;
    let mut sum = 0.0f64;
    for (&a, &b) in coef.a.iter().zip(coef.b.iter()) {
        if a == 0.0 {
            continue;
        }
        sum += (a.ln() - p.mu * b.ln()).exp();
    }
    Ok((k.ln_lambda + sum.ln()).exp())
}
