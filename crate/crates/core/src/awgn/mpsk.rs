//! M-PSK symbol error probability: exact integral and exponential-sum
//! approximation.

use super::validate_order;
use crate::error::Result;
use crate::specfun::{integrate_adaptive, Tolerance};

/// Coefficients of the seven-exponential SEP approximant for a given order.
///
/// `rho = log2(M) sin^2(pi / M)` carries the constellation geometry; the
/// first four terms come from an exponential fit of the Gaussian Q-function
/// and the last three from a three-panel trapezoidal split of the remaining
/// integral, which is why their weights vanish for M = 2.
#[derive(Debug, Clone, Copy)]
pub struct MpskCoefficients {
    pub rho: f64,
    pub a: [f64; 7],
    pub b: [f64; 7],
}

/// Closed-form coefficient table for order `m`.
pub fn mpsk_coefficients(m: u32) -> Result<MpskCoefficients> {
    let mf = validate_order(m)?;
    let pi = std::f64::consts::PI;
    let rho = mf.log2() * (pi / mf).sin().powi(2);
    let frac = (mf - 2.0) / mf;
    let sec2 = |x: f64| 1.0 / x.cos().powi(2);
    let a = [
        (7.0 * mf - 8.0) / (48.0 * mf),
        0.125,
        0.125,
        0.125,
        frac / 12.0,
        frac / 6.0,
        frac / 6.0,
    ];
    let b = [
        rho,
        2.0 * rho,
        20.0 * rho / 3.0,
        20.0 * rho / 17.0,
        rho * sec2(frac * pi / 2.0),
        rho * sec2(frac * pi / 6.0),
        rho * sec2(frac * pi / 3.0),
    ];
    Ok(MpskCoefficients { rho, a, b })
}

/// Exact M-PSK SEP at SNR-per-bit `gamma`, by adaptive quadrature of the
/// single-integral form. Returns `(M-1)/M` exactly at `gamma = 0`.
pub fn mpsk_sep_exact(m: u32, gamma: f64, tol: &Tolerance) -> Result<f64> {
    let mf = validate_order(m)?;
    let gamma = check_gamma(gamma)?;
    if gamma == 0.0 {
        return Ok((mf - 1.0) / mf);
    }
    let rho = mf.log2() * (std::f64::consts::PI / mf).sin().powi(2);
    let upper = (mf - 1.0) / mf * std::f64::consts::PI;
    let integral = integrate_adaptive(
        |theta: f64| {
            let s = theta.sin();
            if s == 0.0 {
                0.0
            } else {
                (-rho * gamma / (s * s)).exp()
            }
        },
        0.0,
        upper,
        tol,
    )?;
    Ok(integral / std::f64::consts::PI)
}

/// Seven-exponential SEP approximation; strictly decreasing in `gamma`.
pub fn mpsk_sep_approx(m: u32, gamma: f64) -> Result<f64> {
    let coef = mpsk_coefficients(m)?;
    let gamma = check_gamma(gamma)?;
    Ok(coef
        .a
        .iter()
        .zip(coef.b.iter())
        .map(|(&a, &b)| a * (-b * gamma).exp())
        .sum())
}

fn check_gamma(gamma: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(crate::Error::domain(format!(
            "SNR must be finite and >= 0, got {gamma}"
        )));
    }
    Ok(gamma)
}
