//! Exponentially scaled modified Bessel functions of the first kind.

use crate::error::{Error, Result};

const ASYMPTOTIC_CUTOFF: f64 = 18.0;

fn check_non_negative(name: &str, x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "{name} requires finite x >= 0, got {x}"
        )));
    }
    Ok(())
}

/// Power series for I0; all terms positive, no cancellation.
fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > f64::EPSILON * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut k = 1.0;
    while term > f64::EPSILON * sum {
        term *= q / (k * (k + 1.0));
        sum += term;
        k += 1.0;
    }
    sum
}

/// Large-argument expansion of `e^-x I_v(x)`, with `mu = 4 v^2`.
///
/// The series is asymptotic; summation stops at the smallest term. Above the
/// cutoff the truncation error is far below f64 resolution.
fn iv_scaled_asymptotic(mu: f64, x: f64) -> f64 {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = term * (odd * odd - mu) / (8.0 * k * x);
        if next.abs() >= term.abs() || next.abs() < f64::EPSILON * sum.abs() {
            sum += next;
            break;
        }
        term = next;
        sum += term;
        k += 1.0;
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// `e^-x I_0(x)` for x >= 0.
pub fn bessel_i0_scaled(x: f64) -> Result<f64> {
    check_non_negative("bessel_i0_scaled", x)?;
    if x < ASYMPTOTIC_CUTOFF {
        Ok((-x).exp() * i0_series(x))
    } else {
        Ok(iv_scaled_asymptotic(0.0, x))
    }
}

/// `e^-x I_1(x)` for x >= 0.
pub fn bessel_i1_scaled(x: f64) -> Result<f64> {
    check_non_negative("bessel_i1_scaled", x)?;
    if x < ASYMPTOTIC_CUTOFF {
        Ok((-x).exp() * i1_series(x))
    } else {
        Ok(iv_scaled_asymptotic(4.0, x))
    }
}

/// `I_{1/2}(x) = 2 sinh(x) / sqrt(2 pi x)` for x > 0.
///
/// Overflows to infinity past x ~ 710; callers needing large arguments must
/// compose with [`bessel_i_half_scaled`] instead.
pub fn bessel_i_half(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "bessel_i_half requires finite x > 0, got {x}"
        )));
    }
    Ok(2.0 * x.sinh() / (2.0 * std::f64::consts::PI * x).sqrt())
}

/// `e^-x I_{1/2}(x) = (1 - e^-2x) / sqrt(2 pi x)` for x > 0.
pub fn bessel_i_half_scaled(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!(
            "bessel_i_half_scaled requires finite x > 0, got {x}"
        )));
    }
    Ok(-(-2.0 * x).exp_m1() / (2.0 * std::f64::consts::PI * x).sqrt())
}
