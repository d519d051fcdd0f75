//! Confluent (1F1) and Gauss (2F1) hypergeometric series, plus the closed
//! binomial form 1F0.

use super::gamma::ln_gamma_signed;
use super::Tolerance;
use crate::error::{Error, Result};

fn is_non_positive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// Stop once three consecutive terms fall below the relative tolerance;
/// a single small term is not proof of convergence when terms alternate.
const CONSECUTIVE_SMALL: u32 = 3;

/// `1F0(a; ; z) = (1 - z)^-a` for 0 <= z < 1.
pub fn hyp_1f0(a: f64, z: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain(format!(
            "hyp_1f0 requires 0 <= z < 1, got {z}"
        )));
    }
    Ok((1.0 - z).powf(-a))
}

/// Kummer confluent hypergeometric function `1F1(a; b; z)`.
///
/// Direct Taylor series for z >= 0; for z < 0 the transformation
/// `1F1(a;b;z) = e^z 1F1(b-a; b; -z)` moves the evaluation onto the
/// cancellation-free positive branch.
pub fn kummer_1f1(a: f64, b: f64, z: f64, tol: &Tolerance) -> Result<f64> {
    if is_non_positive_integer(b) {
        return Err(Error::domain(format!("kummer_1f1 pole: b = {b}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 {
        return Ok(z.exp() * kummer_1f1(b - a, b, -z, tol)?);
    }
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small_run = 0;
    for k in 0..tol.max_iter {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        let next_ratio = ((a + kf + 1.0) * z / ((b + kf + 1.0) * (kf + 2.0))).abs();
        let tail_ok = term == 0.0
            || (next_ratio < 1.0
                && term.abs() * next_ratio / (1.0 - next_ratio) <= tol.rel * sum.abs());
        if tail_ok {
            small_run += 1;
            if small_run >= CONSECUTIVE_SMALL {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::convergence(
        "kummer_1f1",
        Some(sum),
        Some(term.abs()),
    ))
}

/// `ln 1F1(a; b; z)` for a, b > 0 and z >= 0.
///
/// The all-positive series is summed with running renormalisation, so
/// arguments far beyond the overflow point of `e^z` stay representable.
pub fn ln_kummer_1f1(a: f64, b: f64, z: f64, tol: &Tolerance) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(
            "ln_kummer_1f1 requires a > 0 and b > 0".to_string(),
        ));
    }
    if !(z >= 0.0) {
        return Err(Error::domain(format!(
            "ln_kummer_1f1 requires z >= 0, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    const RESCALE: f64 = 1e280;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut log_offset = 0.0f64;
    let mut small_run = 0;
    for k in 0..tol.max_iter {
        let kf = k as f64;
        term *= (a + kf) * z / ((b + kf) * (kf + 1.0));
        sum += term;
        if sum > RESCALE {
            sum /= RESCALE;
            term /= RESCALE;
            log_offset += RESCALE.ln();
        }
        if term <= tol.rel * sum {
            small_run += 1;
            if small_run >= CONSECUTIVE_SMALL {
                return Ok(sum.ln() + log_offset);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::convergence(
        "ln_kummer_1f1",
        Some(sum.ln() + log_offset),
        None,
    ))
}

/// Plain Gauss series; assumes |z| < 1 and converging parameters.
fn gauss_series(a: f64, b: f64, c: f64, z: f64, tol: &Tolerance) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut small_run = 0;
    for k in 0..tol.max_iter {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) * z / ((c + kf) * (kf + 1.0));
        sum += term;
        // Geometric majorant of the remaining tail: the term ratio tends to
        // z from one side, so bound it by the next ratio when that is < 1.
        let next_ratio =
            ((a + kf + 1.0) * (b + kf + 1.0) * z / ((c + kf + 1.0) * (kf + 2.0))).abs();
        let tail_ok = term == 0.0
            || (next_ratio < 1.0
                && term.abs() * next_ratio / (1.0 - next_ratio) <= tol.rel * sum.abs());
        if tail_ok {
            small_run += 1;
            if small_run >= CONSECUTIVE_SMALL {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::convergence("gauss_2f1", Some(sum), Some(term.abs())))
}

/// Gauss hypergeometric function `2F1(a, b; c; z)` for 0 <= z < 1.
///
/// For z above 0.75 the linear z -> 1-z connection formula is applied when
/// `c - a - b` is safely non-integer; otherwise the direct series is used
/// (slower near z = 1, but free of the degenerate-coefficient case).
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64, tol: &Tolerance) -> Result<f64> {
    if is_non_positive_integer(c) {
        return Err(Error::domain(format!("gauss_2f1 pole: c = {c}")));
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::domain(format!(
            "gauss_2f1 requires 0 <= z < 1, got {z}"
        )));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    let s = c - a - b;
    let near_integer = (s - s.round()).abs() < 1e-8;
    if z <= 0.75 || near_integer {
        return gauss_series(a, b, c, z, tol);
    }
    // F(z) = G1 * F(a, b; a+b-c+1; 1-z)
    //      + G2 * (1-z)^s * F(c-a, c-b; s+1; 1-z)
    // A Gamma pole in a denominator kills that branch (1/Gamma -> 0).
    let w = 1.0 - z;
    let (ln_c, sg_c) = ln_gamma_signed(c)?;
    let (ln_s, sg_s) = ln_gamma_signed(s)?;
    let (ln_ms, sg_ms) = ln_gamma_signed(-s)?;
    let first = match (ln_gamma_signed(c - a), ln_gamma_signed(c - b)) {
        (Ok((ln_ca, sg_ca)), Ok((ln_cb, sg_cb))) => {
            let g1 = sg_c * sg_s * sg_ca * sg_cb * (ln_c + ln_s - ln_ca - ln_cb).exp();
            g1 * gauss_series(a, b, a + b - c + 1.0, w, tol)?
        }
        _ => 0.0,
    };
    let second = match (ln_gamma_signed(a), ln_gamma_signed(b)) {
        (Ok((ln_a, sg_a)), Ok((ln_b, sg_b))) => {
            let g2 = sg_c * sg_ms * sg_a * sg_b * (ln_c + ln_ms - ln_a - ln_b).exp();
            g2 * w.powf(s) * gauss_series(c - a, c - b, s + 1.0, w, tol)?
        }
        _ => 0.0,
    };
    Ok(first + second)
}
