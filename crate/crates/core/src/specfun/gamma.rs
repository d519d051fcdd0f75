//! Log-gamma and the rising factorial (Pochhammer symbol).

#![allow(clippy::excessive_precision)] // coefficient tables keep their published digits

use crate::error::{Error, Result};

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// Lanczos (g = 7, n = 9), the widely used GSL coefficient set.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma_lanczos(x: f64) -> f64 {
    // Valid for x >= 0.5.
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Natural log of the Gamma function for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x < 0.5 {
        // Reflection keeps the Lanczos sum on its accurate branch.
        let s = (std::f64::consts::PI * x).sin();
        return Ok(std::f64::consts::PI.ln() - s.ln() - ln_gamma_lanczos(1.0 - x));
    }
    Ok(ln_gamma_lanczos(x))
}

/// `(ln |Gamma(x)|, sign)` for any non-pole real x.
pub(crate) fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if x > 0.0 {
        return Ok((ln_gamma(x)?, 1.0));
    }
    if x == x.floor() {
        return Err(Error::domain(format!("Gamma pole at x = {x}")));
    }
    // Gamma(x) = pi / (sin(pi x) Gamma(1 - x))
    let s = (std::f64::consts::PI * x).sin();
    let ln_abs = std::f64::consts::PI.ln() - s.abs().ln() - ln_gamma(1.0 - x)?;
    Ok((ln_abs, s.signum()))
}

/// Rising factorial `(x)_k = x (x+1) ... (x+k-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k <= 24 || x <= 0.0 {
        let mut p = 1.0;
        for j in 0..k {
            p *= x + j as f64;
        }
        return p;
    }
    // Long positive products go through log space to dodge overflow.
    match ln_pochhammer(x, k) {
        Ok(l) => l.exp(),
        Err(_) => f64::NAN,
    }
}

/// `ln (x)_k` for x > 0.
pub fn ln_pochhammer(x: f64, k: u32) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!(
            "ln_pochhammer requires x > 0, got {x}"
        )));
    }
    if k == 0 {
        return Ok(0.0);
    }
    if k <= 24 {
        let mut s = 0.0;
        for j in 0..k {
            s += (x + j as f64).ln();
        }
        return Ok(s);
    }
    Ok(ln_gamma(x + k as f64)? - ln_gamma(x)?)
}
