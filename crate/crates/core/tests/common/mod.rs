//! Shared helpers for the integration test suites.

#![allow(dead_code)]

use aep_core::fading::{cdf_numeric, pdf, KappaMuShadowedParams};
use aep_core::specfun::{integrate_adaptive, Tolerance};

pub fn db(x: f64) -> f64 {
    10f64.powf(x / 10.0)
}

/// Kolmogorov-Smirnov distance between an empirical sample and the model
/// CDF, with the CDF values accumulated by quadrature between consecutive
/// order statistics (independent of any sampler-side tabulation).
pub fn ks_against_cdf(samples: &mut [f64], p: &KappaMuShadowedParams) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let seg_tol = Tolerance {
        rel: 1e-7,
        abs: 1e-13,
        max_iter: 500,
    };
    let mut f = cdf_numeric(p, samples[0], &Tolerance::default()).expect("cdf at first sample");
    let mut worst = 0.0f64;
    for (i, pair) in samples.windows(2).enumerate() {
        let emp_lo = i as f64 / n;
        let emp_hi = (i + 1) as f64 / n;
        worst = worst.max((f - emp_lo).abs()).max((f - emp_hi).abs());
        if pair[1] > pair[0] {
            f += integrate_adaptive(|g| pdf(p, g).unwrap_or(0.0), pair[0], pair[1], &seg_tol)
                .expect("cdf increment");
            f = f.min(1.0);
        }
    }
    let last = (samples.len() - 1) as f64;
    worst.max((f - last / n).abs()).max(1.0 - f)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn two_sample_ks(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut worst = 0.0f64;
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        worst = worst.max((i as f64 / na - j as f64 / nb).abs());
    }
    worst
}
