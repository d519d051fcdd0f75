//! Adaptive Gauss-Kronrod quadrature over finite and semi-infinite ranges.

#![allow(clippy::excessive_precision)] // coefficient tables keep their published digits

use super::Tolerance;
use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Standard QK15 constants.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_53,
    0.949_107_912_342_758_524_526_189_684_05,
    0.864_864_423_359_769_072_789_712_788_64,
    0.741_531_185_599_394_439_863_864_773_28,
    0.586_087_235_467_691_130_294_144_838_26,
    0.405_845_151_377_397_166_906_606_412_08,
    0.207_784_955_007_898_467_600_689_403_77,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_059,
    0.063_092_092_629_978_553_290_700_663_189,
    0.104_790_010_322_250_183_839_876_322_542,
    0.140_653_259_715_525_918_745_189_590_51,
    0.169_004_726_639_267_902_826_583_426_599,
    0.190_350_578_064_785_409_913_256_402_421,
    0.204_432_940_075_298_892_414_161_999_235,
    0.209_482_141_084_727_828_012_999_174_892,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679,
    0.279_705_391_489_276_667_901_467_771_424,
    0.381_830_050_505_118_944_950_369_775_489,
    0.417_959_183_673_469_387_755_102_040_816,
];

/// One 15-point Kronrod panel: returns (integral, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut result_gauss = 0.0;
    let mut result_kronrod = f_center * WGK[7];
    let mut res_abs = result_kronrod.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = f_center;
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[j] = f1;
        fv[14 - j] = f2;
        result_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            // Odd Kronrod indices carry the embedded Gauss nodes.
            result_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    result_gauss += WG[3] * f_center;

    let mean = result_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let value = result_kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();

    let mut err = ((result_kronrod - result_gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * 1.0f64.min((200.0 * err / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: &Tolerance) -> Result<f64> {
    let (value, err) = qk15(f, a, b);
    let mut panels = vec![Panel { a, b, value, err }];
    let mut total = value;
    let mut total_err = err;

    while total_err > tol.abs.max(tol.rel * total.abs()) {
        if panels.len() >= tol.max_iter {
            return Err(Error::convergence(
                "integrate_adaptive",
                Some(total),
                Some(total_err),
            ));
        }
        // Split the panel with the largest error estimate.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .unwrap();
        let Panel { a, b, value, err } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // Interval no longer splittable at f64 resolution.
            return Err(Error::convergence(
                "integrate_adaptive",
                Some(total),
                Some(total_err),
            ));
        }
        let (v1, e1) = qk15(f, a, mid);
        let (v2, e2) = qk15(f, mid, b);
        total += v1 + v2 - value;
        total_err += e1 + e2 - err;
        panels.push(Panel {
            a,
            b: mid,
            value: v1,
            err: e1,
        });
        panels.push(Panel {
            a: mid,
            b,
            value: v2,
            err: e2,
        });
    }
    Ok(total)
}

/// Adaptive quadrature of `f` over `[a, b]`, where `b` may be `f64::INFINITY`.
///
/// Semi-infinite ranges are folded onto `[0, 1)` with `t = a + u / (1 - u)`;
/// the Kronrod nodes are interior, so the singular endpoint is never
/// evaluated. Fails with a convergence error (carrying the best estimate and
/// its error bound) if the panel budget `tol.max_iter` is exhausted.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::domain("lower limit must be finite"));
    }
    if b.is_nan() || b < a {
        return Err(Error::domain("upper limit must be >= lower limit"));
    }
    if a == b {
        return Ok(0.0);
    }
    if b.is_infinite() {
        let g = |u: f64| {
            let one_minus = 1.0 - u;
            let t = a + u / one_minus;
            f(t) / (one_minus * one_minus)
        };
        adapt(&g, 0.0, 1.0, tol)
    } else {
        adapt(&f, a, b, tol)
    }
}
