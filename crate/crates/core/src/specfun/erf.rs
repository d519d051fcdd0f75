//! Error function, complementary error function, and the Gaussian Q-function.
//!
//! Rational minimax approximations in three argument ranges (the classic
//! SPECFUN/CALERF splits), giving erfc to a few ulps over the whole range
//! needed here.

#![allow(clippy::excessive_precision)] // coefficient tables keep their published digits

use crate::error::{Error, Result};

const THRESH: f64 = 0.46875;
const INV_SQRT_PI: f64 = 0.564_189_583_547_756_287;

const A: [f64; 5] = [
    3.161_123_743_870_565_6e0,
    1.138_641_541_510_501_56e2,
    3.774_852_376_853_020_21e2,
    3.209_377_589_138_469_47e3,
    1.857_777_061_846_031_53e-1,
];
const B: [f64; 4] = [
    2.360_129_095_234_412_09e1,
    2.440_246_379_344_441_73e2,
    1.282_616_526_077_372_28e3,
    2.844_236_833_439_170_62e3,
];
const C: [f64; 9] = [
    5.641_884_969_886_700_89e-1,
    8.883_149_794_388_375_94e0,
    6.611_919_063_714_162_95e1,
    2.986_351_381_974_001_31e2,
    8.819_522_212_417_690_9e2,
    1.712_047_612_634_070_58e3,
    2.051_078_377_826_071_47e3,
    1.230_339_354_797_997_25e3,
    2.153_115_354_744_038_46e-8,
];
const D: [f64; 8] = [
    1.574_492_611_070_983_47e1,
    1.176_939_508_913_124_99e2,
    5.371_811_018_620_098_58e2,
    1.621_389_574_566_690_19e3,
    3.290_799_235_733_459_63e3,
    4.362_619_090_143_247_16e3,
    3.439_367_674_143_721_64e3,
    1.230_339_354_803_749_42e3,
];
const P: [f64; 6] = [
    3.053_266_349_612_323_44e-1,
    3.603_448_999_498_044_39e-1,
    1.257_817_261_112_292_46e-1,
    1.608_378_514_874_227_66e-2,
    6.587_491_615_298_378_03e-4,
    1.631_538_713_730_209_78e-2,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822_42e0,
    1.872_952_849_923_460_47e0,
    5.279_051_029_514_284_12e-1,
    6.051_834_131_244_131_91e-2,
    2.335_204_976_268_691_85e-3,
];

/// erf on the central interval |x| <= 0.46875.
fn erf_small(x: f64) -> f64 {
    let ysq = x * x;
    let mut xnum = A[4] * ysq;
    let mut xden = ysq;
    for i in 0..3 {
        xnum = (xnum + A[i]) * ysq;
        xden = (xden + B[i]) * ysq;
    }
    x * (xnum + A[3]) / (xden + B[3])
}

/// `exp(-y^2)` split so that `y^2` is formed from an exactly representable
/// head; removes the argument-squaring rounding from the exponential.
fn exp_neg_ysq(y: f64) -> f64 {
    let hi = (y * 16.0).trunc() / 16.0;
    let del = (y - hi) * (y + hi);
    (-hi * hi).exp() * (-del).exp()
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    let y = x.abs();
    let result = if y <= THRESH {
        return 1.0 - erf_small(x);
    } else if y <= 4.0 {
        let mut xnum = C[8] * y;
        let mut xden = y;
        for i in 0..7 {
            xnum = (xnum + C[i]) * y;
            xden = (xden + D[i]) * y;
        }
        exp_neg_ysq(y) * (xnum + C[7]) / (xden + D[7])
    } else if y < 26.6 {
        let ysq = 1.0 / (y * y);
        let mut xnum = P[5] * ysq;
        let mut xden = ysq;
        for i in 0..4 {
            xnum = (xnum + P[i]) * ysq;
            xden = (xden + Q[i]) * ysq;
        }
        let r = ysq * (xnum + P[4]) / (xden + Q[4]);
        exp_neg_ysq(y) * (INV_SQRT_PI - r) / y
    } else {
        0.0
    };
    if x < 0.0 {
        2.0 - result
    } else {
        result
    }
}

/// Error function.
pub fn erf(x: f64) -> f64 {
    if x.abs() <= THRESH {
        erf_small(x)
    } else {
        1.0 - erfc(x)
    }
}

// 1/sqrt(2) = FRAC_1_SQRT_2 + FRAC_1_SQRT_2_LO to beyond double precision.
const FRAC_1_SQRT_2_LO: f64 = 6.268_583_589_525_108_9e-17;
const TWO_INV_SQRT_PI: f64 = 1.128_379_167_095_512_57;

/// Gaussian Q-function `Q(x) = P(N(0,1) > x)`.
///
/// A first-order correction for the rounding of `x / sqrt(2)` keeps the
/// relative error at the few-ulps level out to |x| = 8.
pub fn gauss_q(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("gauss_q requires finite x, got {x}")));
    }
    let a = x * std::f64::consts::FRAC_1_SQRT_2;
    // Exact product residual plus the tail of the 1/sqrt(2) constant.
    let d = x.mul_add(std::f64::consts::FRAC_1_SQRT_2, -a) + x * FRAC_1_SQRT_2_LO;
    let corr = d * TWO_INV_SQRT_PI * (-a * a).exp();
    Ok(0.5 * (erfc(a) - corr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{integrate_adaptive, Tolerance};
    use approx::assert_relative_eq;

    #[test]
    fn gauss_q_at_zero_is_half() {
        assert_eq!(gauss_q(0.0).unwrap(), 0.5);
    }

    #[test]
    fn gauss_q_reflection_identity() {
        let x = 1.3;
        assert_relative_eq!(
            gauss_q(x).unwrap(),
            1.0 - gauss_q(-x).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn gauss_q_matches_circular_form_quadrature() {
        // Q(x) = (1/pi) Int_0^{pi/2} exp(-x^2 / (2 sin^2 t)) dt for x >= 0.
        let tol = Tolerance::default();
        let x = 1.0f64;
        let oracle = integrate_adaptive(
            |t: f64| {
                let s = t.sin();
                (-x * x / (2.0 * s * s)).exp()
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            &tol,
        )
        .unwrap()
            / std::f64::consts::PI;
        assert_relative_eq!(gauss_q(x).unwrap(), oracle, max_relative = 1e-12);
    }

    #[test]
    fn gauss_q_reference_values() {
        // 30-digit reference values for Q(x) = erfc(x/sqrt 2)/2.
        let cases = [
            (0.5, 3.085_375_387_259_868_963_622_953_894e-1),
            (1.0, 1.586_552_539_314_570_514_147_674_544e-1),
            (2.0, 2.275_013_194_817_920_720_028_263_717e-2),
            (3.5, 2.326_290_790_355_250_363_499_258_867e-4),
            (5.0, 2.866_515_718_791_939_116_737_523_329e-7),
            (6.5, 4.016_000_583_859_117_808_346_145_422e-11),
            (8.0, 6.220_960_574_271_784_123_515_995_173e-16),
            (-1.5, 9.331_927_987_311_419_339_955_059_590e-1),
            (-4.0, 9.999_683_287_581_668_800_787_462_292e-1),
            (-8.0, 9.999_999_999_999_993_779_039_425_728e-1),
        ];
        for (x, q) in cases {
            assert_relative_eq!(gauss_q(x).unwrap(), q, max_relative = 1e-14);
        }
    }

    #[test]
    fn gauss_q_strictly_decreasing_and_symmetric_on_grid() {
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let x = -6.0 + 12.0 * i as f64 / 100.0;
            let q = gauss_q(x).unwrap();
            assert!(q < prev, "Q not strictly decreasing at x = {x}");
            prev = q;
            let sum = q + gauss_q(-x).unwrap();
            assert!(
                (sum - 1.0).abs() <= 1e-14,
                "reflection defect {} at {x}",
                sum - 1.0
            );
        }
    }

    #[test]
    fn gauss_q_rejects_non_finite() {
        assert!(gauss_q(f64::NAN).is_err());
        assert!(gauss_q(f64::INFINITY).is_err());
    }

    #[test]
    fn erfc_spot_values() {
        // erfc(1) to 30 digits.
        assert_relative_eq!(
            erfc(1.0),
            1.572_992_070_502_851_306_587_793_649e-1,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            erfc(-1.0),
            2.0 - 1.572_992_070_502_851_306_587_793_649e-1,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            erf(0.3),
            3.286_267_594_591_274_276_389_140_478e-1,
            max_relative = 1e-14
        );
    }
}
