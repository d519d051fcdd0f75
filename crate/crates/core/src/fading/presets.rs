//! Classical fading models as kappa-mu shadowed parameter templates.

use super::KappaMuShadowedParams;
use crate::error::Result;

/// Stand-in for the unshadowed (m -> inf) limit; the residual model error is
/// O(kappa mu / m) and checked numerically in the tests.
pub const UNSHADOWED_M: f64 = 5.0e4;

/// Classical models recovered by pinning the shape parameters.
///
/// Two Nakagami reductions are provided: the conventional one drives the
/// shadowing out (`m` large), the matched-shadow variant ties `m` to the
/// multipath shape, which is the other published identification for the
/// non-LOS case. Both set `kappa = 0` exactly (`omega = 0` is well defined).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    Rayleigh,
    Rician { k_factor: f64 },
    Nakagami { m_hat: f64 },
    NakagamiMatchedShadow { m_hat: f64 },
    RicianShadowed { k_factor: f64, m: f64 },
    OneSidedGaussian,
}

impl Preset {
    /// Materialise the template at a given mean SNR (linear units).
    pub fn params(&self, gamma_bar: f64) -> Result<KappaMuShadowedParams> {
        match *self {
            Preset::Rayleigh => KappaMuShadowedParams::new(0.0, 1.0, UNSHADOWED_M, gamma_bar),
            Preset::Rician { k_factor } => {
                KappaMuShadowedParams::new(k_factor, 1.0, UNSHADOWED_M, gamma_bar)
            }
            Preset::Nakagami { m_hat } => {
                KappaMuShadowedParams::new(0.0, m_hat, UNSHADOWED_M, gamma_bar)
            }
            Preset::NakagamiMatchedShadow { m_hat } => {
                KappaMuShadowedParams::new(0.0, m_hat, m_hat, gamma_bar)
            }
            Preset::RicianShadowed { k_factor, m } => {
                KappaMuShadowedParams::new(k_factor, 1.0, m, gamma_bar)
            }
            Preset::OneSidedGaussian => {
                KappaMuShadowedParams::new(0.0, 0.5, UNSHADOWED_M, gamma_bar)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fading::pdf;
    use crate::specfun::{bessel_i0_scaled, ln_gamma};
    use approx::assert_relative_eq;

    #[test]
    fn rayleigh_is_exponential() {
        let gamma_bar = 2.5;
        let p = Preset::Rayleigh.params(gamma_bar).unwrap();
        for i in 1..=50 {
            let g = gamma_bar * (0.01 + 0.1 * i as f64);
            let expect = (1.0 / gamma_bar) * (-g / gamma_bar).exp();
            let got = pdf(&p, g).unwrap();
            assert!(
                ((got - expect) / expect).abs() <= 1e-4,
                "Rayleigh preset drift at gamma = {g}"
            );
        }
    }

    #[test]
    fn nakagami_is_gamma_density() {
        let (m_hat, gamma_bar) = (2.0, 4.0);
        for preset in [
            Preset::Nakagami { m_hat },
            Preset::NakagamiMatchedShadow { m_hat },
        ] {
            let p = preset.params(gamma_bar).unwrap();
            for &g in &[0.5f64, 2.0, 6.0, 12.0] {
                let rate: f64 = m_hat / gamma_bar;
                let expect = (m_hat * rate.ln() + (m_hat - 1.0) * g.ln()
                    - rate * g
                    - ln_gamma(m_hat).unwrap())
                .exp();
                assert_relative_eq!(pdf(&p, g).unwrap(), expect, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn rician_matches_rice_power_density() {
        let (k, gamma_bar) = (5.0, 3.0);
        let p = Preset::Rician { k_factor: k }.params(gamma_bar).unwrap();
        for &g in &[0.3, 1.0, 3.0, 8.0] {
            // Rice power density via the scaled Bessel:
            // f(g) = (1+K)/gb * exp(-K - (1+K) g / gb + x) * e^-x I0(x),
            // with x = 2 sqrt(K (1+K) g / gb).
            let x = 2.0 * (k * (1.0 + k) * g / gamma_bar).sqrt();
            let expect = (1.0 + k) / gamma_bar
                * (-k - (1.0 + k) * g / gamma_bar + x).exp()
                * bessel_i0_scaled(x).unwrap();
            let got = pdf(&p, g).unwrap();
            assert!(
                ((got - expect) / expect).abs() <= 1e-3,
                "Rician preset drift at gamma = {g}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn one_sided_gaussian_has_half_cluster() {
        let p = Preset::OneSidedGaussian.params(1.0).unwrap();
        assert_eq!(p.mu, 0.5);
        assert_eq!(p.kappa, 0.0);
    }
}
