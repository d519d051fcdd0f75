//! Averaged DQPSK bit error probability: hypergeometric series closed form,
//! high-SNR asymptote, and truncation-error bounds.

use super::{AepResult, SeriesControl};
use crate::awgn::{ChiFitRow, ChiFitTable, CombinedCoefficients, DqpskConstants};
use crate::error::{Error, Result};
use crate::fading::{derived_constants, DerivedConstants, KappaMuShadowedParams};
use crate::specfun::{gauss_2f1, hyp_1f0, ln_gamma, ln_pochhammer, Tolerance};

/// Which fitted mixing-weight row the averaged series uses.
///
/// The averaging integrand is density times conditional BEP, and the BEP
/// decays like `e^{-(2 - sqrt 2) g}`, so the product mass concentrates
/// around the mean of the Gamma envelope `g^{mu-1} e^{-(nu + c) g}` --
/// `g_eff = mu / (nu + 2 - sqrt 2)` -- not around the mean SNR. Selecting
/// the range containing the mean SNR instead drifts to 14-22% error at high
/// SNR, where almost all product mass still sits below the last range edge.
pub(crate) fn coefficient_row(p: &KappaMuShadowedParams) -> ChiFitRow {
    let nu = p.mu * (1.0 + p.kappa) / p.gamma_bar;
    let g_eff = p.mu / (nu + 2.0 - std::f64::consts::SQRT_2);
    *ChiFitTable::baseline().row_for(g_eff)
}

fn f21_tol() -> Tolerance {
    Tolerance {
        rel: 1e-13,
        abs: 1e-300,
        max_iter: 100_000,
    }
}

/// `ln(omega^k)` with the k = 0 case pinned to 0 (omega may be 0 there).
fn ln_omega_pow(omega: f64, k: u32) -> f64 {
    if k == 0 {
        0.0
    } else {
        k as f64 * omega.ln()
    }
}

struct SeriesContext {
    k: DerivedConstants,
    dq: DqpskConstants,
    coef: CombinedCoefficients,
    xi: [f64; 3],
    c_minus: f64,
    c_plus: f64,
}

impl SeriesContext {
    fn new(p: &KappaMuShadowedParams) -> Result<Self> {
        p.validate()?;
        let k = derived_constants(p)?;
        let dq = DqpskConstants::new();
        let row = coefficient_row(p);
        let coef = CombinedCoefficients::from_row(&row);
        let xi = [k.nu + coef.d[0], k.nu + coef.d[1], k.nu + coef.d[2]];
        Ok(SeriesContext {
            k,
            dq,
            coef,
            xi,
            c_minus: dq.b - dq.a,
            c_plus: dq.b + dq.a,
        })
    }

    /// One k-index of the Gaussian-tail integral series (without the
    /// lambda/Gamma(mu) prefactor):
    /// `phi_k 2F1(1/2, mu+k; mu+k+1; 2xi/(c^2+2xi)) / (2 sqrt pi)`.
    fn m1_term(&self, p: &KappaMuShadowedParams, c: f64, xi: f64, kk: u32) -> Result<f64> {
        let mu_k = p.mu + kk as f64;
        let a2 = c * c + 2.0 * xi;
        let ln_phi =
            ln_pochhammer(p.m, kk)? - ln_pochhammer(p.mu, kk)? - ln_gamma(kk as f64 + 1.0)?
                + ln_omega_pow(self.k.omega, kk)
                + mu_k * (2.0 / a2).ln()
                + ln_gamma(mu_k + 0.5)?
                - mu_k.ln();
        let f21 = gauss_2f1(0.5, mu_k, mu_k + 1.0, 2.0 * xi / a2, &f21_tol())?;
        Ok((ln_phi.exp()) * f21 / (2.0 * std::f64::consts::PI.sqrt()))
    }

    /// One k-index of the Bessel integral series:
    /// `psi_k 2F1((mu+k)/2, (mu+k+1)/2; 1; 2/(2+xi)^2)`.
    fn m2_term(&self, p: &KappaMuShadowedParams, xi: f64, kk: u32) -> Result<f64> {
        let mu_k = p.mu + kk as f64;
        let ln_psi = ln_gamma(p.mu)? + ln_pochhammer(p.m, kk)? - ln_gamma(kk as f64 + 1.0)?
            + ln_omega_pow(self.k.omega, kk)
            - mu_k * (2.0 + xi).ln();
        let g = gauss_2f1(
            0.5 * mu_k,
            0.5 * (mu_k + 1.0),
            1.0,
            2.0 / ((2.0 + xi) * (2.0 + xi)),
            &f21_tol(),
        )?;
        Ok(ln_psi.exp() * g)
    }

    /// Combined k-th contribution across the three coefficient columns.
    fn contribution(&self, p: &KappaMuShadowedParams, kk: u32) -> Result<f64> {
        let mut sum = 0.0;
        for i in 0..3 {
            let xi = self.xi[i];
            let m1 =
                self.m1_term(p, self.c_minus, xi, kk)? - self.m1_term(p, self.c_plus, xi, kk)?;
            let m2 = self.m2_term(p, xi, kk)?;
            sum += self.dq.eta * self.coef.c[i] * m1 + self.coef.f[i] * m2;
        }
        Ok(sum)
    }
}

/// Inner series contributions (prefactor excluded), the context, and whether
/// the early-stop criterion was reached inside the term budget.
fn inner_series(
    p: &KappaMuShadowedParams,
    ctrl: &SeriesControl,
) -> Result<(Vec<f64>, SeriesContext, bool)> {
    let ctx = SeriesContext::new(p)?;
    let mut terms = Vec::new();
    let mut partial = 0.0f64;
    let mut small_run = 0;
    let mut converged = false;
    for kk in 0..ctrl.max_terms {
        let t = ctx.contribution(p, kk as u32)?;
        partial += t;
        terms.push(t);
        if ctx.k.omega == 0.0 {
            converged = true; // the k-series terminates with the dominant component
            break;
        }
        if t.abs() <= ctrl.rel_tol * partial.abs() {
            small_run += 1;
            if small_run >= 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok((terms, ctx, converged))
}

/// `ln` of the closed-form averaged DQPSK BEP.
pub fn abep_dqpsk_closed_ln(p: &KappaMuShadowedParams, ctrl: &SeriesControl) -> Result<f64> {
    let (terms, ctx, _) = inner_series(p, ctrl)?;
    let sum: f64 = terms.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::convergence("abep_dqpsk_closed", Some(sum), None));
    }
    Ok(ctx.k.ln_lambda - ln_gamma(p.mu)? + sum.ln())
}

/// Closed-form averaged DQPSK BEP with truncation bookkeeping.
///
/// If the series neither meets `ctrl.rel_tol` within `ctrl.max_terms` terms
/// nor has a tail bound below that tolerance, a convergence error carrying
/// the partial value and the bound is returned.
pub fn abep_dqpsk_closed(p: &KappaMuShadowedParams, ctrl: &SeriesControl) -> Result<AepResult> {
    let (terms, ctx, converged) = inner_series(p, ctrl)?;
    let sum: f64 = terms.iter().sum();
    if !(sum > 0.0) {
        return Err(Error::convergence("abep_dqpsk_closed", Some(sum), None));
    }
    let value = (ctx.k.ln_lambda - ln_gamma(p.mu)? + sum.ln()).exp();
    let bound = truncation_bound(p, terms.len(), TruncationBoundVariant::default()).ok();
    if !converged && bound.is_none_or(|b| b > ctrl.rel_tol * value) {
        return Err(Error::convergence("abep_dqpsk_closed", Some(value), bound));
    }
    Ok(AepResult {
        value,
        terms_used: terms.len(),
        truncation_bound: bound,
    })
}

/// Physical per-k contributions of the truncated closed form (they sum to
/// the truncated value).
pub fn abep_dqpsk_terms(p: &KappaMuShadowedParams, ctrl: &SeriesControl) -> Result<Vec<f64>> {
    let (terms, ctx, _) = inner_series(p, ctrl)?;
    let pref = (ctx.k.ln_lambda - ln_gamma(p.mu)?).exp();
    Ok(terms.into_iter().map(|t| pref * t).collect())
}

/// High-SNR asymptote: k = 0 terms with the distribution constants pinned
/// at their limits (`xi_i -> D_i`).
pub fn abep_dqpsk_asymptotic(p: &KappaMuShadowedParams) -> Result<f64> {
    p.validate()?;
    let k = derived_constants(p)?;
    let dq = DqpskConstants::new();
    let coef = CombinedCoefficients::from_row(&coefficient_row(p));
    let c_pm = [dq.b - dq.a, dq.b + dq.a];
    let mut sum = 0.0;
    for i in 0..3 {
        let d = coef.d[i];
        let mut m1 = [0.0f64; 2];
        for (slot, &c) in c_pm.iter().enumerate() {
            let a2 = c * c + 2.0 * d;
            let z = 2.0 * d / a2;
            debug_assert!(z < 1.0);
            let ln_delta = p.mu * (2.0 / a2).ln() + ln_gamma(p.mu + 0.5)?
                - p.mu.ln()
                - (2.0 * std::f64::consts::PI.sqrt()).ln();
            m1[slot] = ln_delta.exp() * gauss_2f1(0.5, p.mu, p.mu + 1.0, z, &f21_tol())?;
        }
        let m2 = (ln_gamma(p.mu)? - p.mu * (2.0 + d).ln()).exp()
            * gauss_2f1(
                0.5 * p.mu,
                0.5 * (p.mu + 1.0),
                1.0,
                2.0 / ((2.0 + d) * (2.0 + d)),
                &f21_tol(),
            )?;
        sum += dq.eta * coef.c[i] * (m1[0] - m1[1]) + coef.f[i] * m2;
    }
    if !(sum > 0.0) {
        return Err(Error::domain(format!(
            "asymptotic coefficient combination lost positivity: {sum}"
        )));
    }
    Ok((k.ln_lambda - ln_gamma(p.mu)? + sum.ln()).exp())
}

/// Tail-weight variant of the truncation bound.
///
/// `PochhammerWeight` carries `(m)_L / L!` like the series terms themselves;
/// `InverseGammaWeight` keeps the reciprocal `Gamma(m+L) Gamma(m)` weighting
/// as printed in some derivations, which shrinks faster than the true tail
/// and fails the bound-validity check already at m = 1. The Pochhammer form
/// is therefore the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TruncationBoundVariant {
    #[default]
    PochhammerWeight,
    InverseGammaWeight,
}

/// Closed-form upper bound on the absolute error of truncating the averaged
/// BEP series to indices `k < truncated_at`.
pub fn truncation_bound(
    p: &KappaMuShadowedParams,
    truncated_at: usize,
    variant: TruncationBoundVariant,
) -> Result<f64> {
    p.validate()?;
    if truncated_at == 0 {
        return Err(Error::domain("truncation length must be >= 1"));
    }
    let big_l = truncated_at as u32;
    let lf = big_l as f64;
    let k = derived_constants(p)?;
    if k.omega == 0.0 {
        return Ok(0.0); // the series terminates at k = 0
    }
    let dq = DqpskConstants::new();
    let coef = CombinedCoefficients::from_row(&coefficient_row(p));
    let c_pm = [dq.b - dq.a, dq.b + dq.a];
    let mut sum = 0.0;
    for i in 0..3 {
        let xi = k.nu + coef.d[i];

        // Gaussian-tail route, both sign variants.
        let mut eps1 = 0.0;
        for &c in &c_pm {
            let a2 = c * c + 2.0 * xi;
            let x = 2.0 * k.omega / a2;
            if !(x < 1.0) {
                return Err(Error::domain(format!(
                    "truncation bound infeasible: 2 omega = {} >= {}",
                    2.0 * k.omega,
                    a2
                )));
            }
            let ln_theta = p.mu * (2.0 / a2).ln() + ln_gamma(p.mu)? + ln_pochhammer(p.m, big_l)?
                - ln_gamma(lf + 1.0)?
                + lf * x.ln();
            let envelope = hyp_1f0(0.5, 2.0 * xi / a2)?;
            let geom = gauss_2f1(1.0, p.m + lf, lf + 1.0, x, &f21_tol())?;
            eps1 += ln_theta.exp() / (2.0 * std::f64::consts::PI.sqrt()) * envelope * geom;
        }

        // Bessel route.
        let x2 = k.omega / (2.0 + xi);
        if !(x2 < 1.0) {
            return Err(Error::domain(format!(
                "truncation bound infeasible: omega = {} >= {}",
                k.omega,
                2.0 + xi
            )));
        }
        let ln_lambda_l = match variant {
            TruncationBoundVariant::PochhammerWeight => {
                ln_gamma(p.mu)? + ln_pochhammer(p.m, big_l)? - ln_gamma(lf + 1.0)?
                    + lf * k.omega.ln()
                    - (p.mu + lf) * (2.0 + xi).ln()
            }
            TruncationBoundVariant::InverseGammaWeight => {
                ln_gamma(p.mu)? + lf * k.omega.ln()
                    - ln_gamma(lf + 1.0)?
                    - ln_gamma(p.m + lf)?
                    - ln_gamma(p.m)?
                    - (p.mu + lf) * (2.0 + xi).ln()
            }
        };
        let grow = gauss_2f1(
            0.5 * (p.mu + lf),
            0.5 * (p.mu + lf + 1.0),
            1.0,
            2.0 / ((2.0 + xi) * (2.0 + xi)),
            &f21_tol(),
        )?;
        let geom2 = gauss_2f1(1.0, p.m + lf, lf + 1.0, x2, &f21_tol())?;
        let eps2 = ln_lambda_l.exp() * grow * geom2;

        sum += coef.c[i].abs() * eps1 + (coef.f[i] / dq.eta).abs() * eps2;
    }
    Ok((k.ln_lambda + dq.eta.abs().ln() - ln_gamma(p.mu)?).exp() * sum)
}
