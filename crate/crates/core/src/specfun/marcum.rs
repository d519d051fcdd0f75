//! First-order Marcum Q-function.

use super::gamma::ln_gamma;
use super::Tolerance;
use crate::error::{Error, Result};

/// `Q1(alpha, beta)` via the Poisson mixture of regularised upper incomplete
/// gamma functions:
///
/// `Q1(a, b) = sum_k Pois(k; a^2/2) * Q(k + 1, b^2/2)`
///
/// Both weight sequences are evaluated in log space term by term, so the
/// routine survives arguments whose individual factors underflow. Summation
/// stops when a geometric bound on the remaining Poisson mass drops below
/// the requested relative tolerance (the inner factors are at most one).
pub fn marcum_q1(alpha: f64, beta: f64, tol: &Tolerance) -> Result<f64> {
    if !(alpha >= 0.0) || !(beta >= 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::domain(format!(
            "marcum_q1 requires finite alpha, beta >= 0, got ({alpha}, {beta})"
        )));
    }
    if beta == 0.0 {
        return Ok(1.0);
    }
    let m = 0.5 * alpha * alpha;
    let y = 0.5 * beta * beta;
    if m == 0.0 {
        return Ok((-y).exp());
    }
    let ln_m = m.ln();
    let ln_y = y.ln();

    let mut inner = 0.0f64; // e^-y sum_{j<=k} y^j / j!
    let mut sum = 0.0f64;
    let mut cum_p = 0.0f64;
    for k in 0..tol.max_iter {
        let kf = k as f64;
        let ln_fact = ln_gamma(kf + 1.0).expect("k+1 > 0");
        let p = (-m + kf * ln_m - ln_fact).exp();
        inner += (-y + kf * ln_y - ln_fact).exp();
        sum += p * inner.min(1.0);
        cum_p += p;

        // Remaining Poisson mass. Left of the mode the complement 1 - cum_p
        // is O(1) and safe; right of the mode it cancels to rounding noise,
        // so the geometric domination bound takes over there.
        let kf1 = kf + 1.0;
        let remaining = if kf1 + 1.0 > m {
            let p_next = (-m + kf1 * ln_m - ln_gamma(kf1 + 1.0).expect("k+2 > 0")).exp();
            p_next / (1.0 - m / (kf1 + 1.0))
        } else {
            1.0 - cum_p
        };
        if remaining <= tol.rel * sum + tol.abs {
            return Ok(sum.min(1.0));
        }
    }
    Err(Error::convergence("marcum_q1", Some(sum.min(1.0)), None))
}
