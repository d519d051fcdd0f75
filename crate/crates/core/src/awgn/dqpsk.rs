//! Gray-coded DQPSK bit error probability: exact kernel, lower/upper bounds,
//! and the fitted bound-combination approximation.

use super::DqpskConstants;
use crate::error::{Error, Result};
use crate::specfun::{bessel_i0_scaled, gauss_q, marcum_q1, Tolerance};

/// Below e^-700 the whole kernel is under 1e-300; short-circuit to zero
/// instead of dragging the Marcum series through subnormals.
const EXP_UNDERFLOW: f64 = 700.0;

/// `I0(sqrt(2) g) e^{-2 g}`, assembled from the scaled Bessel so neither
/// factor overflows.
fn i0_damped(gamma: f64) -> f64 {
    let x = std::f64::consts::SQRT_2 * gamma;
    let scaled = bessel_i0_scaled(x).expect("non-negative argument");
    ((std::f64::consts::SQRT_2 - 2.0) * gamma).exp() * scaled
}

fn check_gamma(gamma: f64) -> f64 {
    assert!(
        gamma >= 0.0 && gamma.is_finite(),
        "SNR must be finite and >= 0, got {gamma}"
    );
    gamma
}

/// Difference of two Gaussian tails, `Q((b-a) sqrt g) - Q((b+a) sqrt g)`.
pub fn k_term(gamma: f64) -> f64 {
    let gamma = check_gamma(gamma);
    let c = DqpskConstants::new();
    let root = gamma.sqrt();
    let q1 = gauss_q((c.b - c.a) * root).expect("finite argument");
    let q2 = gauss_q((c.b + c.a) * root).expect("finite argument");
    (q1 - q2).max(0.0)
}

/// Exact DQPSK BEP at SNR-per-bit `gamma`.
pub fn dqpsk_bep_exact(gamma: f64, tol: &Tolerance) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::domain(format!(
            "SNR must be finite and >= 0, got {gamma}"
        )));
    }
    if (2.0 - std::f64::consts::SQRT_2) * gamma > EXP_UNDERFLOW {
        return Ok(0.0);
    }
    let c = DqpskConstants::new();
    let root = gamma.sqrt();
    let q1 = marcum_q1(c.a * root, c.b * root, tol)?;
    Ok(q1 - 0.5 * i0_damped(gamma))
}

/// Lower bound on the DQPSK BEP; may be negative near zero SNR.
pub fn dqpsk_bep_lower(gamma: f64) -> f64 {
    let gamma = check_gamma(gamma);
    let c = DqpskConstants::new();
    c.delta * k_term(gamma) - 0.5 * i0_damped(gamma)
}

/// Upper bound on the DQPSK BEP.
pub fn dqpsk_bep_upper(gamma: f64) -> f64 {
    let gamma = check_gamma(gamma);
    let c = DqpskConstants::new();
    k_term(gamma) / c.delta + 0.5 * i0_damped(gamma)
}

/// One SNR range of the fitted mixing weight.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChiFitRow {
    pub c0: f64,
    pub d0: f64,
    pub c1: f64,
    pub d1: f64,
}

impl ChiFitRow {
    /// `C0 e^{-D0 g} + C1 e^{-D1 g}`.
    pub fn eval(&self, gamma: f64) -> f64 {
        self.c0 * (-self.d0 * gamma).exp() + self.c1 * (-self.d1 * gamma).exp()
    }
}

/// Piecewise two-exponential fit of the mixing weight over SNR ranges.
///
/// `edges` are the interior range boundaries; a boundary value belongs to
/// the range on its right, so with edges `[1, 8]` the SNR 8 falls in the
/// third range. The fit is intentionally left discontinuous at the edges.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ChiFitTable {
    pub edges: Vec<f64>,
    pub rows: Vec<ChiFitRow>,
}

impl ChiFitTable {
    /// The baked-in best-fit table: ranges [0,1), [1,8), [8,inf).
    pub fn baseline() -> Self {
        ChiFitTable {
            edges: vec![1.0, 8.0],
            rows: vec![
                ChiFitRow {
                    c0: 0.1786,
                    d0: 2.903,
                    c1: 0.7564,
                    d1: 0.1307,
                },
                ChiFitRow {
                    c0: 0.3798,
                    d0: 1.895,
                    c1: 0.6183,
                    d1: 7.93e-4,
                },
                ChiFitRow {
                    c0: 0.005206,
                    d0: 0.2764,
                    c1: 0.6146,
                    d1: 5.593e-5,
                },
            ],
        }
    }

    pub fn row_for(&self, gamma: f64) -> &ChiFitRow {
        let idx = self.edges.iter().take_while(|&&e| gamma >= e).count();
        &self.rows[idx]
    }
}

/// Exact bound mixing weight `(H - L) / (U - L)`.
pub fn chi_exact(gamma: f64, tol: &Tolerance) -> Result<f64> {
    let h = dqpsk_bep_exact(gamma, tol)?;
    let lower = dqpsk_bep_lower(gamma);
    let upper = dqpsk_bep_upper(gamma);
    let span = upper - lower;
    if span.abs() < 1e-300 {
        return Err(Error::domain(format!(
            "degenerate bound span at gamma = {gamma}"
        )));
    }
    Ok((h - lower) / span)
}

/// Fitted mixing weight from the range containing `gamma`.
pub fn chi_fitted(gamma: f64, table: &ChiFitTable) -> f64 {
    let gamma = check_gamma(gamma);
    table.row_for(gamma).eval(gamma)
}

/// Approximate DQPSK BEP using the piecewise fitted weight:
/// `chi U + (1 - chi) L`.
pub fn dqpsk_bep_approx(gamma: f64) -> f64 {
    dqpsk_bep_approx_with(gamma, ChiFitTable::baseline().row_for(gamma))
}

/// Same combination with a caller-chosen coefficient row. The averaged
/// closed forms keep one row for the whole SNR integral, and need the
/// conditional BEP evaluated consistently with it.
pub fn dqpsk_bep_approx_with(gamma: f64, row: &ChiFitRow) -> f64 {
    let gamma = check_gamma(gamma);
    let chi = row.eval(gamma);
    let lower = dqpsk_bep_lower(gamma);
    let upper = dqpsk_bep_upper(gamma);
    chi * upper + (1.0 - chi) * lower
}

/// Approximate first-order Marcum Q at the DQPSK operating point,
/// `K (eta chi + delta) + I0(sqrt2 g) e^{-2g} chi`.
pub fn marcum_q1_approx(gamma: f64) -> f64 {
    let gamma = check_gamma(gamma);
    let c = DqpskConstants::new();
    let table = ChiFitTable::baseline();
    let chi = chi_fitted(gamma, &table);
    k_term(gamma) * (c.eta * chi + c.delta) + i0_damped(gamma) * chi
}

/// `|approx - exact| / exact` for exact > 0.
pub fn relative_error(approx: f64, exact: f64) -> Result<f64> {
    if !(exact > 0.0) {
        return Err(Error::domain(format!(
            "relative_error requires exact > 0, got {exact}"
        )));
    }
    Ok((approx - exact).abs() / exact)
}

/// Flattened coefficients of the bound combination,
/// `sum_i [ eta C_i e^{-D_i g} K(g) + F_i e^{-(2+D_i) g} I0(sqrt2 g) ]`.
///
/// The third column closes the combination algebraically:
/// `C_2 = delta^2 / (1 - delta^2)` (so that `eta C_2 = delta`), `D_2 = 0`,
/// `F_2 = -1/2`; the first two columns carry the fitted row.
#[derive(Debug, Clone, Copy)]
pub struct CombinedCoefficients {
    pub c: [f64; 3],
    pub d: [f64; 3],
    pub f: [f64; 3],
}

impl CombinedCoefficients {
    pub fn from_row(row: &ChiFitRow) -> Self {
        let k = DqpskConstants::new();
        let c2 = k.delta * k.delta / (1.0 - k.delta * k.delta);
        CombinedCoefficients {
            c: [row.c0, row.c1, c2],
            d: [row.d0, row.d1, 0.0],
            f: [row.c0, row.c1, -0.5],
        }
    }

    /// Reconstruct the approximate BEP from the flattened form; must agree
    /// with [`dqpsk_bep_approx_with`] to near machine precision.
    pub fn bep(&self, gamma: f64) -> f64 {
        let k = DqpskConstants::new();
        let kt = k_term(gamma);
        let i0 = i0_damped(gamma);
        let mut sum = 0.0;
        for i in 0..3 {
            sum += k.eta * self.c[i] * (-self.d[i] * gamma).exp() * kt
                + self.f[i] * (-self.d[i] * gamma).exp() * i0;
        }
        sum
    }
}
