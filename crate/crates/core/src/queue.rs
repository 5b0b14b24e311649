//! Make-to-stock queue analytics.
//!
//! Outstanding replenishment orders `N` follow the M/M/1 law
//! `P(N = j) = (1 - rho) rho^j`. The continuous approximation replaces it with
//! an exponential law of rate `nu = (1 - rho) / rho`, which gives closed forms
//! for the expected stored energy `E[(s - N)^+]` and the expected backlog
//! `E[(N - s)^+]` at base-stock level `s`.

use crate::error::{require, Result};

/// Expected stored energy `s - (1 - e^{-nu s}) / nu` under the exponential law.
///
/// Requires `s >= 0` and `nu > 0`; the result lies in `[0, s]`.
pub fn mean_inventory(s: f64, nu: f64) -> f64 {
    debug_assert!(s >= 0.0 && nu > 0.0);
    (s + (-nu * s).exp_m1() / nu).max(0.0)
}

/// Expected backlogged connections `e^{-nu s} / nu` under the exponential law.
pub fn mean_backlog(s: f64, nu: f64) -> f64 {
    debug_assert!(s >= 0.0 && nu > 0.0);
    (-nu * s).exp() / nu
}

/// Exact M/M/1 backlog `sum_{j>s} (j - s)(1 - rho) rho^j = rho^{s+1} / (1 - rho)`.
pub fn exact_backlog_discrete(s: u32, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(rho.powi(s as i32 + 1) / (1.0 - rho))
}

/// Relative error of the continuous backlog against the exact geometric one,
/// using `nu = (1 - rho) / rho`.
pub fn approximation_error(s: u32, rho: f64) -> Result<f64> {
    let exact = exact_backlog_discrete(s, rho)?;
    let approx = mean_backlog(s as f64, nu_from_rho(rho));
    Ok((approx - exact).abs() / exact)
}

pub fn nu_from_rho(rho: f64) -> f64 {
    (1.0 - rho) / rho
}

/// M/M/1 mean number in system `rho / (1 - rho)`.
pub fn mm1_mean_outstanding(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(rho / (1.0 - rho))
}

/// Geometric stationary pmf `(1 - rho) rho^j`.
pub fn geometric_pmf(j: usize, rho: f64) -> f64 {
    (1.0 - rho) * rho.powi(j as i32)
}

/// Variability factor `(ca2 + cs2) / 2` from squared coefficients of variation.
pub fn kappa(ca2: f64, cs2: f64) -> f64 {
    0.5 * (ca2 + cs2)
}

/// Heavy-traffic mean outstanding orders `kappa * rho / (1 - rho)`.
pub fn heavy_traffic_mean_outstanding(rho: f64, ca2: f64, cs2: f64) -> Result<f64> {
    Ok(kappa(ca2, cs2) * mm1_mean_outstanding(rho)?)
}

fn check_rho(rho: f64) -> Result<()> {
    require(rho > 0.0 && rho < 1.0, "rho", rho, "load factor must lie in (0, 1)")
}
