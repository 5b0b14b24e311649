use super::GameInstance;
use crate::error::{Error, Result};
use crate::params::{StrategyPair, DOMAIN_EPS};
use crate::queue::{mean_backlog, mean_inventory};
use crate::solve::bisect;

const BEST_RESPONSE_TOL: f64 = 1e-10;

/// BS cost: stored energy plus its `alpha` share of the backlog cost.
pub fn cost_bs(g: &GameInstance, x: StrategyPair) -> Result<f64> {
    g.check_bs_domain(x)?;
    Ok(mean_inventory(x.s, x.nu) + g.alpha() * g.b() * mean_backlog(x.s, x.nu))
}

/// RPS cost: its backlog share plus the load-factor increase `cs (nu + 1) / (phi - nu)`.
pub fn cost_rps(g: &GameInstance, x: StrategyPair) -> Result<f64> {
    g.check_domain(x)?;
    let backlog = (1.0 - g.alpha()) * g.b() * mean_backlog(x.s, x.nu);
    Ok(backlog + g.cs() * (x.nu + 1.0) / (g.phi() - x.nu))
}

/// `f = sqrt(((1 - alpha) b (1 + ln(1 + alpha b))) / (cs (1 + alpha b)))`.
pub fn auxiliary_f(g: &GameInstance) -> Result<f64> {
    if g.cs() <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "cs_n",
            value: g.cs(),
            reason: "auxiliary function needs a positive supply cost",
        });
    }
    let ab = g.alpha() * g.b();
    let rps_share = g.b() - ab;
    Ok(((rps_share + rps_share * ab.ln_1p()) / (g.cs() * (1.0 + ab))).sqrt())
}

/// BS reaction curve: `s*(nu) = ln(1 + alpha b) / nu`.
pub fn bs_best_response(g: &GameInstance, nu: f64) -> Result<f64> {
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(Error::Domain { s: f64::NAN, nu, reason: "nu must be positive" });
    }
    Ok((g.alpha() * g.b()).ln_1p() / nu)
}

/// RPS reaction curve: the unique root in `(0, phi)` of
/// `(1 - alpha) b e^{-nu s} (nu s + 1) / nu^2 = cs (1 + phi) / (phi - nu)^2`.
///
/// The condition is compared in log form, which is strictly decreasing in
/// `nu` over the bracket and immune to overflow at either end.
pub fn rps_best_response(g: &GameInstance, s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::Domain { s, nu: f64::NAN, reason: "s must be finite and non-negative" });
    }
    let backlog_share = (1.0 - g.alpha()) * g.b();
    if backlog_share <= 0.0 {
        return Err(Error::NoInteriorResponse("RPS bears no backlog cost; its cost increases in nu"));
    }
    if g.cs() <= 0.0 {
        return Err(Error::NoInteriorResponse("zero supply cost; RPS cost decreases up to phi"));
    }
    let phi = g.phi();
    let ln_lhs0 = backlog_share.ln();
    let ln_rhs0 = (g.cs() * (1.0 + phi)).ln();
    let foc = |nu: f64| {
        let lhs = ln_lhs0 - nu * s + (nu * s).ln_1p() - 2.0 * nu.ln();
        let rhs = ln_rhs0 - 2.0 * (phi - nu).ln();
        lhs - rhs
    };
    bisect(foc, DOMAIN_EPS, phi - DOMAIN_EPS, BEST_RESPONSE_TOL)
}

/// Closed-form unique equilibrium:
/// `nu* = f phi / (sqrt(1 + phi) + f)`, `s* = ln(1 + alpha b) / nu*`.
pub fn nash_equilibrium(g: &GameInstance) -> Result<StrategyPair> {
    g.require_interior_game()?;
    let f = auxiliary_f(g)?;
    let root = (1.0 + g.phi()).sqrt();
    let nu = f * g.phi() / (root + f);
    let s = (root + f) * (g.alpha() * g.b()).ln_1p() / (f * g.phi());
    Ok(StrategyPair { s, nu })
}

/// Outcome of alternating best responses.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics {
    pub point: StrategyPair,
    pub iterations: usize,
    /// Every iterate, starting with the initial point.
    pub trace: Vec<StrategyPair>,
}

/// Alternates `s <- s*(nu)` and `nu <- nu*(s)` until both coordinates move by
/// less than `tol`.
///
/// Both reaction curves are decreasing, so reversing the order on `nu` makes
/// the game supermodular and the iteration monotone.
pub fn best_response_dynamics(
    g: &GameInstance,
    start: StrategyPair,
    tol: f64,
    max_iter: usize,
) -> Result<Dynamics> {
    g.require_interior_game()?;
    g.check_domain(start)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter { name: "tol", value: tol, reason: "must be positive" });
    }
    let mut current = start;
    let mut trace = vec![start];
    for iteration in 1..=max_iter {
        let s = bs_best_response(g, current.nu)?;
        let nu = rps_best_response(g, s)?;
        let next = StrategyPair { s, nu };
        trace.push(next);
        let step = (next.s - current.s).abs().max((next.nu - current.nu).abs());
        current = next;
        if step < tol {
            return Ok(Dynamics { point: current, iterations: iteration, trace });
        }
    }
    Err(Error::NotConverged { iterations: max_iter, trace })
}
