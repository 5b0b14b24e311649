//! Per-BS demand and cost given a granted supply rate.

use serde::{Deserialize, Serialize};

use super::{BsProfile, Market};
use crate::error::{require, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Demand {
    /// Optimal supply rate `mu_hat`.
    pub mu_hat: f64,
    /// Optimal base-stock level `s_hat`.
    pub s_hat: f64,
    /// Minimized cost when `lambda` connections run on renewable energy.
    pub cost: f64,
}

/// Optimal supply rate and stock when `lambda` of the BS's connections are
/// served from renewables:
/// `mu_hat = sqrt(lambda L / p) + lambda`, `s_hat = sqrt(p lambda L)`,
/// cost `2 sqrt(p lambda L) + (p + P1) lambda + P2 (lambda_bar - lambda)`,
/// with `L = ln(1 + b)`.
pub fn optimal_demand(profile: &BsProfile, market: &Market, lambda: f64) -> Result<Demand> {
    require(market.p > 0.0, "p", market.p, "incentive price must be positive")?;
    require(
        (0.0..=profile.lambda_bar).contains(&lambda),
        "lambda",
        lambda,
        "must lie in [0, lambda_bar]",
    )?;
    let l = profile.b.ln_1p();
    let p = market.p;
    let s_hat = (p * lambda * l).sqrt();
    Ok(Demand {
        mu_hat: (lambda * l / p).sqrt() + lambda,
        s_hat,
        cost: 2.0 * s_hat + (p + market.p1) * lambda + market.p2 * (profile.lambda_bar - lambda),
    })
}

/// Rate at which all-renewable and all-grid operation cost the same:
/// `4 p ln(1 + b) / (P2 - P1 - p)^2`.
pub fn breakeven_lambda(b: f64, market: &Market) -> Result<f64> {
    let margin = market.p2 - market.p1 - market.p;
    if margin <= 0.0 {
        return Err(Error::AllGridRegime { p2: market.p2, threshold: market.p1 + market.p });
    }
    Ok(4.0 * market.p * b.ln_1p() / (margin * margin))
}

/// Supply rate `mu_hat(lambda_hat)` at the break-even rate; grants at or
/// below it are rejected by the take-or-leave rule. Infinite in the all-grid
/// regime.
pub fn breakeven_supply(b: f64, market: &Market) -> f64 {
    match breakeven_lambda(b, market) {
        Ok(lh) => (lh * b.ln_1p() / market.p).sqrt() + lh,
        Err(_) => f64::INFINITY,
    }
}

pub(crate) fn truthful_order(profile: &BsProfile, market: &Market) -> f64 {
    match breakeven_lambda(profile.b, market) {
        Ok(lh) if profile.lambda_bar >= lh => {
            let l = profile.b.ln_1p();
            (profile.lambda_bar * l / market.p).sqrt() + profile.lambda_bar
        }
        _ => 0.0,
    }
}

/// Cost of a BS that received supply rate `a` and re-optimizes its renewable
/// load: `lambda(a) = clamp(a - sqrt(a L / (P2 - P1)), 0, min(lambda_bar, a (1 - 1e-9)))`,
/// cost `p a + P1 lambda + P2 (lambda_bar - lambda) + lambda L / (a - lambda)`.
///
/// Returns `(lambda, cost)`. Zero grant means all-grid.
pub fn post_allocation_cost(profile: &BsProfile, market: &Market, a: f64) -> (f64, f64) {
    let all_grid = market.p2 * profile.lambda_bar;
    if a <= 0.0 {
        return (0.0, all_grid);
    }
    let l = profile.b.ln_1p();
    let spread = market.p2 - market.p1;
    let interior = if spread > 0.0 { a - (a * l / spread).sqrt() } else { 0.0 };
    let lambda = interior.max(0.0).min(profile.lambda_bar.min(a * (1.0 - 1e-9)));
    let stock = if lambda > 0.0 { lambda * l / (a - lambda) } else { 0.0 };
    let cost = market.p * a + market.p1 * lambda + market.p2 * (profile.lambda_bar - lambda) + stock;
    (lambda, cost)
}

/// Cost of a BS that operates on its optimal-supply curve: a grant `a` serves
/// the `lambda` with `mu_hat(lambda) = a`, capped at `lambda_bar`; supply above
/// `mu_hat(lambda_bar)` is paid for but unused.
///
/// This is the concave objective whose minimum over the capacity polytope sits
/// at an extreme point.
pub fn supply_curve_cost(profile: &BsProfile, market: &Market, a: f64) -> f64 {
    if a <= 0.0 {
        return market.p2 * profile.lambda_bar;
    }
    let l = profile.b.ln_1p();
    let k = (l / market.p).sqrt();
    let root = 0.5 * ((k * k + 4.0 * a).sqrt() - k);
    let lambda = root * root;
    let curve = |lambda: f64| {
        2.0 * (market.p * lambda * l).sqrt()
            + (market.p + market.p1) * lambda
            + market.p2 * (profile.lambda_bar - lambda)
    };
    if lambda >= profile.lambda_bar {
        let full = (profile.lambda_bar * l / market.p).sqrt() + profile.lambda_bar;
        curve(profile.lambda_bar) + market.p * (a - full).max(0.0)
    } else {
        curve(lambda)
    }
}

/// How a BS turns a grant into cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum CostModel {
    /// Re-optimizes its renewable load given the grant ([`post_allocation_cost`]).
    #[default]
    Reoptimized,
    /// Stays on the optimal-supply curve ([`supply_curve_cost`]).
    SupplyCurve,
}

pub fn bs_cost(profile: &BsProfile, market: &Market, a: f64, model: CostModel) -> f64 {
    match model {
        CostModel::Reoptimized => post_allocation_cost(profile, market, a).1,
        CostModel::SupplyCurve => supply_curve_cost(profile, market, a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bs(lambda_bar: f64, b: f64) -> BsProfile {
        BsProfile::new(1, lambda_bar, b).unwrap()
    }

    #[test]
    fn optimal_demand_examples() {
        let m = Market::reference();
        let d = optimal_demand(&bs(4.0, 2.0), &m, 4.0).unwrap();
        assert_relative_eq!(d.mu_hat, 5.4823, epsilon = 5e-5);
        assert_relative_eq!(d.s_hat, 2.9646, epsilon = 5e-5);
        let nu_hat = (d.mu_hat - 4.0) / 4.0;
        assert_relative_eq!(d.s_hat * nu_hat, 3f64.ln(), epsilon = 1e-12);

        let d = optimal_demand(&bs(4.0, 2.0), &m, 0.0).unwrap();
        assert_eq!((d.mu_hat, d.s_hat, d.cost), (0.0, 0.0, 40.0));

        let d = optimal_demand(&bs(4.0, 0.0), &m, 3.0).unwrap();
        assert_eq!((d.mu_hat, d.s_hat), (3.0, 0.0));

        assert!(optimal_demand(&bs(4.0, 2.0), &m, 4.5).is_err());
    }

    #[test]
    fn breakeven_examples() {
        let m = Market::reference();
        assert_relative_eq!(breakeven_lambda(2.0, &m).unwrap(), 8.0 * 3f64.ln() / 49.0, epsilon = 1e-15);
        assert_relative_eq!(breakeven_lambda(2.0, &m).unwrap(), 0.17937, epsilon = 5e-6);
        assert_eq!(breakeven_lambda(0.0, &m).unwrap(), 0.0);
        let flat = Market { p2: 3.0, ..m.clone() };
        assert!(matches!(breakeven_lambda(2.0, &flat), Err(Error::AllGridRegime { .. })));
        assert_relative_eq!(breakeven_supply(2.0, &m), 0.4932, epsilon = 1e-4);
        assert_eq!(breakeven_supply(2.0, &flat), f64::INFINITY);
    }

    #[test]
    fn post_allocation_examples() {
        let m = Market::reference();
        let p = bs(4.0, 2.0);
        assert_eq!(post_allocation_cost(&p, &m, 0.0), (0.0, 40.0));

        let a = 2.9654;
        let (lambda, cost) = post_allocation_cost(&p, &m, a);
        let expect_lambda = a - (a * 3f64.ln() / 9.0).sqrt();
        assert_relative_eq!(lambda, expect_lambda, epsilon = 1e-12);
        assert_relative_eq!(lambda, 2.3638, epsilon = 1e-4);
        let by_hand = 2.0 * a + lambda + 10.0 * (4.0 - lambda) + lambda * 3f64.ln() / (a - lambda);
        assert_relative_eq!(cost, by_hand, epsilon = 1e-12);

        // A full-demand grant reproduces the all-renewable optimum.
        let full = optimal_demand(&p, &m, 4.0).unwrap();
        let (lambda, cost) = post_allocation_cost(&p, &m, full.mu_hat);
        assert_eq!(lambda, 4.0);
        assert_relative_eq!(cost, full.cost, epsilon = 1e-12);
    }

    #[test]
    fn post_allocation_lambda_is_optimal() {
        let m = Market::reference();
        let p = bs(4.0, 2.0);
        let l = 3f64.ln();
        for a in [0.05, 0.3, 1.0, 2.9654, 5.0, 7.0] {
            let (_, cost) = post_allocation_cost(&p, &m, a);
            let upper = p.lambda_bar.min(a * (1.0 - 1e-9));
            for k in 0..=2000 {
                let lam = upper * k as f64 / 2000.0;
                let c = m.p * a + m.p1 * lam + m.p2 * (p.lambda_bar - lam) + lam * l / (a - lam);
                assert!(c >= cost - 1e-9, "a={a} lam={lam}");
            }
        }
    }

    #[test]
    fn supply_curve_matches_optimal_demand() {
        let m = Market::reference();
        let p = bs(4.0, 2.0);
        for lam in [0.0, 0.5, 1.7, 4.0] {
            let d = optimal_demand(&p, &m, lam).unwrap();
            assert_relative_eq!(supply_curve_cost(&p, &m, d.mu_hat), d.cost, epsilon = 1e-9);
        }
        let full = optimal_demand(&p, &m, 4.0).unwrap();
        assert_relative_eq!(
            supply_curve_cost(&p, &m, full.mu_hat + 1.0),
            full.cost + m.p,
            epsilon = 1e-9
        );
    }

    #[test]
    fn supply_curve_cost_is_concave_below_full_demand() {
        let m = Market::reference();
        let p = bs(3.0, 2.0);
        let top = truthful_order(&p, &m);
        let h = top / 1000.0;
        for k in 1..999 {
            let a = k as f64 * h;
            let second = supply_curve_cost(&p, &m, a + h) - 2.0 * supply_curve_cost(&p, &m, a)
                + supply_curve_cost(&p, &m, a - h);
            assert!(second <= 1e-9, "a={a}: {second}");
        }
    }
}
