//! Splitting a BS's connection load between renewable and grid energy.

use serde::{Deserialize, Serialize};

use super::nash::nash_equilibrium;
use super::GameInstance;
use crate::error::{require, Result};
use crate::solve::golden_section_min;

const SEARCH_TOL: f64 = 1e-6;
/// Keeps the renewable share strictly below `mu0`, where `phi` vanishes.
const CAPACITY_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSplit {
    /// Connection rate served from renewable supply; zero means all-grid.
    pub lambda: f64,
    pub cost: f64,
    /// Cost of serving everything from the grid, `P2 * total_lambda`.
    pub all_grid_cost: f64,
}

impl PowerSplit {
    pub fn saving(&self) -> f64 {
        self.all_grid_cost - self.cost
    }
}

/// BS cost when `lambda` of `total_lambda` connections run on renewable
/// energy: the equilibrium reservation level `s*(lambda)` (with
/// `phi = mu0 / lambda - 1`) plus the two energy bills.
///
/// Points where the equilibrium degenerates cost `+inf`.
pub fn split_cost(
    template: &GameInstance,
    lambda: f64,
    total_lambda: f64,
    mu0: f64,
    p1: f64,
    p2: f64,
) -> f64 {
    if lambda <= 0.0 {
        return p2 * total_lambda;
    }
    let phi = mu0 / lambda - 1.0;
    let stock = template
        .with_phi(phi)
        .and_then(|g| nash_equilibrium(&g))
        .map(|ne| ne.s);
    match stock {
        Ok(s) => s + p1 * lambda + p2 * (total_lambda - lambda),
        Err(_) => f64::INFINITY,
    }
}

/// Minimizes [`split_cost`] over `lambda in [0, min(total_lambda, mu0 (1 - 1e-6))]`
/// by golden-section search, checking both boundaries.
///
/// Only `b`, `cs` and `alpha` are taken from `template`; `phi` is rebuilt per
/// candidate `lambda`.
pub fn power_split(
    template: &GameInstance,
    total_lambda: f64,
    mu0: f64,
    p1: f64,
    p2: f64,
) -> Result<PowerSplit> {
    require(total_lambda > 0.0, "total_lambda", total_lambda, "must be positive")?;
    require(mu0 > 0.0, "mu0", mu0, "must be positive")?;
    let upper = total_lambda.min(mu0 * (1.0 - CAPACITY_MARGIN));
    let cost = |l: f64| split_cost(template, l, total_lambda, mu0, p1, p2);
    let (lambda, value) = golden_section_min(cost, 0.0, upper, SEARCH_TOL);
    Ok(PowerSplit { lambda, cost: value, all_grid_cost: p2 * total_lambda })
}
