use serde::{Deserialize, Serialize};

use super::contract::{epsilon_range, EpsilonRange};
use super::nash::{cost_bs, cost_rps, nash_equilibrium};
use super::GameInstance;
use crate::error::{Error, Result};
use crate::params::StrategyPair;

/// Total cost of the integrated system. The backlog split `alpha` cancels.
pub fn system_cost(g: &GameInstance, x: StrategyPair) -> Result<f64> {
    Ok(cost_bs(g, x)? + cost_rps(g, x)?)
}

fn require_central(g: &GameInstance) -> Result<(f64, f64, f64)> {
    if g.b() <= 0.0 {
        return Err(Error::Degenerate("zero backlog cost: the planner never stocks"));
    }
    if g.cs() <= 0.0 {
        return Err(Error::Degenerate("zero supply cost: the planner pushes nu to phi"));
    }
    Ok((g.b().ln_1p(), g.cs(), g.phi()))
}

/// Joint minimizer of [`system_cost`]:
/// `nu = phi sqrt(cs g) / (sqrt(cs g) + cs sqrt(phi + 1))`, `s = g / nu`, with `g = ln(1 + b)`.
pub fn centralized_optimum(g: &GameInstance) -> Result<StrategyPair> {
    let (gamma, cs, phi) = require_central(g)?;
    let root = (cs * gamma).sqrt();
    let nu = phi * root / (root + cs * (phi + 1.0).sqrt());
    Ok(StrategyPair { s: gamma / nu, nu })
}

/// `(cs + g + 2 sqrt(cs g (1 + phi))) / phi`.
pub fn centralized_cost(g: &GameInstance) -> Result<f64> {
    let (gamma, cs, phi) = require_central(g)?;
    Ok((cs + gamma + 2.0 * (cs * gamma * (1.0 + phi)).sqrt()) / phi)
}

/// Relative excess of the equilibrium total cost over the centralized minimum.
///
/// Equilibrium costs come from substituting the equilibrium into both cost
/// functions.
pub fn competition_penalty(g: &GameInstance) -> Result<f64> {
    let ne = nash_equilibrium(g)?;
    Ok(system_cost(g, ne)? / centralized_cost(g)? - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub ne: StrategyPair,
    pub cost_bs_ne: f64,
    pub cost_rps_ne: f64,
    pub central: StrategyPair,
    pub cost_central: f64,
    pub penalty: f64,
    pub epsilon_range: EpsilonRange,
}

pub fn equilibrium_report(g: &GameInstance) -> Result<EquilibriumReport> {
    let ne = nash_equilibrium(g)?;
    let cost_bs_ne = cost_bs(g, ne)?;
    let cost_rps_ne = cost_rps(g, ne)?;
    let cost_central = centralized_cost(g)?;
    Ok(EquilibriumReport {
        ne,
        cost_bs_ne,
        cost_rps_ne,
        central: centralized_optimum(g)?,
        cost_central,
        penalty: (cost_bs_ne + cost_rps_ne) / cost_central - 1.0,
        epsilon_range: epsilon_range(g)?,
    })
}
