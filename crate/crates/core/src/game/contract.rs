//! Cost-sharing transfer contract.
//!
//! The transfer `eps'(s, nu) = eps C_o - (1 - eps) C_r` leaves the RPS with
//! `eps C` and the BS with `(1 - eps) C`, so both minimize the system cost.

use serde::{Deserialize, Serialize};

use super::central::{centralized_cost, system_cost};
use super::nash::{cost_bs, cost_rps, nash_equilibrium};
use super::GameInstance;
use crate::error::{require, Result};
use crate::params::StrategyPair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferContract {
    pub epsilon: f64,
}

impl TransferContract {
    pub fn new(epsilon: f64) -> Result<Self> {
        require((0.0..=1.0).contains(&epsilon), "epsilon", epsilon, "must lie in [0, 1]")?;
        Ok(Self { epsilon })
    }

    /// Payment from the BS to the RPS at strategy `x`.
    pub fn transfer(&self, g: &GameInstance, x: StrategyPair) -> Result<f64> {
        Ok(self.epsilon * cost_bs(g, x)? - (1.0 - self.epsilon) * cost_rps(g, x)?)
    }
}

/// Closed interval of acceptable sharing fractions. Empty when `lo > hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsilonRange {
    pub lo: f64,
    pub hi: f64,
}

impl EpsilonRange {
    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, eps: f64) -> bool {
        self.lo <= eps && eps <= self.hi
    }

    pub fn midpoint(&self) -> Option<f64> {
        (!self.is_empty()).then(|| 0.5 * (self.lo + self.hi))
    }
}

/// Fractions under which both players do at least as well as at the
/// uncoordinated equilibrium: `[C_r*/C - P, C_r*/C]` clipped to `[0, 1]`.
pub fn epsilon_range(g: &GameInstance) -> Result<EpsilonRange> {
    let ne = nash_equilibrium(g)?;
    let c = centralized_cost(g)?;
    let c_r = cost_rps(g, ne)?;
    let penalty = system_cost(g, ne)? / c - 1.0;
    let hi = c_r / c;
    let lo = hi - penalty;
    Ok(EpsilonRange { lo: lo.max(0.0), hi: hi.min(1.0) })
}

/// `(BS cost, RPS cost)` after the transfer.
pub fn coordinated_costs(
    g: &GameInstance,
    contract: TransferContract,
    x: StrategyPair,
) -> Result<(f64, f64)> {
    let t = contract.transfer(g, x)?;
    Ok((cost_bs(g, x)? - t, cost_rps(g, x)? + t))
}
