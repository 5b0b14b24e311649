//! The two-player BS–RPS supply game.
//!
//! The BS picks a base-stock level `s` and the RPS a normalized supply rate
//! `nu`. Costs are per unit time in reservation-cost units.

mod central;
mod contract;
mod nash;
mod power;

pub use central::{
    centralized_cost, centralized_optimum, competition_penalty, equilibrium_report, system_cost,
    EquilibriumReport,
};
pub use contract::{coordinated_costs, epsilon_range, EpsilonRange, TransferContract};
pub use nash::{
    auxiliary_f, best_response_dynamics, bs_best_response, cost_bs, cost_rps, nash_equilibrium,
    rps_best_response, Dynamics,
};
pub use power::{power_split, split_cost, PowerSplit};

pub use crate::params::StrategyPair;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{NormalizedParams, DOMAIN_EPS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GameInstance {
    pub norm: NormalizedParams,
}

impl GameInstance {
    pub fn new(norm: NormalizedParams) -> Self {
        Self { norm }
    }

    /// Shorthand for an instance given directly in normalized units.
    pub fn normalized(b: f64, cs: f64, phi: f64, alpha: f64) -> Result<Self> {
        Ok(Self::new(NormalizedParams::new(b, cs, phi, alpha)?))
    }

    pub fn b(&self) -> f64 {
        self.norm.b_n
    }

    pub fn cs(&self) -> f64 {
        self.norm.cs_n
    }

    pub fn phi(&self) -> f64 {
        self.norm.phi
    }

    pub fn alpha(&self) -> f64 {
        self.norm.alpha
    }

    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Ok(Self::new(NormalizedParams::new(self.b(), self.cs(), self.phi(), alpha)?))
    }

    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Ok(Self::new(self.norm.with_phi(phi)?))
    }

    /// `s >= 0`, `nu > 0`.
    pub(crate) fn check_bs_domain(&self, x: StrategyPair) -> Result<()> {
        if !(x.s >= 0.0 && x.s.is_finite()) {
            return Err(Error::Domain { s: x.s, nu: x.nu, reason: "s must be finite and non-negative" });
        }
        if !(x.nu > DOMAIN_EPS && x.nu.is_finite()) {
            return Err(Error::Domain { s: x.s, nu: x.nu, reason: "nu must be positive" });
        }
        Ok(())
    }

    /// BS domain plus `nu < phi`.
    pub(crate) fn check_domain(&self, x: StrategyPair) -> Result<()> {
        self.check_bs_domain(x)?;
        if x.nu >= self.phi() - DOMAIN_EPS {
            return Err(Error::Domain { s: x.s, nu: x.nu, reason: "nu must stay below phi" });
        }
        Ok(())
    }

    pub(crate) fn require_interior_game(&self) -> Result<()> {
        if self.alpha() >= 1.0 {
            return Err(Error::Degenerate("alpha = 1 leaves the RPS no backlog exposure"));
        }
        if self.b() <= 0.0 {
            return Err(Error::Degenerate("zero backlog cost"));
        }
        if self.cs() <= 0.0 {
            return Err(Error::Degenerate("zero supply cost"));
        }
        Ok(())
    }
}

/// Reference instance used throughout the single-BS study:
/// `b = 10`, `cs = 5`, `phi = 1`, `alpha = 0.5`.
pub fn reference_instance() -> GameInstance {
    GameInstance::normalized(10.0, 5.0, 1.0, 0.5).expect("reference instance is valid")
}
