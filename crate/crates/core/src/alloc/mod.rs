//! A single renewable supplier selling limited supply rate to several base
//! stations at a posted incentive price.
//!
//! Each BS orders a supply rate, a mechanism turns the order vector into a
//! feasible allocation, and the BS then schedules its load given what it
//! received. [`audit`] checks whether truthful ordering is a dominant
//! strategy; [`social`] compares mechanisms against the extreme-point optimum.

pub mod audit;
pub mod demand;
pub mod mechanism;
pub mod social;

pub use audit::{truthfulness_audit, AuditReport, AuditSpec, BsAudit};
pub use demand::{
    bs_cost, breakeven_lambda, breakeven_supply, optimal_demand, post_allocation_cost,
    supply_curve_cost, CostModel, Demand,
};
pub use mechanism::{
    adaptive_uniform_allocation, pareto_priority_allocation, proportional_allocation, Mechanism,
};
pub use social::{social_cost, social_optimum_bruteforce, SocialOptimum};

use serde::{Deserialize, Serialize};

use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsProfile {
    pub index: usize,
    /// Total connection arrival rate.
    pub lambda_bar: f64,
    /// Normalized backlog cost.
    pub b: f64,
}

impl BsProfile {
    pub fn new(index: usize, lambda_bar: f64, b: f64) -> Result<Self> {
        require(lambda_bar > 0.0, "lambda_bar", lambda_bar, "must be positive")?;
        require(b >= 0.0, "b", b, "must be non-negative")?;
        Ok(Self { index, lambda_bar, b })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Market {
    pub profiles: Vec<BsProfile>,
    /// Supplier capacity.
    pub mu0: f64,
    /// Incentive price per unit supply rate.
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
}

impl Market {
    pub fn new(profiles: Vec<BsProfile>, mu0: f64, p: f64, p1: f64, p2: f64) -> Result<Self> {
        require(!profiles.is_empty(), "n", 0.0, "market needs at least one BS")?;
        require(mu0 > 0.0, "mu0", mu0, "capacity must be positive")?;
        require(p > 0.0, "p", p, "incentive price must be positive")?;
        require(p1 >= 0.0, "p1", p1, "must be non-negative")?;
        require(p2 >= 0.0, "p2", p2, "must be non-negative")?;
        Ok(Self { profiles, mu0, p, p1, p2 })
    }

    /// `n` stations with `lambda_bar_i = step * i` (1-based) and a common backlog cost.
    pub fn linear(n: usize, step: f64, b: f64, mu0: f64, p: f64, p1: f64, p2: f64) -> Result<Self> {
        let profiles = (1..=n)
            .map(|i| BsProfile::new(i, step * i as f64, b))
            .collect::<Result<Vec<_>>>()?;
        Self::new(profiles, mu0, p, p1, p2)
    }

    /// Eight stations, `lambda_bar_i = 0.5 i`, `b = 2`, `mu0 = 20`, `p = 2`, `P1 = 1`, `P2 = 10`.
    pub fn reference() -> Self {
        Self::linear(8, 0.5, 2.0, 20.0, 2.0, 1.0, 10.0).expect("reference market is valid")
    }

    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    /// Orders a cost-minimizing BS submits: its full optimal supply rate
    /// `mu_hat(lambda_bar)` when all-renewable beats all-grid, zero otherwise.
    pub fn truthful_orders(&self) -> OrderVector {
        let orders = self
            .profiles
            .iter()
            .map(|bs| demand::truthful_order(bs, self))
            .collect();
        OrderVector { orders }
    }

    pub fn with_capacity(&self, mu0: f64) -> Result<Self> {
        Self::new(self.profiles.clone(), mu0, self.p, self.p1, self.p2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderVector {
    pub orders: Vec<f64>,
}

impl OrderVector {
    pub fn new(orders: Vec<f64>) -> Result<Self> {
        for &m in &orders {
            require(m >= 0.0 && m.is_finite(), "order", m, "must be finite and non-negative")?;
        }
        Ok(Self { orders })
    }

    pub fn total(&self) -> f64 {
        self.orders.iter().sum()
    }

    pub fn with_order(&self, i: usize, m: f64) -> Self {
        let mut orders = self.orders.clone();
        orders[i] = m;
        Self { orders }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationResult {
    /// Granted supply rate per BS, in market order.
    pub grants: Vec<f64>,
    /// Size of the uniform group (adaptive uniform only).
    pub n_hat: Option<usize>,
    /// Market positions whose grant was zeroed by the take-or-leave rule.
    pub rejected: Vec<usize>,
}

impl AllocationResult {
    pub fn total(&self) -> f64 {
        self.grants.iter().sum()
    }
}
