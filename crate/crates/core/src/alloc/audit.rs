//! Unilateral-deviation audits of an allocation mechanism.
//!
//! For every BS and every opponent scenario the audit scans a grid of
//! alternative orders and records how much the BS could save against its
//! truthful order. Work items run through [`Execution`]; the reduction is
//! in a fixed order, so the report does not depend on the mode.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::demand::{bs_cost, CostModel};
use super::mechanism::Mechanism;
use super::{Market, OrderVector};
use crate::error::{require, Result};
use crate::exec::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditSpec {
    /// Deviation points per BS, spread evenly over `[0, max_multiplier * m_i*]`.
    pub points: usize,
    pub max_multiplier: f64,
    /// Opponent scenarios besides the truthful one. Each perturbed scenario
    /// scales every opponent's truthful order by an independent U[0, 2] draw.
    pub scenarios: usize,
    pub seed: u64,
    /// Improvements at or below this are treated as zero.
    pub tolerance: f64,
    pub cost_model: CostModel,
}

impl Default for AuditSpec {
    fn default() -> Self {
        Self {
            points: 200,
            max_multiplier: 2.5,
            scenarios: 20,
            seed: 0,
            tolerance: 1e-9,
            cost_model: CostModel::Reoptimized,
        }
    }
}

/// Worst case for one BS across scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsAudit {
    pub index: usize,
    pub truthful_order: f64,
    /// Largest saving from deviating, over all scenarios (never negative).
    pub max_improvement: f64,
    /// Order achieving it (the truthful order when nothing beats it).
    pub best_order: f64,
    /// Scenario in which it occurs; 0 is the truthful-opponent scenario.
    pub scenario: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub mechanism: Mechanism,
    pub per_bs: Vec<BsAudit>,
    pub max_improvement: f64,
    pub truthful_dominant: bool,
}

/// Opponent order vectors: scenario 0 is truthful, the rest are seeded
/// perturbations.
fn scenarios(truthful: &OrderVector, spec: &AuditSpec) -> Vec<OrderVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = vec![truthful.clone()];
    for _ in 0..spec.scenarios {
        let orders = truthful
            .orders
            .iter()
            .map(|&m| m * rng.random_range(0.0..2.0))
            .collect();
        out.push(OrderVector { orders });
    }
    out
}

pub fn truthfulness_audit(
    market: &Market,
    mechanism: Mechanism,
    spec: &AuditSpec,
    exec: Execution,
) -> Result<AuditReport> {
    require(spec.points >= 2, "points", spec.points as f64, "need at least two grid points")?;
    require(spec.max_multiplier > 0.0, "max_multiplier", spec.max_multiplier, "must be positive")?;
    require(spec.tolerance >= 0.0, "tolerance", spec.tolerance, "must be non-negative")?;

    let truthful = market.truthful_orders();
    let positive: Vec<f64> = truthful.orders.iter().copied().filter(|&m| m > 0.0).collect();
    // A BS that truthfully orders nothing still gets probed on a sensible scale.
    let fallback_scale = if positive.is_empty() {
        market.mu0 / market.len() as f64
    } else {
        positive.iter().sum::<f64>() / positive.len() as f64
    };
    let worlds = scenarios(&truthful, spec);
    let n = market.len();

    let items = exec.map_range(n * worlds.len(), |item| {
        let (i, k) = (item / worlds.len(), item % worlds.len());
        let truth = truthful.orders[i];
        let cost_of = |order: f64| -> Result<f64> {
            let g = mechanism.allocate(market, &worlds[k].with_order(i, order))?.grants[i];
            Ok(bs_cost(&market.profiles[i], market, g, spec.cost_model))
        };
        let base = cost_of(truth)?;
        let scale = if truth > 0.0 { truth } else { fallback_scale };
        let mut best = (0.0, truth);
        for j in 0..spec.points {
            let order = spec.max_multiplier * scale * j as f64 / (spec.points - 1) as f64;
            let gain = base - cost_of(order)?;
            if gain > best.0 {
                best = (gain, order);
            }
        }
        Ok((i, k, best.0, best.1))
    });

    let mut per_bs: Vec<BsAudit> = (0..n)
        .map(|i| BsAudit {
            index: market.profiles[i].index,
            truthful_order: truthful.orders[i],
            max_improvement: 0.0,
            best_order: truthful.orders[i],
            scenario: 0,
        })
        .collect();
    for item in items {
        let (i, k, gain, order) = item?;
        if gain > per_bs[i].max_improvement {
            per_bs[i].max_improvement = gain;
            per_bs[i].best_order = order;
            per_bs[i].scenario = k;
        }
    }
    let max_improvement = per_bs.iter().map(|b| b.max_improvement).fold(0.0, f64::max);
    if max_improvement > spec.tolerance {
        log::debug!("{} audit: max improvement {max_improvement:.3e}", mechanism.name());
    }
    Ok(AuditReport {
        mechanism,
        per_bs,
        max_improvement,
        truthful_dominant: max_improvement <= spec.tolerance,
    })
}
