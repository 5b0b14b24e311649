//! Allocation mechanisms: map an order vector to a feasible grant vector.

use serde::{Deserialize, Serialize};

use super::demand::breakeven_supply;
use super::{AllocationResult, Market, OrderVector};
use crate::error::{require, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mechanism {
    Proportional,
    ParetoPriority,
    AdaptiveUniform,
}

impl Mechanism {
    pub const ALL: [Mechanism; 3] =
        [Mechanism::Proportional, Mechanism::ParetoPriority, Mechanism::AdaptiveUniform];

    pub fn allocate(self, market: &Market, orders: &OrderVector) -> Result<AllocationResult> {
        match self {
            Mechanism::Proportional => proportional_allocation(market, orders),
            Mechanism::ParetoPriority => pareto_priority_allocation(market, orders),
            Mechanism::AdaptiveUniform => adaptive_uniform_allocation(market, orders),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::Proportional => "proportional",
            Mechanism::ParetoPriority => "pareto-priority",
            Mechanism::AdaptiveUniform => "adaptive-uniform",
        }
    }
}

fn check(market: &Market, orders: &OrderVector) -> Result<()> {
    require(
        orders.orders.len() == market.len(),
        "orders",
        orders.orders.len() as f64,
        "order vector length must match the market",
    )?;
    for &m in &orders.orders {
        require(m >= 0.0 && m.is_finite(), "order", m, "must be finite and non-negative")?;
    }
    Ok(())
}

/// Positions sorted by descending order, ties kept in market order.
fn descending(orders: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..orders.len()).collect();
    idx.sort_by(|&a, &b| orders[b].total_cmp(&orders[a]));
    idx
}

/// Zeroes every grant in `(0, mu_hat(lambda_hat_i)]`.
fn take_or_leave(market: &Market, grants: &mut [f64]) -> Vec<usize> {
    let mut rejected = Vec::new();
    for (i, g) in grants.iter_mut().enumerate() {
        if *g > 0.0 && *g <= breakeven_supply(market.profiles[i].b, market) {
            *g = 0.0;
            rejected.push(i);
        }
    }
    rejected
}

/// `g_i = min(m_i, mu0 m_i / sum m)`.
pub fn proportional_allocation(market: &Market, orders: &OrderVector) -> Result<AllocationResult> {
    check(market, orders)?;
    let total = orders.total();
    let grants = if total > 0.0 {
        orders.orders.iter().map(|&m| m.min(market.mu0 * m / total)).collect()
    } else {
        vec![0.0; market.len()]
    };
    Ok(AllocationResult { grants, n_hat: None, rejected: Vec::new() })
}

/// Serves the largest orders first until capacity runs out. A grant at or
/// below the BS's break-even supply rate is refused, and the refused capacity
/// stays idle for the period.
pub fn pareto_priority_allocation(market: &Market, orders: &OrderVector) -> Result<AllocationResult> {
    check(market, orders)?;
    let mut grants = vec![0.0; market.len()];
    let mut remaining = market.mu0;
    for i in descending(&orders.orders) {
        let g = orders.orders[i].min(remaining);
        grants[i] = g;
        remaining -= g;
    }
    let rejected = take_or_leave(market, &mut grants);
    Ok(AllocationResult { grants, n_hat: None, rejected })
}

/// Adaptive uniform allocation.
///
/// With orders sorted descending, `n_hat` is the largest `n` such that the
/// uniform share `(mu0 - sum_{j>n} m_j) / n` does not exceed `m_n`. The
/// `n_hat` largest orders receive that share, the rest receive their orders,
/// and a single take-or-leave pass zeroes shares at or below break-even.
pub fn adaptive_uniform_allocation(market: &Market, orders: &OrderVector) -> Result<AllocationResult> {
    check(market, orders)?;
    let n = market.len();
    let m = &orders.orders;
    if orders.total() <= market.mu0 {
        let mut grants = m.clone();
        let rejected = take_or_leave(market, &mut grants);
        return Ok(AllocationResult { grants, n_hat: Some(n), rejected });
    }

    let sorted = descending(m);
    // suffix[k] = sum of the sorted orders at positions k.. (0-based)
    let mut suffix = vec![0.0; n + 1];
    for k in (0..n).rev() {
        suffix[k] = suffix[k + 1] + m[sorted[k]];
    }
    let share_for = |count: usize| (market.mu0 - suffix[count]) / count as f64;
    let n_hat = (1..=n)
        .rev()
        .find(|&count| share_for(count) <= m[sorted[count - 1]])
        .unwrap_or(1);
    let share = share_for(n_hat);

    let mut grants = m.clone();
    for &i in &sorted[..n_hat] {
        grants[i] = share;
    }
    let rejected = take_or_leave(market, &mut grants);
    Ok(AllocationResult { grants, n_hat: Some(n_hat), rejected })
}
