//! Social cost of an allocation and the extreme-point social optimum.

use serde::{Deserialize, Serialize};

use super::demand::{bs_cost, CostModel};
use super::Market;
use crate::error::{require, Error, Result};
use crate::exec::Execution;

/// Largest market the enumeration accepts.
pub const BRUTE_FORCE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SocialOptimum {
    pub grants: Vec<f64>,
    pub cost: f64,
}

/// Sum of per-BS costs under `model`.
pub fn social_cost(market: &Market, grants: &[f64], model: CostModel) -> Result<f64> {
    require(
        grants.len() == market.len(),
        "grants",
        grants.len() as f64,
        "grant vector length must match the market",
    )?;
    Ok(market
        .profiles
        .iter()
        .zip(grants)
        .map(|(bs, &a)| bs_cost(bs, market, a, model))
        .sum())
}

/// Minimum social cost over the capacity polytope, by enumeration of its
/// extreme points.
///
/// Every BS is on its optimal-supply curve ([`CostModel::SupplyCurve`]), which
/// makes the objective concave in the grants, so some vertex of
/// `{0 <= g_i <= m_i*, sum g <= mu0}` is optimal. A vertex serves a set of BSs
/// in full, at most one BS with the leftover capacity, and nobody else.
pub fn social_optimum_bruteforce(market: &Market, exec: Execution) -> Result<SocialOptimum> {
    let n = market.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let demand = market.truthful_orders().orders;
    let cost = |g: &[f64]| -> f64 {
        market
            .profiles
            .iter()
            .zip(g)
            .map(|(bs, &a)| bs_cost(bs, market, a, CostModel::SupplyCurve))
            .sum()
    };

    let per_mask = exec.map_range(1usize << n, |mask| {
        let full: f64 = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| demand[i]).sum();
        let residual = market.mu0 - full;
        if residual < -1e-12 * market.mu0 {
            return None;
        }
        let mut g: Vec<f64> = (0..n).map(|i| if mask >> i & 1 == 1 { demand[i] } else { 0.0 }).collect();
        let mut best = (cost(&g), g.clone());
        if residual > 0.0 {
            for j in (0..n).filter(|j| mask >> j & 1 == 0 && demand[*j] > 0.0) {
                g[j] = residual.min(demand[j]);
                let c = cost(&g);
                if c < best.0 {
                    best = (c, g.clone());
                }
                g[j] = 0.0;
            }
        }
        Some(best)
    });

    let (cost, grants) = per_mask
        .into_iter()
        .flatten()
        .fold(None::<(f64, Vec<f64>)>, |acc, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
        .expect("the empty allocation is always feasible");
    Ok(SocialOptimum { grants, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alloc::{pareto_priority_allocation, proportional_allocation, BsProfile};
    use approx::assert_relative_eq;

    #[test]
    fn zero_grants_cost_all_grid() {
        let m = Market::reference();
        for model in [CostModel::Reoptimized, CostModel::SupplyCurve] {
            assert_relative_eq!(social_cost(&m, &[0.0; 8], model).unwrap(), 180.0, epsilon = 1e-12);
        }
        assert!(social_cost(&m, &[0.0; 3], CostModel::Reoptimized).is_err());
    }

    #[test]
    fn reference_optimum_matches_pareto() {
        let m = Market::reference();
        let opt = social_optimum_bruteforce(&m, Execution::default()).unwrap();
        let pareto = pareto_priority_allocation(&m, &m.truthful_orders()).unwrap();
        let pc = social_cost(&m, &pareto.grants, CostModel::SupplyCurve).unwrap();
        assert_relative_eq!(opt.cost, pc, epsilon = 1e-9);
        let prop = proportional_allocation(&m, &m.truthful_orders()).unwrap();
        assert!(social_cost(&m, &prop.grants, CostModel::SupplyCurve).unwrap() > opt.cost + 1e-6);
    }

    #[test]
    fn ample_capacity_serves_everyone() {
        let m = Market::reference().with_capacity(30.0).unwrap();
        let opt = social_optimum_bruteforce(&m, Execution::Sequential).unwrap();
        assert_eq!(opt.grants, m.truthful_orders().orders);
    }

    #[test]
    fn symmetric_pair_serves_exactly_one() {
        let profiles = vec![BsProfile::new(1, 2.0, 2.0).unwrap(), BsProfile::new(2, 2.0, 2.0).unwrap()];
        let probe = Market::new(profiles.clone(), 1.0, 2.0, 1.0, 10.0).unwrap();
        let m_star = probe.truthful_orders().orders[0];
        let m = probe.with_capacity(m_star).unwrap();
        let opt = social_optimum_bruteforce(&m, Execution::Sequential).unwrap();
        let served = opt.grants.iter().filter(|&&g| g > 0.0).count();
        assert_eq!(served, 1);
        let split = social_cost(&m, &[m_star / 2.0; 2], CostModel::SupplyCurve).unwrap();
        assert!(split > opt.cost + 1e-6);
    }

    #[test]
    fn refuses_large_markets() {
        let m = Market::linear(13, 0.5, 2.0, 20.0, 2.0, 1.0, 10.0).unwrap();
        assert!(matches!(
            social_optimum_bruteforce(&m, Execution::Sequential),
            Err(Error::TooLarge { n: 13, limit: 12 })
        ));
    }
}
