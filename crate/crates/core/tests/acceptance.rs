//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Reference values come from oracles written here (grid searches, series
//! sums, water-filling by bisection, random feasible sampling), not from the
//! library routines under test.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use greenstock::alloc::{
    adaptive_uniform_allocation, pareto_priority_allocation, proportional_allocation, social_cost,
    social_optimum_bruteforce, truthfulness_audit, AuditSpec, CostModel, Market, Mechanism,
};
use greenstock::game::{
    best_response_dynamics, centralized_cost, centralized_optimum, competition_penalty,
    coordinated_costs, cost_bs, epsilon_range, nash_equilibrium, power_split, reference_instance,
    TransferContract,
};
use greenstock::queue::{approximation_error, kappa};
use greenstock::sim::{empirical_pdf_compare, replicate, DistSpec, SimConfig};
use greenstock::{Execution, GameInstance, StrategyPair};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg)
    }
}

/// `I(s) + b D(s) + cs (nu + 1) / (phi - nu)`, written out independently.
fn system_cost(b: f64, cs: f64, phi: f64, s: f64, nu: f64) -> f64 {
    let tail = (-nu * s).exp();
    s - (1.0 - tail) / nu + b * tail / nu + cs * (nu + 1.0) / (phi - nu)
}

/// Coarse-to-fine grid minimization of [`system_cost`].
fn grid_minimum(b: f64, cs: f64, phi: f64) -> (f64, f64, f64) {
    let (mut s_lo, mut s_hi) = (0.0, 40.0);
    let (mut n_lo, mut n_hi) = (1e-6, phi - 1e-6);
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for _ in 0..8 {
        let k = 200;
        for i in 0..=k {
            let s = s_lo + (s_hi - s_lo) * i as f64 / k as f64;
            for j in 0..=k {
                let nu = n_lo + (n_hi - n_lo) * j as f64 / k as f64;
                let c = system_cost(b, cs, phi, s, nu);
                if c < best.0 {
                    best = (c, s, nu);
                }
            }
        }
        let (ds, dn) = (4.0 * (s_hi - s_lo) / k as f64, 4.0 * (n_hi - n_lo) / k as f64);
        s_lo = (best.1 - ds).max(0.0);
        s_hi = best.1 + ds;
        n_lo = (best.2 - dn).max(1e-9);
        n_hi = (best.2 + dn).min(phi - 1e-9);
    }
    (best.1, best.2, best.0)
}

fn c1_centralized() -> Outcome {
    let g = reference_instance();
    let x = centralized_optimum(&g).map_err(|e| e.to_string())?;
    let c = centralized_cost(&g).map_err(|e| e.to_string())?;
    check((x.nu - 0.33).abs() <= 0.01, format!("nu = {:.5}", x.nu))?;
    check((x.s - 7.29).abs() <= 0.01, format!("s = {:.5}", x.s))?;
    check((c - 17.19).abs() <= 0.01, format!("C = {c:.5}"))?;
    let (gs, gn, gc) = grid_minimum(10.0, 5.0, 1.0);
    check(
        (gs - x.s).abs() < 1e-3 && (gn - x.nu).abs() < 1e-4 && (gc - c).abs() < 1e-6,
        format!("grid oracle ({gs:.5}, {gn:.5}, {gc:.6}) vs ({:.5}, {:.5}, {c:.6})", x.s, x.nu),
    )?;
    Ok(format!("nu={:.4} s={:.4} C={:.4}; grid oracle agrees", x.nu, x.s, c))
}

fn c2_nash_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_gap: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    for _ in 0..100 {
        let b = rng.random_range(0.5..20.0);
        let cs = rng.random_range(0.5..10.0);
        let phi = rng.random_range(0.2..4.0);
        let alpha = rng.random_range(0.05..0.95);
        let g = GameInstance::normalized(b, cs, phi, alpha).map_err(|e| e.to_string())?;
        let ne = nash_equilibrium(&g).map_err(|e| e.to_string())?;
        let start = StrategyPair::new(1.0, 0.5 * phi);
        let dyn_ = best_response_dynamics(&g, start, 1e-11, 10_000).map_err(|e| e.to_string())?;
        worst_gap = worst_gap
            .max((dyn_.point.s - ne.s).abs())
            .max((dyn_.point.nu - ne.nu).abs());
        // C_o = I + alpha b D, written out.
        let tail = (-ne.nu * ne.s).exp();
        let c_o = ne.s - (1.0 - tail) / ne.nu + alpha * b * tail / ne.nu;
        let lib_c_o = cost_bs(&g, ne).map_err(|e| e.to_string())?;
        worst_identity = worst_identity
            .max((ne.nu * ne.s - (alpha * b).ln_1p()).abs())
            .max((c_o - ne.s).abs())
            .max((lib_c_o - ne.s).abs());
    }
    check(worst_gap <= 1e-6, format!("closed form vs dynamics gap {worst_gap:.2e}"))?;
    check(worst_identity <= 1e-9, format!("identity residual {worst_identity:.2e}"))?;
    Ok(format!("100 draws; max NE gap {worst_gap:.1e}, max identity residual {worst_identity:.1e}"))
}

fn c3_penalty_contract() -> Outcome {
    let g = reference_instance();
    let p = competition_penalty(&g).map_err(|e| e.to_string())?;
    let ne = nash_equilibrium(&g).map_err(|e| e.to_string())?;
    let (_, _, c_min) = grid_minimum(10.0, 5.0, 1.0);
    let oracle = system_cost(10.0, 5.0, 1.0, ne.s, ne.nu) / c_min - 1.0;
    check((p - 0.0407).abs() <= 5e-4, format!("penalty {p:.5}"))?;
    check((p - oracle).abs() <= 1e-6, format!("penalty {p:.6} vs oracle {oracle:.6}"))?;

    let range = epsilon_range(&g).map_err(|e| e.to_string())?;
    check(!range.is_empty(), "empty epsilon range".into())?;
    let x = centralized_optimum(&g).map_err(|e| e.to_string())?;
    let n = 300;
    let s_at = |i: usize| 3.0 * x.s * i as f64 / n as f64;
    let nu_at = |j: usize| g.phi() * j as f64 / (n + 1) as f64;
    let mut planner = (f64::INFINITY, 0, 0);
    for i in 1..=n {
        for j in 1..=n {
            let c = system_cost(10.0, 5.0, 1.0, s_at(i), nu_at(j));
            if c < planner.0 {
                planner = (c, i, j);
            }
        }
    }
    check(
        (s_at(planner.1) - x.s).abs() <= 3.0 * x.s / n as f64
            && (nu_at(planner.2) - x.nu).abs() <= g.phi() / (n + 1) as f64,
        "planner gridpoint is not adjacent to the analytic optimum".into(),
    )?;
    let mut checked = 0;
    for k in 0..=4 {
        let eps = range.lo + (range.hi - range.lo) * k as f64 / 4.0;
        let contract = TransferContract::new(eps).map_err(|e| e.to_string())?;
        let (mut bs, mut rps) = ((f64::INFINITY, 0, 0), (f64::INFINITY, 0, 0));
        for i in 1..=n {
            for j in 1..=n {
                let pt = StrategyPair::new(s_at(i), nu_at(j));
                let (cb, cr) = coordinated_costs(&g, contract, pt).map_err(|e| e.to_string())?;
                if cb < bs.0 {
                    bs = (cb, i, j);
                }
                if cr < rps.0 {
                    rps = (cr, i, j);
                }
            }
        }
        check(
            (bs.1, bs.2) == (planner.1, planner.2) && (rps.1, rps.2) == (planner.1, planner.2),
            format!("eps={eps:.4}: BS argmin {:?}, RPS argmin {:?}, planner {:?}", (bs.1, bs.2), (rps.1, rps.2), (planner.1, planner.2)),
        )?;
        checked += 1;
    }
    Ok(format!(
        "penalty={p:.4}; eps range [{:.4}, {:.4}]; {checked} fractions hit the planner gridpoint on 300x300",
        range.lo, range.hi
    ))
}

fn c4_queue() -> Outcome {
    let exec = Execution::default();
    let mut parts = Vec::new();
    for (k, rho) in [0.39, 0.70, 0.80, 0.93].into_iter().enumerate() {
        let cfg = SimConfig::mm1(rho, 1.0, 0, 2_000_000).with_seed(100 + k as u64);
        let stats = replicate(&cfg, 5, exec).map_err(|e| e.to_string())?;
        let exact = rho / (1.0 - rho);
        let err = (stats.mean_outstanding - exact).abs() / exact;
        check(err <= 0.05, format!("rho={rho}: {:.4} vs {exact:.4}", stats.mean_outstanding))?;
        parts.push(format!("rho={rho}:{:+.1}%", 100.0 * (stats.mean_outstanding / exact - 1.0)));
    }

    let arrival = DistSpec::HyperExp2 { prob: 0.5, rate1: 2.3, rate2: 3.5 };
    let service = DistSpec::truncated_normal(0.80 * arrival.mean(), 0.5);
    let cfg = SimConfig::new(arrival, service, 0, 2_000_000).with_seed(7);
    let stats = replicate(&cfg, 5, exec).map_err(|e| e.to_string())?;
    let rho = cfg.rho();
    let predicted = kappa(arrival.scv(), service.scv()) * rho / (1.0 - rho);
    let err = (stats.mean_outstanding - predicted).abs() / predicted;
    check(err <= 0.15, format!("G/G/1: {:.4} vs {predicted:.4}", stats.mean_outstanding))?;
    parts.push(format!("G/G/1 rho={rho:.3}:{:+.1}%", 100.0 * (stats.mean_outstanding / predicted - 1.0)));

    for (rho, seed) in [(0.75, 11), (0.39, 12)] {
        let stats = greenstock::sim::simulate(&SimConfig::mm1(rho, 1.0, 0, 2_000_000).with_seed(seed))
            .map_err(|e| e.to_string())?;
        let d = empirical_pdf_compare(&stats, rho).map_err(|e| e.to_string())?;
        check(d < 0.01, format!("pmf sup-distance at rho={rho}: {d:.4}"))?;
        parts.push(format!("pmf({rho}) {d:.4}"));
    }
    Ok(parts.join(", "))
}

fn c5_continuous_approximation() -> Outcome {
    let rho: f64 = 0.9;
    let nu = (1.0 - rho) / rho;
    let mut worst: f64 = 0.0;
    for s in 0..=10u32 {
        // Exact backlog by direct summation of the geometric tail.
        let exact: f64 = (s as usize + 1..20_000)
            .map(|j| (j as f64 - s as f64) * (1.0 - rho) * rho.powi(j as i32))
            .sum();
        let approx = (-nu * s as f64).exp() / nu;
        let oracle = (exact - approx).abs() / exact;
        let lib = approximation_error(s, rho).map_err(|e| e.to_string())?;
        check((lib - oracle).abs() < 1e-9, format!("s={s}: {lib:.6} vs series {oracle:.6}"))?;
        worst = worst.max(lib);
    }
    check(worst <= 0.08, format!("max relative error {worst:.4}"))?;
    Ok(format!("max relative error {worst:.4} over s=0..10"))
}

/// Water level `u` with `sum min(m_i, u) = mu0`, by bisection.
fn water_level(orders: &[f64], mu0: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, orders.iter().cloned().fold(0.0, f64::max));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if orders.iter().map(|m| m.min(mid)).sum::<f64>() < mu0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn c6_multi_bs() -> Outcome {
    let market = Market::reference();
    let orders = market.truthful_orders();
    let r = adaptive_uniform_allocation(&market, &orders).map_err(|e| e.to_string())?;
    let level = water_level(&orders.orders, market.mu0);
    let in_group = orders.orders.iter().filter(|&&m| m > level).count();
    check(r.n_hat == Some(5) && in_group == 5, format!("n_hat {:?}, oracle {in_group}", r.n_hat))?;
    for i in 3..8 {
        check((r.grants[i] - 2.9654).abs() <= 1e-3, format!("grant[{i}] = {:.5}", r.grants[i]))?;
        check((r.grants[i] - level).abs() <= 1e-9, format!("grant[{i}] vs water level {level:.6}"))?;
    }

    let spec = AuditSpec::default();
    let exec = Execution::default();
    let au = truthfulness_audit(&market, Mechanism::AdaptiveUniform, &spec, exec).map_err(|e| e.to_string())?;
    check(au.truthful_dominant, format!("adaptive uniform improvement {:.3e}", au.max_improvement))?;
    let pp = truthfulness_audit(&market, Mechanism::ParetoPriority, &spec, exec).map_err(|e| e.to_string())?;
    let inflation = pp
        .per_bs
        .iter()
        .filter(|b| b.max_improvement > spec.tolerance && b.best_order > b.truthful_order)
        .max_by(|a, b| a.max_improvement.total_cmp(&b.max_improvement));
    let Some(inflation) = inflation else {
        return Err("pareto-priority audit found no profitable inflation".into());
    };
    Ok(format!(
        "n_hat=5, uniform grant {:.4}; adaptive max improvement {:.1e}; pareto: BS{} gains {:.3} by ordering {:.3} > {:.3}",
        r.grants[7], au.max_improvement, inflation.index, inflation.max_improvement, inflation.best_order, inflation.truthful_order
    ))
}

fn c7_lemma1() -> Outcome {
    let market = Market::reference();
    let orders = market.truthful_orders();
    let opt = social_optimum_bruteforce(&market, Execution::default()).map_err(|e| e.to_string())?;
    let model = CostModel::SupplyCurve;
    let prop = proportional_allocation(&market, &orders).map_err(|e| e.to_string())?;
    let pareto = pareto_priority_allocation(&market, &orders).map_err(|e| e.to_string())?;
    let c_prop = social_cost(&market, &prop.grants, model).map_err(|e| e.to_string())?;
    let c_pareto = social_cost(&market, &pareto.grants, model).map_err(|e| e.to_string())?;
    check(c_prop > opt.cost + 1e-6, format!("proportional {c_prop:.4} vs optimum {:.4}", opt.cost))?;
    check((c_pareto - opt.cost).abs() <= 1e-9, format!("pareto {c_pareto:.6} vs optimum {:.6}", opt.cost))?;

    // No random feasible allocation beats the enumerated optimum.
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut best_random = f64::INFINITY;
    for _ in 0..20_000 {
        let mut g: Vec<f64> = orders.orders.iter().map(|&m| m * rng.random::<f64>()).collect();
        let total: f64 = g.iter().sum();
        if total > market.mu0 {
            g.iter_mut().for_each(|x| *x *= market.mu0 / total);
        }
        best_random = best_random.min(social_cost(&market, &g, model).map_err(|e| e.to_string())?);
    }
    check(best_random >= opt.cost - 1e-9, format!("random allocation {best_random:.4} beats {:.4}", opt.cost))?;
    Ok(format!(
        "optimum {:.4} = pareto {c_pareto:.4} < proportional {c_prop:.4}; best of 20000 random {best_random:.4}",
        opt.cost
    ))
}

/// Equilibrium stock `ln(1 + alpha b) / nu*` with `nu* = f phi / (sqrt(1 + phi) + f)`.
fn equilibrium_stock(b: f64, cs: f64, alpha: f64, phi: f64) -> f64 {
    let ab = alpha * b;
    let f = ((1.0 - alpha) * b * (1.0 + ab.ln_1p()) / (cs * (1.0 + ab))).sqrt();
    ab.ln_1p() * ((1.0 + phi).sqrt() + f) / (f * phi)
}

fn c8_power_split() -> Outcome {
    let (b, cs, alpha, mu0, total, p1) = (5.0, 5.0, 0.5, 2.0, 1.8, 1.0);
    let template = GameInstance::normalized(b, cs, 1.0, alpha).map_err(|e| e.to_string())?;
    let mut prev = -1.0;
    let mut parts = Vec::new();
    for p2 in [5.0, 7.5, 10.0] {
        let split = power_split(&template, total, mu0, p1, p2).map_err(|e| e.to_string())?;
        let upper = f64::min(total, mu0 * (1.0 - 1e-6));
        let cost = |l: f64| {
            if l <= 0.0 {
                p2 * total
            } else {
                equilibrium_stock(b, cs, alpha, mu0 / l - 1.0) + p1 * l + p2 * (total - l)
            }
        };
        let steps = (upper / 1e-3).ceil() as usize;
        let grid = (0..=steps)
            .map(|k| (k as f64 * 1e-3).min(upper))
            .min_by(|x, y| cost(*x).total_cmp(&cost(*y)))
            .unwrap();
        check(
            (split.lambda - grid).abs() <= 1e-3,
            format!("P2={p2}: golden {:.5} vs grid {grid:.5}", split.lambda),
        )?;
        check(split.lambda >= prev, format!("lambda* decreased at P2={p2}"))?;
        prev = split.lambda;
        parts.push(format!("P2={p2}: {:.4} (saving {:.3})", split.lambda, split.saving()));
        let target = match p2 {
            x if x == 5.0 => Some(0.67),
            x if x == 10.0 => Some(1.11),
            _ => None,
        };
        if let Some(t) = target {
            check((split.lambda - t).abs() <= 0.1, format!("P2={p2}: {:.4} vs {t}", split.lambda))?;
        }
    }
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 centralized optimum", c1_centralized, Duration::from_secs(1)),
        ("2 NE consistency", c2_nash_consistency, Duration::from_secs(5)),
        ("3 competition penalty and contract", c3_penalty_contract, Duration::from_secs(10)),
        ("4 queue validation", c4_queue, Duration::from_secs(60)),
        ("5 continuous approximation", c5_continuous_approximation, Duration::from_secs(1)),
        ("6 multi-BS allocation and audits", c6_multi_bs, Duration::from_secs(60)),
        ("7 extreme-point social optimum", c7_lemma1, Duration::from_secs(10)),
        ("8 power split", c8_power_split, Duration::from_secs(5)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > budget => Err(format!("{detail} [over budget {budget:?}]")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  criterion {name} ({:.2}s): {detail}", elapsed.as_secs_f64()),
            Err(why) => {
                failures += 1;
                println!("FAIL  criterion {name} ({:.2}s): {why}", elapsed.as_secs_f64());
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
