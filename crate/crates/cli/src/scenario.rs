//! Named experiments. Every row starts with the resolved parameters.

use std::str::FromStr;

use greenstock::alloc::{
    breakeven_supply, bs_cost, social_cost, social_optimum_bruteforce, truthfulness_audit, AuditSpec,
    CostModel, Market, Mechanism,
};
use greenstock::game::{
    auxiliary_f, best_response_dynamics, centralized_cost, centralized_optimum, cost_bs, cost_rps,
    equilibrium_report, nash_equilibrium, power_split, StrategyPair,
};
use greenstock::queue::{kappa, mm1_mean_outstanding};
use greenstock::sim::{empirical_pdf_compare, replicate, DistSpec, SimConfig};
use greenstock::{Execution, GameInstance};

use crate::config::ParamSet;
use crate::error::{CliError, Result};
use crate::table::ResultTable;

/// Load factors of the M/M/1 validation rows.
pub const TABLE1_RHOS: [f64; 4] = [0.39, 0.70, 0.80, 0.93];
/// Nominal load of the G/G/1 row.
pub const GG1_RHO: f64 = 0.80;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Central,
    Nash,
    PenaltyContract,
    PowerSplit,
    QueueValidate,
    Allocate,
    Audit,
}

impl FromStr for Scenario {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "central" => Scenario::Central,
            "nash" => Scenario::Nash,
            "penalty-contract" => Scenario::PenaltyContract,
            "power-split" => Scenario::PowerSplit,
            "queue-validate" => Scenario::QueueValidate,
            "allocate" => Scenario::Allocate,
            "audit" => Scenario::Audit,
            other => return Err(CliError::Config(format!("unknown scenario `{other}`"))),
        })
    }
}

const GAME: &[(&str, f64)] = &[("b", 10.0), ("cs", 5.0), ("phi", 1.0), ("alpha", 0.5)];
const MARKET: &[(&str, f64)] = &[
    ("n", 8.0),
    ("step", 0.5),
    ("b", 2.0),
    ("mu0", 20.0),
    ("p", 2.0),
    ("p1", 1.0),
    ("p2", 10.0),
];

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::Central => "central",
            Scenario::Nash => "nash",
            Scenario::PenaltyContract => "penalty-contract",
            Scenario::PowerSplit => "power-split",
            Scenario::QueueValidate => "queue-validate",
            Scenario::Allocate => "allocate",
            Scenario::Audit => "audit",
        }
    }

    pub fn defaults(self) -> ParamSet {
        match self {
            Scenario::Central => ParamSet::new(&GAME[..3]),
            Scenario::Nash | Scenario::PenaltyContract => ParamSet::new(GAME),
            Scenario::PowerSplit => ParamSet::new(&[
                ("b", 5.0),
                ("cs", 5.0),
                ("alpha", 0.5),
                ("mu0", 2.0),
                ("lambda_bar", 1.8),
                ("p1", 1.0),
                ("p2", 10.0),
            ]),
            Scenario::QueueValidate => {
                ParamSet::new(&[("horizon", 2e6), ("reps", 5.0), ("base_stock", 0.0), ("cv", 0.5)])
            }
            Scenario::Allocate => ParamSet::new(MARKET),
            Scenario::Audit => {
                let mut v = MARKET.to_vec();
                v.extend([("points", 200.0), ("scenarios", 20.0), ("max_multiplier", 2.5)]);
                ParamSet::new(&v)
            }
        }
    }

    /// Sets `key`, accepting `mu0_over_lambda` as `phi + 1` where `phi` exists.
    pub fn assign(params: &mut ParamSet, key: &str, value: f64) -> Result<()> {
        if key == "mu0_over_lambda" && params.contains("phi") {
            params.set("phi", value - 1.0)
        } else {
            params.set(key, value)
        }
    }

    pub fn run(self, params: &ParamSet, seed: u64, exec: Execution) -> Result<ResultTable> {
        let (columns, rows, notes) = match self {
            Scenario::Central => central(params)?,
            Scenario::Nash => nash(params)?,
            Scenario::PenaltyContract => penalty_contract(params)?,
            Scenario::PowerSplit => power(params)?,
            Scenario::QueueValidate => queue_validate(params, seed, exec)?,
            Scenario::Allocate => allocate(params, exec)?,
            Scenario::Audit => audit(params, seed, exec)?,
        };
        let mut table = ResultTable::new(params.keys().chain(columns.iter().copied()).map(String::from).collect());
        for row in rows {
            table.push(params.values().chain(row).collect());
        }
        table.notes = notes;
        Ok(table)
    }
}

type Output = (Vec<&'static str>, Vec<Vec<f64>>, Vec<String>);

fn game(params: &ParamSet, alpha: f64) -> Result<GameInstance> {
    Ok(GameInstance::normalized(params.get("b"), params.get("cs"), params.get("phi"), alpha)?)
}

fn central(params: &ParamSet) -> Result<Output> {
    let g = game(params, 0.5)?;
    let x = centralized_optimum(&g)?;
    let c = centralized_cost(&g)?;
    Ok((vec!["mu0_over_lambda", "nu_bar", "s_bar", "cost"], vec![vec![g.phi() + 1.0, x.nu, x.s, c]], vec![]))
}

fn nash(params: &ParamSet) -> Result<Output> {
    let g = game(params, params.get("alpha"))?;
    let ne = nash_equilibrium(&g)?;
    let dynamics = best_response_dynamics(&g, StrategyPair::new(1.0, 0.5 * g.phi()), 1e-10, 10_000)?;
    let row = vec![
        ne.s,
        ne.nu,
        cost_bs(&g, ne)?,
        cost_rps(&g, ne)?,
        auxiliary_f(&g)?,
        dynamics.point.s,
        dynamics.point.nu,
        dynamics.iterations as f64,
    ];
    Ok((
        vec!["s_star", "nu_star", "cost_bs", "cost_rps", "f", "br_s", "br_nu", "br_iterations"],
        vec![row],
        vec![],
    ))
}

fn penalty_contract(params: &ParamSet) -> Result<Output> {
    let r = equilibrium_report(&game(params, params.get("alpha"))?)?;
    let row = vec![
        r.ne.s,
        r.ne.nu,
        r.cost_bs_ne,
        r.cost_rps_ne,
        r.cost_central,
        r.penalty,
        r.epsilon_range.lo,
        r.epsilon_range.hi,
    ];
    Ok((
        vec!["s_star", "nu_star", "cost_bs", "cost_rps", "cost_central", "penalty", "eps_lo", "eps_hi"],
        vec![row],
        vec![],
    ))
}

fn power(params: &ParamSet) -> Result<Output> {
    let template = GameInstance::normalized(params.get("b"), params.get("cs"), 1.0, params.get("alpha"))?;
    let total = params.get("lambda_bar");
    let split = power_split(&template, total, params.get("mu0"), params.get("p1"), params.get("p2"))?;
    let row = vec![split.lambda, split.lambda / total, split.cost, split.all_grid_cost, split.saving()];
    Ok((vec!["lambda_star", "renewable_share", "cost", "all_grid_cost", "saving"], vec![row], vec![]))
}

fn queue_validate(params: &ParamSet, seed: u64, exec: Execution) -> Result<Output> {
    let horizon = params.count("horizon", 40)? as u64;
    let reps = params.count("reps", 1)?;
    let base_stock = u32::try_from(params.count("base_stock", 0)?)
        .map_err(|_| CliError::Config("base_stock is too large".into()))?;
    let cv = params.get("cv");

    let mut rows = Vec::new();
    for (k, rho) in TABLE1_RHOS.into_iter().enumerate() {
        let cfg = SimConfig::mm1(rho, 1.0, base_stock, horizon).with_seed(seed.wrapping_add(k as u64));
        let stats = replicate(&cfg, reps, exec)?;
        let analysis = mm1_mean_outstanding(rho)?;
        let pmf = empirical_pdf_compare(&stats, rho)?;
        rows.push(vec![
            0.0,
            rho,
            rho,
            1.0,
            analysis,
            stats.mean_outstanding,
            stats.mean_waiting,
            stats.ci_halfwidth,
            stats.mean_outstanding / analysis - 1.0,
            pmf,
        ]);
    }

    let arrival = DistSpec::HyperExp2 { prob: 0.5, rate1: 2.3, rate2: 3.5 };
    let service = DistSpec::TruncatedNormal { mean: GG1_RHO * arrival.mean(), cv, floor: 1e-6 * GG1_RHO * arrival.mean() };
    let cfg = SimConfig::new(arrival, service, base_stock, horizon).with_seed(seed.wrapping_add(TABLE1_RHOS.len() as u64));
    let stats = replicate(&cfg, reps, exec)?;
    let rho = cfg.rho();
    let k = kappa(arrival.scv(), service.scv());
    let analysis = k * mm1_mean_outstanding(rho)?;
    rows.push(vec![
        1.0,
        GG1_RHO,
        rho,
        k,
        analysis,
        stats.mean_outstanding,
        stats.mean_waiting,
        stats.ci_halfwidth,
        stats.mean_outstanding / analysis - 1.0,
        f64::NAN,
    ]);
    let notes = vec![
        "model: 0=M/M/1, 1=H2 arrivals with truncated-normal service".into(),
        "rho is the load of the sampled distributions; analysis = kappa*rho/(1-rho)".into(),
        format!("replication k uses seed+row with ChaCha8 stream k; {reps} replications per row"),
    ];
    Ok((
        vec![
            "model",
            "rho_nominal",
            "rho",
            "kappa",
            "analysis",
            "simulated",
            "simulated_waiting",
            "ci_halfwidth",
            "rel_error",
            "pmf_sup_distance",
        ],
        rows,
        notes,
    ))
}

pub fn market(params: &ParamSet) -> Result<Market> {
    Ok(Market::linear(
        params.count("n", 1)?,
        params.get("step"),
        params.get("b"),
        params.get("mu0"),
        params.get("p"),
        params.get("p1"),
        params.get("p2"),
    )?)
}

fn allocate(params: &ParamSet, exec: Execution) -> Result<Output> {
    let m = market(params)?;
    let orders = m.truthful_orders();
    let results = Mechanism::ALL
        .iter()
        .map(|mech| mech.allocate(&m, &orders))
        .collect::<Result<Vec<_>, _>>()?;
    let model = CostModel::Reoptimized;
    let mut rows = Vec::new();
    for (i, bs) in m.profiles.iter().enumerate() {
        let mut row = vec![bs.index as f64, bs.lambda_bar, orders.orders[i], breakeven_supply(bs.b, &m)];
        row.extend(results.iter().map(|r| r.grants[i]));
        row.extend(results.iter().map(|r| bs_cost(bs, &m, r.grants[i], model)));
        row.push(results[2].n_hat.unwrap_or(0) as f64);
        row.extend(results[1..].iter().map(|r| if r.rejected.contains(&i) { 1.0 } else { 0.0 }));
        rows.push(row);
    }

    let mut notes = Vec::new();
    for (mech, r) in Mechanism::ALL.iter().zip(&results) {
        notes.push(format!(
            "social cost {}: {:.6} re-optimized, {:.6} supply-curve",
            mech.name(),
            social_cost(&m, &r.grants, CostModel::Reoptimized)?,
            social_cost(&m, &r.grants, CostModel::SupplyCurve)?
        ));
    }
    if let Ok(opt) = social_optimum_bruteforce(&m, exec) {
        notes.push(format!("social optimum (extreme-point enumeration, supply-curve): {:.6}", opt.cost));
    }
    Ok((
        vec![
            "bs",
            "lambda_bar_i",
            "order",
            "breakeven_supply",
            "grant_proportional",
            "grant_pareto",
            "grant_adaptive",
            "cost_proportional",
            "cost_pareto",
            "cost_adaptive",
            "n_hat",
            "rejected_pareto",
            "rejected_adaptive",
        ],
        rows,
        notes,
    ))
}

fn audit(params: &ParamSet, seed: u64, exec: Execution) -> Result<Output> {
    let m = market(params)?;
    let spec = AuditSpec {
        points: params.count("points", 2)?,
        scenarios: params.count("scenarios", 0)?,
        max_multiplier: params.get("max_multiplier"),
        seed,
        ..AuditSpec::default()
    };
    let mut rows = Vec::new();
    for (code, mech) in Mechanism::ALL.into_iter().enumerate() {
        let report = truthfulness_audit(&m, mech, &spec, exec)?;
        for b in &report.per_bs {
            rows.push(vec![
                code as f64,
                b.index as f64,
                b.truthful_order,
                b.best_order,
                b.max_improvement,
                b.scenario as f64,
                if report.truthful_dominant { 1.0 } else { 0.0 },
            ]);
        }
    }
    Ok((
        vec!["mechanism", "bs", "truthful_order", "best_order", "max_improvement", "scenario", "truthful_dominant"],
        rows,
        vec![
            "mechanism: 0=proportional, 1=pareto-priority, 2=adaptive-uniform".into(),
            format!("improvements at or below {:e} count as zero; scenario 0 has truthful opponents", spec.tolerance),
        ],
    ))
}
