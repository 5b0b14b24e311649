mod check;
mod config;
mod error;
mod scenario;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use greenstock::Execution;

use config::{parse_assignment, ConfigFile, ParamSet, SweepSpec};
use error::{CliError, Result};
use scenario::Scenario;
use table::{write_csv, Provenance, ResultTable};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "greenstock", version, about = "Renewable energy supply experiments with CSV output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Centralized optimum (nu_bar, s_bar, C).
    Central(Common),
    /// Nash equilibrium and best-response dynamics.
    Nash(Common),
    /// Competition penalty and the acceptable sharing range.
    PenaltyContract(Common),
    /// Renewable/grid load split of one BS.
    PowerSplit(Common),
    /// Simulated versus analytic outstanding orders.
    QueueValidate(Common),
    /// Orders and grants under the three allocation mechanisms.
    Allocate(Common),
    /// Unilateral-deviation audits of the three mechanisms.
    Audit(Common),
    /// Runs a scenario over a range of one parameter.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct Common {
    /// JSON config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Assert the pinned thresholds; exit 3 if any fails.
    #[arg(long)]
    check: bool,
    /// Parameter override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", value_parser = parse_assignment)]
    overrides: Vec<(String, f64)>,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    scenario: Option<String>,
    #[arg(long)]
    param: Option<String>,
    #[arg(long)]
    from: Option<f64>,
    #[arg(long)]
    to: Option<f64>,
    #[arg(long)]
    step: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    values: Option<Vec<f64>>,
}

struct Job {
    scenario: Scenario,
    params: ParamSet,
    sweep: Option<SweepSpec>,
    seed: u64,
    out: Option<PathBuf>,
    check: bool,
    exec: Execution,
}

fn resolve(command: Command) -> Result<Job> {
    let (fixed, common, sweep_args) = match command {
        Command::Central(c) => (Some(Scenario::Central), c, None),
        Command::Nash(c) => (Some(Scenario::Nash), c, None),
        Command::PenaltyContract(c) => (Some(Scenario::PenaltyContract), c, None),
        Command::PowerSplit(c) => (Some(Scenario::PowerSplit), c, None),
        Command::QueueValidate(c) => (Some(Scenario::QueueValidate), c, None),
        Command::Allocate(c) => (Some(Scenario::Allocate), c, None),
        Command::Audit(c) => (Some(Scenario::Audit), c, None),
        Command::Sweep(s) => (None, s.common, Some((s.scenario, s.param, s.from, s.to, s.step, s.values))),
    };
    let file = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };

    let scenario = match (fixed, &sweep_args) {
        (Some(s), _) => {
            if let Some(named) = &file.scenario {
                if named.parse::<Scenario>()? != s {
                    return Err(CliError::Config(format!("config is for scenario `{named}`, not `{}`", s.name())));
                }
            }
            s
        }
        (None, Some((flag, ..))) => flag
            .as_deref()
            .or(file.scenario.as_deref())
            .ok_or_else(|| CliError::Config("sweep needs a scenario (--scenario or `scenario` in the config)".into()))?
            .parse()?,
        (None, None) => unreachable!("every command names a scenario or is a sweep"),
    };

    let mut params = scenario.defaults();
    for (k, v) in &file.params {
        Scenario::assign(&mut params, k, *v)?;
    }
    for (k, v) in &common.overrides {
        Scenario::assign(&mut params, k, *v)?;
    }

    let sweep = match sweep_args {
        None => {
            if file.sweep.is_some() {
                return Err(CliError::Config("`sweep` block given to a single-run command; use `sweep`".into()));
            }
            None
        }
        Some((_, param, from, to, step, values)) => {
            let mut spec = file.sweep.clone().unwrap_or_default();
            if let Some(p) = param {
                spec.param = p;
            }
            if values.is_some() {
                spec = SweepSpec { param: spec.param, values, ..Default::default() };
            }
            if from.is_some() || to.is_some() || step.is_some() {
                spec.values = None;
                spec.from = from.or(spec.from);
                spec.to = to.or(spec.to);
                spec.step = step.or(spec.step);
            }
            if spec.param.is_empty() {
                return Err(CliError::Config("sweep needs a parameter (--param or `sweep.param`)".into()));
            }
            Scenario::assign(&mut params.clone(), &spec.param, 1.0)?;
            Some(spec)
        }
    };

    Ok(Job {
        scenario,
        params,
        sweep,
        seed: common.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        out: common.out.or(file.out),
        check: common.check,
        exec: if common.sequential { Execution::Sequential } else { Execution::default() },
    })
}

fn execute(job: &Job) -> Result<(ResultTable, Vec<(ParamSet, ResultTable)>)> {
    let Some(sweep) = &job.sweep else {
        let table = job.scenario.run(&job.params, job.seed, job.exec)?;
        return Ok((table.clone(), vec![(job.params.clone(), table)]));
    };
    let points = sweep.points()?;
    let runs = job.exec.map(&points, |&v| -> Result<(ParamSet, ResultTable)> {
        let mut params = job.params.clone();
        Scenario::assign(&mut params, &sweep.param, v)?;
        let table = job.scenario.run(&params, job.seed, job.exec)?;
        Ok((params, table))
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let mut merged: Option<ResultTable> = None;
    for (_, t) in &runs {
        match merged.as_mut() {
            None => merged = Some(t.clone()),
            Some(m) => m.extend(t.clone())?,
        }
    }
    let mut merged = merged.expect("sweep has at least one point");
    merged.notes.insert(0, format!("sweep: {} over {} points", sweep.param, points.len()));
    Ok((merged, runs))
}

fn run(cli: Cli) -> Result<()> {
    let job = resolve(cli.command)?;
    let (table, runs) = execute(&job)?;
    let label = match &job.sweep {
        Some(s) => format!("sweep {} over {}", job.scenario.name(), s.param),
        None => job.scenario.name().to_string(),
    };
    let prov = Provenance::now(&label, job.seed);
    match &job.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_csv(&mut w, &table, &prov)?;
            w.flush()?;
            log::info!("wrote {} rows to {}", table.rows.len(), path.display());
        }
        None => write_csv(std::io::stdout().lock(), &table, &prov)?,
    }

    if job.check {
        let mut total = 0;
        let mut failed = 0;
        for (params, t) in &runs {
            for c in check::run_checks(job.scenario, params, t) {
                total += 1;
                failed += usize::from(!c.pass);
                eprintln!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
        }
        if failed > 0 {
            return Err(CliError::Check { failed, total });
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
