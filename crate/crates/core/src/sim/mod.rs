//! Discrete-event simulation of the make-to-stock queue.
//!
//! Each demand epoch places one replenishment order; the supplier serves
//! outstanding orders FIFO as a single server. The state is the outstanding
//! count `N`, from which stock `(s - N)^+` and backlog `(N - s)^+` follow.
//!
//! Randomness comes from ChaCha8 seeded with `seed`. Replication `i` uses
//! stream `i` of that seed, so replication 0 is exactly [`simulate`].

mod dist;

pub use dist::DistSpec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{require, Error, Result};
use crate::exec::Execution;
use crate::queue::geometric_pmf;

const BATCHES: usize = 20;
/// Unstable systems are refused beyond this many events.
pub const UNSTABLE_EVENT_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub arrival: DistSpec,
    pub service: DistSpec,
    pub base_stock: u32,
    /// Total events (arrivals plus departures), warmup included.
    pub horizon: u64,
    pub warmup: u64,
    pub seed: u64,
}

impl SimConfig {
    /// Warmup defaults to 10% of the horizon, seed to 0.
    pub fn new(arrival: DistSpec, service: DistSpec, base_stock: u32, horizon: u64) -> Self {
        Self { arrival, service, base_stock, horizon, warmup: horizon / 10, seed: 0 }
    }

    /// M/M/1 with arrival rate `lambda` and service rate `mu`.
    pub fn mm1(lambda: f64, mu: f64, base_stock: u32, horizon: u64) -> Self {
        Self::new(DistSpec::Exponential { rate: lambda }, DistSpec::Exponential { rate: mu }, base_stock, horizon)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Offered load from the sampled distributions.
    pub fn rho(&self) -> f64 {
        self.service.mean() / self.arrival.mean()
    }

    pub fn validate(&self) -> Result<()> {
        self.arrival.validate()?;
        self.service.validate()?;
        require(
            self.horizon > self.warmup && self.horizon - self.warmup >= BATCHES as u64,
            "horizon",
            self.horizon as f64,
            "must exceed warmup by at least 20 events",
        )?;
        let rho = self.rho();
        if rho >= 1.0 {
            if self.horizon > UNSTABLE_EVENT_LIMIT {
                return Err(Error::Simulation("unstable queue with horizon beyond 1e8 events"));
            }
            log::warn!("unstable configuration (rho = {rho:.4}); averages will not converge");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimStats {
    /// Time-average number of outstanding orders, in service included.
    pub mean_outstanding: f64,
    /// Time-average number waiting, `(N - 1)^+`.
    pub mean_waiting: f64,
    pub mean_inventory: f64,
    pub mean_backlog: f64,
    /// Fraction of time with exactly `j` outstanding orders.
    pub pdf: Vec<f64>,
    /// 95% half-width for `mean_outstanding`.
    pub ci_halfwidth: f64,
    pub std_error: f64,
    /// Standard errors of inventory and backlog means.
    pub std_error_inventory: f64,
    pub std_error_backlog: f64,
    /// Events and simulated time after warmup, summed over replications.
    pub events: u64,
    pub time: f64,
    pub replications: usize,
}

/// State at one event instant, for observers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Snapshot {
    pub time: f64,
    pub outstanding: u64,
    pub inventory: u64,
    pub backlog: u64,
}

#[derive(Default, Clone, Copy)]
struct Areas {
    n: f64,
    waiting: f64,
    inventory: f64,
    backlog: f64,
    time: f64,
}

impl Areas {
    fn add(&mut self, n: u64, s: u64, dt: f64) {
        self.n += n as f64 * dt;
        self.waiting += n.saturating_sub(1) as f64 * dt;
        self.inventory += s.saturating_sub(n) as f64 * dt;
        self.backlog += n.saturating_sub(s) as f64 * dt;
        self.time += dt;
    }
}

pub fn simulate(config: &SimConfig) -> Result<SimStats> {
    simulate_observed(config, |_| {})
}

/// [`simulate`] that reports the state after every event, warmup included.
pub fn simulate_observed<F: FnMut(Snapshot)>(config: &SimConfig, observe: F) -> Result<SimStats> {
    config.validate()?;
    run(config, ChaCha8Rng::seed_from_u64(config.seed), observe)
}

fn run<F: FnMut(Snapshot)>(config: &SimConfig, mut rng: ChaCha8Rng, mut observe: F) -> Result<SimStats> {
    let arrivals = config.arrival.sampler()?;
    let service = config.service.sampler()?;
    let s = config.base_stock as u64;
    let measured = config.horizon - config.warmup;
    let batch_len = measured / BATCHES as u64;

    let mut t = 0.0;
    let mut n: u64 = 0;
    let mut next_arrival = arrivals.sample(&mut rng);
    let mut next_departure = f64::INFINITY;
    let mut total = Areas::default();
    let mut batches = [Areas::default(); BATCHES];
    let mut occupancy: Vec<f64> = Vec::new();

    for event in 0..config.horizon {
        let next = next_arrival.min(next_departure);
        if event >= config.warmup {
            let dt = next - t;
            total.add(n, s, dt);
            let b = (((event - config.warmup) / batch_len) as usize).min(BATCHES - 1);
            batches[b].add(n, s, dt);
            if occupancy.len() <= n as usize {
                occupancy.resize(n as usize + 1, 0.0);
            }
            occupancy[n as usize] += dt;
        }
        t = next;
        if next_arrival <= next_departure {
            n += 1;
            if n == 1 {
                next_departure = t + service.sample(&mut rng);
            }
            next_arrival = t + arrivals.sample(&mut rng);
        } else {
            n -= 1;
            next_departure = if n > 0 { t + service.sample(&mut rng) } else { f64::INFINITY };
        }
        observe(Snapshot { time: t, outstanding: n, inventory: s.saturating_sub(n), backlog: n.saturating_sub(s) });
    }

    if total.time <= 0.0 {
        return Err(Error::Simulation("no time elapsed after warmup"));
    }
    let per_batch = |f: fn(&Areas) -> f64| -> Vec<f64> { batches.iter().map(|b| f(b) / b.time).collect() };
    let (half, se) = interval(&per_batch(|a| a.n));
    Ok(SimStats {
        mean_outstanding: total.n / total.time,
        mean_waiting: total.waiting / total.time,
        mean_inventory: total.inventory / total.time,
        mean_backlog: total.backlog / total.time,
        pdf: occupancy.iter().map(|x| x / total.time).collect(),
        ci_halfwidth: half,
        std_error: se,
        std_error_inventory: interval(&per_batch(|a| a.inventory)).1,
        std_error_backlog: interval(&per_batch(|a| a.backlog)).1,
        events: measured,
        time: total.time,
        replications: 1,
    })
}

/// `(95% half-width, standard error)` of the mean of `xs`.
fn interval(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    let se = (var / k).sqrt();
    let t = StudentsT::new(0.0, 1.0, k - 1.0).expect("at least two samples").inverse_cdf(0.975);
    (t * se, se)
}

/// Runs `n_reps` independent replications and pools them.
///
/// Replication `i` draws from ChaCha8 stream `i` of `config.seed`. Means and
/// the pmf are averaged with equal weights; intervals come from the spread of
/// the replication means. The result does not depend on `exec`.
pub fn replicate(config: &SimConfig, n_reps: usize, exec: Execution) -> Result<SimStats> {
    require(n_reps >= 1, "n_reps", n_reps as f64, "need at least one replication")?;
    config.validate()?;
    let runs = exec.map_range(n_reps, |i| {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        run(config, rng, |_| {})
    });
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    if n_reps == 1 {
        return Ok(runs.into_iter().next().expect("one run"));
    }

    let k = n_reps as f64;
    let avg = |f: fn(&SimStats) -> f64| runs.iter().map(f).sum::<f64>() / k;
    let width = runs.iter().map(|r| r.pdf.len()).max().unwrap_or(0);
    let mut pdf = vec![0.0; width];
    for r in &runs {
        for (acc, p) in pdf.iter_mut().zip(&r.pdf) {
            *acc += p / k;
        }
    }
    let spread = |f: fn(&SimStats) -> f64| interval(&runs.iter().map(f).collect::<Vec<_>>());
    let (half, se) = spread(|r| r.mean_outstanding);
    Ok(SimStats {
        mean_outstanding: avg(|r| r.mean_outstanding),
        mean_waiting: avg(|r| r.mean_waiting),
        mean_inventory: avg(|r| r.mean_inventory),
        mean_backlog: avg(|r| r.mean_backlog),
        pdf,
        ci_halfwidth: half,
        std_error: se,
        std_error_inventory: spread(|r| r.mean_inventory).1,
        std_error_backlog: spread(|r| r.mean_backlog).1,
        events: runs.iter().map(|r| r.events).sum(),
        time: runs.iter().map(|r| r.time).sum(),
        replications: n_reps,
    })
}

/// Largest absolute gap between the empirical pmf of `N` and the geometric
/// law `(1 - rho) rho^j`.
pub fn empirical_pdf_compare(stats: &SimStats, rho: f64) -> Result<f64> {
    if stats.pdf.is_empty() || stats.time <= 0.0 {
        return Err(Error::Simulation("empty run has no empirical distribution"));
    }
    require(rho > 0.0 && rho < 1.0, "rho", rho, "must lie in (0, 1)")?;
    let mut worst: f64 = 0.0;
    for (j, &p) in stats.pdf.iter().enumerate() {
        worst = worst.max((p - geometric_pmf(j, rho)).abs());
    }
    // Beyond the observed support the empirical mass is zero.
    Ok(worst.max(geometric_pmf(stats.pdf.len(), rho)))
}
