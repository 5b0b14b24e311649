//! Physical parameters of a BS–RPS pair and their dimensionless form.

use serde::{Deserialize, Serialize};

use crate::error::{require, Result};

/// Open-interval tolerance used for the `nu` domain `(0, phi)`.
pub const DOMAIN_EPS: f64 = 1e-12;

/// Raw parameters of one base station and its renewable power supplier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Connection arrival rate.
    pub lambda: f64,
    /// Maximum renewable production rate.
    pub mu0: f64,
    /// Backlog cost per waiting connection per unit time.
    pub b: f64,
    /// Reservation cost per stored energy unit per unit time.
    pub c: f64,
    /// RPS cost per unit increase of its external load factor.
    pub cs_raw: f64,
    /// External demand arriving at the RPS.
    pub lambda0: f64,
    /// Share of the backlog cost charged to the BS.
    pub alpha: f64,
    /// Renewable energy price per connection.
    pub p1: f64,
    /// Grid energy price per connection.
    pub p2: f64,
    /// Incentive price per unit supply rate (multi-BS market).
    pub p: f64,
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        require(self.lambda > 0.0, "lambda", self.lambda, "must be positive")?;
        require(
            self.mu0 > self.lambda,
            "mu0",
            self.mu0,
            "must exceed lambda (no capacity headroom)",
        )?;
        require(self.c > 0.0, "c", self.c, "reservation cost must be positive")?;
        require(
            (0.0..=1.0).contains(&self.alpha),
            "alpha",
            self.alpha,
            "must lie in [0, 1]",
        )?;
        for (name, v) in [
            ("b", self.b),
            ("cs_raw", self.cs_raw),
            ("lambda0", self.lambda0),
            ("p1", self.p1),
            ("p2", self.p2),
            ("p", self.p),
        ] {
            require(v >= 0.0, name, v, "must be non-negative")?;
        }
        Ok(())
    }
}

/// Cost parameters scaled by the reservation cost `c`, plus the capacity
/// headroom `phi = mu0 / lambda - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedParams {
    pub b_n: f64,
    pub cs_n: f64,
    pub phi: f64,
    pub alpha: f64,
}

impl NormalizedParams {
    /// Builds normalized parameters directly, checking their invariants.
    pub fn new(b_n: f64, cs_n: f64, phi: f64, alpha: f64) -> Result<Self> {
        require(phi > 0.0, "phi", phi, "capacity headroom must be positive")?;
        require(b_n >= 0.0, "b_n", b_n, "must be non-negative")?;
        require(cs_n >= 0.0, "cs_n", cs_n, "must be non-negative")?;
        require((0.0..=1.0).contains(&alpha), "alpha", alpha, "must lie in [0, 1]")?;
        Ok(Self { b_n, cs_n, phi, alpha })
    }

    /// Same costs with the headroom rebuilt for a different served rate.
    pub fn with_phi(self, phi: f64) -> Result<Self> {
        Self::new(self.b_n, self.cs_n, phi, self.alpha)
    }
}

/// `b_n = b / c`, `cs_n = (cs_raw / c) (lambda0 / mu0)`, `phi = mu0 / lambda - 1`.
pub fn normalize(params: &SystemParams) -> Result<NormalizedParams> {
    params.validate()?;
    let b_n = params.b / params.c;
    let cs_n = params.cs_raw / params.c * (params.lambda0 / params.mu0);
    let phi = params.mu0 / params.lambda - 1.0;
    NormalizedParams::new(b_n, cs_n, phi, params.alpha)
}

/// A point of the BS–RPS strategy space: base-stock level `s` and
/// normalized supply rate `nu = (mu - lambda) / lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyPair {
    pub s: f64,
    pub nu: f64,
}

impl StrategyPair {
    pub fn new(s: f64, nu: f64) -> Self {
        Self { s, nu }
    }

    /// Supply rate `mu` and load factor `rho` implied by `nu` at arrival rate `lambda`.
    pub fn supply_rate(&self, lambda: f64) -> f64 {
        lambda * (1.0 + self.nu)
    }

    pub fn load_factor(&self) -> f64 {
        1.0 / (1.0 + self.nu)
    }
}
