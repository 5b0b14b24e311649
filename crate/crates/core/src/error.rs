use crate::params::StrategyPair;

/// Errors raised by the analytic models, mechanisms and the simulator.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("strategy (s = {s}, nu = {nu}) outside the admissible domain: {reason}")]
    Domain { s: f64, nu: f64, reason: &'static str },

    /// The game has no interior equilibrium (alpha = 1, b = 0 or cs = 0).
    #[error("degenerate game: {0}")]
    Degenerate(&'static str),

    /// The RPS cost is monotone in nu, so its best response sits on the boundary.
    #[error("no interior best response: {0}")]
    NoInteriorResponse(&'static str),

    #[error("best-response dynamics did not converge within {iterations} iterations")]
    NotConverged {
        iterations: usize,
        trace: Vec<StrategyPair>,
    },

    /// `P2 <= P1 + p`: every BS orders zero renewable supply.
    #[error("all-grid regime: P2 = {p2} does not exceed P1 + p = {threshold}")]
    AllGridRegime { p2: f64, threshold: f64 },

    #[error("bracket [{lo}, {hi}] does not contain a sign change")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("enumeration over {n} base stations refused (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("simulation refused: {0}")]
    Simulation(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn require(cond: bool, name: &'static str, value: f64, reason: &'static str) -> Result<()> {
    if cond && !value.is_nan() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}
