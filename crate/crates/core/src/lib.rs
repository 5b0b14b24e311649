//! Make-to-stock energy queues, the BS–RPS supply game and multi-BS
//! capacity allocation.
//!
//! * [`queue`]: stored-energy and backlog analytics for the make-to-stock queue.
//! * [`game`]: equilibrium, centralized benchmark, contracts and the power split.
//! * [`alloc`]: per-BS demand, allocation mechanisms and truthfulness audits.
//! * [`sim`]: discrete-event simulation of the outstanding-order queue.
//!
//! Batch workloads (replications, audits, sweeps) run through [`Execution`],
//! which uses rayon when the `parallel` feature is on.

pub mod alloc;
pub mod error;
pub mod exec;
pub mod game;
pub mod params;
pub mod queue;
pub mod sim;
pub mod solve;

pub use error::{Error, Result};
pub use exec::Execution;
pub use game::GameInstance;
pub use params::{normalize, NormalizedParams, StrategyPair, SystemParams};
