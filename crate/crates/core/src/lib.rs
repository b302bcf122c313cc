//! Speed-robust scheduling: pack jobs into bags before machine speeds are
//! known, then assign bags to machines once the speeds are revealed.
//!
//! * [`sand`]: infinitely divisible jobs, geometric bag sizes, and the
//!   matching lower-bound probe.
//! * [`pebbles`]: small jobs, greedy packing under the same bound plus `q`.
//! * [`bricks`]: unit jobs, the coin-accounting construction at `ρ = 8/5`
//!   and the dispatcher that falls back to pebbles for many jobs.
//! * [`second_stage`]: the greedy, integral and exact bag-to-machine
//!   assigners.
//! * [`verify`]: campaigns that check the guarantees on finite grids.
//!
//! All arithmetic is exact.

pub mod bricks;
pub mod error;
pub mod model;
pub mod numerics;
pub mod pebbles;
pub mod sand;
pub mod second_stage;
pub mod verify;

pub use bricks::{brick_rho, robust_bags, Branch, RobustBags, BRICKS_LAMBDA_LIMIT};
pub use error::{Error, Result};
pub use model::{makespan, Assignment, BagProfile, FractionalSolution, Instance, SpeedProfile};
pub use numerics::Rational;
pub use pebbles::{pebble_q, pebbles_bags, PebblesResult};
pub use sand::{adversary_configs, lower_bound_probe, rho_bar, sand_bags, ProbeResult, SandSequence};
pub use second_stage::{
    greedy_assignment, integral_assignment, optimal_direct, optimal_second_stage, AssignmentFailure, AssignmentTrace,
};
pub use verify::{Failure, VerificationReport};
