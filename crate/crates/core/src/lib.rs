//! Leader/follower power-control game between a backscatter wireless sensor
//! network and a smart interferer.
//!
//! The network (leader) picks per-tag H-AP transmit powers, a network-wide
//! time-switching ratio and a sub-channel per tag. The interferer (follower)
//! observes that choice and picks a jamming power on one sub-channel. Both
//! players solve their problems by Lagrangian dual decomposition: closed-form
//! primal steps followed by projected multiplier updates.
//!
//! Module map:
//!
//!  * [`units`] and [`model`]: unit conversion, scenario constants, and the
//!    deterministic link budget (Friis gains, harvested energy, backscatter
//!    power, SINR).
//!  * [`follower`]: the interferer's utility, water-filling style best power,
//!    multiplier update and best-response loop.
//!  * [`leader`]: the network's utility, sub-channel shifting, closed-form
//!    power and time-switching steps, multiplier updates, feasibility and
//!    stationarity checks.
//!  * [`game`]: alternating Stackelberg play and the simultaneous-move Nash
//!    baseline, plus equilibrium detection.
//!  * [`oracle`]: brute-force grid maximizers and finite-difference Hessians
//!    used to certify the closed forms.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
mod math;

pub mod follower;
pub mod game;
pub mod leader;
pub mod model;
pub mod oracle;
pub mod search;
pub mod units;

pub use error::{ConstraintKind, GameError};
pub use follower::{FollowerState, InterferenceProfile};
pub use game::{EquilibriumReport, GameMode, GameOptions, GameTrace, InitialActions, RoundRecord};
pub use leader::{Foresight, LeaderAction, LeaderMultipliers, LeaderState, SubchannelMatrix};
pub use model::{ChannelState, SolverSettings, StepSizes, SystemParams, TagGeometry};
