//! The network's side of the game: utility, sub-channel shifting, the
//! closed-form primal step, multiplier updates and the best-response loop.

mod best_response;
mod coefficients;
mod feasibility;
mod multipliers;
mod primal;
mod state;
mod subchannel;
mod utility;

pub use best_response::{leader_best_response, leader_objective, LeaderOptions, LeaderOutcome};
pub use coefficients::LeaderCoefficients;
pub use feasibility::{check_leader_feasibility, ConstraintSlack, FeasibilityReport};
pub use multipliers::{update_leader_multipliers, StepQuantities};
pub use primal::{
    check_leader_stationarity, corrected_time_switching, optimal_time_switching, optimal_transmit_power,
    primal_step, primal_step_fixed_rho, printed_time_switching, printed_transmit_power, quartic_roots, PrimalPath,
    PrimalStep, Stationarity, StationarityResidual, TimeSwitchingChoice,
};
pub use state::{LeaderAction, LeaderMultipliers, LeaderState, SubchannelMatrix, TagChannelValues};
pub use subchannel::{allocate_subchannel, required_power, ChannelShift};
pub use utility::{anticipated_response, anticipated_utility_wsn, received_signal, utility_wsn, LeaderLagrangian};

/// Whether the network substitutes the interferer's reaction into its own
/// objective (Stackelberg) or treats the observed interference as fixed
/// (the simultaneous-move baseline).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Foresight {
    Anticipating,
    Myopic,
}
