//! Repeated play between the network and the interferer.
//!
//! A round records the leader action the interferer observed, the
//! interferer's reply to it, and the leader's next action. Both utilities of
//! a round are evaluated at the realized pair (observed leader action,
//! interferer reply).

use alloc::vec::Vec;

use crate::error::GameError;
use crate::follower::{check_follower_stationarity, interferer_best_response, utility_interferer, FollowerState};
use crate::leader::{
    check_leader_feasibility, check_leader_stationarity, leader_best_response, utility_wsn, ChannelShift,
    FeasibilityReport, Foresight, LeaderAction, LeaderLagrangian, LeaderOptions, LeaderState, Stationarity,
};
use crate::math::rel_change;
use crate::model::{ChannelState, SystemParams, TagGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GameMode {
    /// The network anticipates the interferer's reaction.
    Stackelberg,
    /// Simultaneous best responses, no anticipation.
    Nash,
}

impl GameMode {
    pub fn name(self) -> &'static str {
        match self {
            GameMode::Stackelberg => "stackelberg",
            GameMode::Nash => "nash",
        }
    }

    pub fn foresight(self) -> Foresight {
        match self {
            GameMode::Stackelberg => Foresight::Anticipating,
            GameMode::Nash => Foresight::Myopic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialActions {
    pub leader: LeaderState,
    pub follower: FollowerState,
}

impl InitialActions {
    /// Leader at half power, `ρ = 0.5`, everyone on the first sub-channel;
    /// silent interferer; every multiplier zero.
    pub fn standard(params: &SystemParams) -> Self {
        InitialActions { leader: LeaderState::initial(params), follower: FollowerState::initial(params) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameOptions {
    pub mode: GameMode,
    pub max_rounds: usize,
    /// Relative utility change below which a round counts as settled.
    pub tolerance: f64,
    /// Hold the time-switching ratio fixed.
    pub fixed_rho: Option<f64>,
}

impl GameOptions {
    pub fn new(mode: GameMode) -> Self {
        GameOptions { mode, max_rounds: 50, tolerance: 1e-6, fixed_rho: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// Starts at 1.
    pub round: usize,
    /// Leader action the interferer responded to this round.
    pub observed_leader: LeaderAction,
    pub follower: FollowerState,
    /// Leader state after its own move this round.
    pub leader: LeaderState,
    /// `U_B` at `(observed_leader, follower)`.
    pub u_b: f64,
    /// `U_I` at `(observed_leader, follower)`.
    pub u_i: f64,
    pub shifts: Vec<ChannelShift>,
    /// Leader primal steps that used the numerical fallback.
    pub fallback_steps: usize,
    pub leader_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GameTrace {
    pub mode: GameMode,
    pub rounds: Vec<RoundRecord>,
    pub converged: bool,
    /// First round after which both utilities stayed put.
    pub converged_round: Option<usize>,
}

impl GameTrace {
    pub fn last(&self) -> Option<&RoundRecord> {
        self.rounds.last()
    }
}

fn settled(prev: &RoundRecord, cur: &RoundRecord, tol: f64) -> bool {
    rel_change(cur.u_b, prev.u_b) < tol && rel_change(cur.u_i, prev.u_i) < tol
}

/// Plays rounds until both utilities change by less than the tolerance
/// across a round, or `max_rounds` is reached.
pub fn play(
    params: &SystemParams,
    channels: &ChannelState,
    initial: &InitialActions,
    options: GameOptions,
) -> Result<GameTrace, GameError> {
    params.validate()?;
    if options.max_rounds == 0 {
        return Err(GameError::InvalidParams { field: "max_rounds", constraint: "at least one round" });
    }
    let leader_options = LeaderOptions { foresight: options.mode.foresight(), fixed_rho: options.fixed_rho };
    let mut leader = initial.leader.clone();
    if let Some(rho) = options.fixed_rho {
        leader.action.rho = rho;
    }
    let mut follower = initial.follower.clone();
    let mut trace = GameTrace { mode: options.mode, rounds: Vec::new(), converged: false, converged_round: None };

    for round in 1..=options.max_rounds {
        let observed = leader.action.clone();
        let reply = interferer_best_response(&observed, channels, params, &follower)?;
        let reply_profile = reply.profile(params);
        let u_b = utility_wsn(&observed, &reply_profile, channels, params)?;
        let u_i = utility_interferer(&observed, &reply_profile, channels, params)?;

        // the leader sees this round's reply when it moves second, the
        // previous one when both move at once
        let seen = match options.mode {
            GameMode::Stackelberg => &reply,
            GameMode::Nash => &follower,
        };
        let outcome =
            leader_best_response(&seen.profile(params), &seen.zeta, channels, params, &leader, leader_options)?;

        let record = RoundRecord {
            round,
            observed_leader: observed,
            follower: reply.clone(),
            leader: outcome.state.clone(),
            u_b,
            u_i,
            shifts: outcome.shifts,
            fallback_steps: outcome.fallback_steps,
            leader_steps: outcome.paths.len(),
        };
        let done = trace.rounds.last().is_some_and(|prev| settled(prev, &record, options.tolerance));
        trace.rounds.push(record);
        leader = outcome.state;
        follower = reply;
        if done {
            trace.converged = true;
            trace.converged_round = Some(round - 1);
            break;
        }
    }
    Ok(trace)
}

/// Stackelberg play on tags placed by `geometry`.
pub fn play_stackelberg(
    params: &SystemParams,
    geometry: &[TagGeometry],
    initial: &InitialActions,
    max_rounds: usize,
) -> Result<GameTrace, GameError> {
    let channels = ChannelState::from_geometry(params, geometry)?;
    play(params, &channels, initial, GameOptions { max_rounds, ..GameOptions::new(GameMode::Stackelberg) })
}

/// Simultaneous-move baseline on tags placed by `geometry`.
pub fn play_nash(
    params: &SystemParams,
    geometry: &[TagGeometry],
    initial: &InitialActions,
    max_rounds: usize,
) -> Result<GameTrace, GameError> {
    let channels = ChannelState::from_geometry(params, geometry)?;
    play(params, &channels, initial, GameOptions { max_rounds, ..GameOptions::new(GameMode::Nash) })
}

/// First round after which every round-to-round relative utility change is
/// below `tol`. Needs at least two rounds.
pub fn convergence_round(trace: &GameTrace, tol: f64) -> Option<usize> {
    let rounds = &trace.rounds;
    if rounds.len() < 2 {
        return None;
    }
    let mut start = None;
    for pair in rounds.windows(2) {
        if settled(&pair[0], &pair[1], tol) {
            start.get_or_insert(pair[0].round);
        } else {
            start = None;
        }
    }
    start
}

/// First-order residual of the interferer at its final power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerResidual {
    pub residual: f64,
    /// `P_I` is on `0` or `P_I,max`.
    pub at_bound: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport {
    /// `None` when the trace never settled; the rest is then last-round
    /// diagnostics only.
    pub equilibrium_round: Option<usize>,
    pub rounds_played: usize,
    pub u_b: f64,
    pub u_i: f64,
    pub leader: LeaderState,
    pub follower: FollowerState,
    pub leader_stationarity: Stationarity,
    pub follower_stationarity: FollowerResidual,
    pub feasibility: FeasibilityReport,
}

/// Convergence round plus final residuals and slacks. The leader's residuals
/// are taken on the Lagrangian it optimized in the last round; feasibility
/// is checked against the last interferer reply.
pub fn detect_equilibrium(
    trace: &GameTrace,
    tol: f64,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<EquilibriumReport, GameError> {
    let last = trace.last().ok_or(GameError::Degenerate("empty trace"))?;
    let profile = last.follower.profile(params);
    let lag = LeaderLagrangian {
        foresight: trace.mode.foresight(),
        delta: &last.leader.action.delta,
        multipliers: &last.leader.multipliers,
        profile,
        zeta: &last.follower.zeta,
        channels,
        params,
    };
    let leader_stationarity = check_leader_stationarity(&lag, &last.leader.action.p_t, last.leader.action.rho)?;
    let follower_residual = check_follower_stationarity(
        last.follower.p_i,
        &last.observed_leader,
        last.follower.attacked_channel,
        channels,
        params,
        &last.follower.zeta,
    )?;
    let at_bound = last.follower.p_i <= 0.0 || last.follower.p_i >= params.p_i_max;
    let feasibility = check_leader_feasibility(&last.leader.action, &profile, channels, params)?;
    Ok(EquilibriumReport {
        equilibrium_round: convergence_round(trace, tol),
        rounds_played: trace.rounds.len(),
        u_b: last.u_b,
        u_i: last.u_i,
        leader: last.leader.clone(),
        follower: last.follower.clone(),
        leader_stationarity,
        follower_stationarity: FollowerResidual { residual: follower_residual, at_bound },
        feasibility,
    })
}
