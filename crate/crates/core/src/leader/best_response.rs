use alloc::vec::Vec;

use crate::error::{ConstraintKind, GameError};
use crate::follower::InterferenceProfile;
use crate::math::abs;
use crate::model::{ChannelState, SystemParams};

use super::feasibility::{check_leader_feasibility, ConstraintSlack};
use super::multipliers::{update_leader_multipliers, StepQuantities};
use super::primal::{check_leader_stationarity, primal_step, primal_step_fixed_rho, PrimalPath};
use super::state::{LeaderAction, LeaderState};
use super::subchannel::{allocate_subchannel, ChannelShift};
use super::utility::{anticipated_utility_wsn, utility_wsn, LeaderLagrangian};
use super::Foresight;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeaderOptions {
    pub foresight: Foresight,
    /// Hold `ρ` at this value instead of optimizing it.
    pub fixed_rho: Option<f64>,
}

impl LeaderOptions {
    pub fn stackelberg() -> Self {
        LeaderOptions { foresight: Foresight::Anticipating, fixed_rho: None }
    }

    pub fn nash() -> Self {
        LeaderOptions { foresight: Foresight::Myopic, fixed_rho: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeaderOutcome {
    pub state: LeaderState,
    /// Sub-channel moves made before the power/ratio iteration.
    pub shifts: Vec<ChannelShift>,
    /// Objective value of every accepted action, in order.
    pub accepted: Vec<f64>,
    /// Paths of every primal step, `(power, ρ)`.
    pub paths: Vec<(PrimalPath, PrimalPath)>,
    /// Largest relative first-order residual over the interior coordinates
    /// of every primal step, aligned with `paths`.
    pub step_residuals: Vec<f64>,
    /// Primal steps that needed the numerical fallback.
    pub fallback_steps: usize,
}

/// What the network maximizes: its utility at the interferer's reaction
/// (anticipating) or at the observed interference (myopic).
pub fn leader_objective(
    action: &LeaderAction,
    foresight: Foresight,
    observed: &InterferenceProfile,
    zeta: &[f64],
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<f64, GameError> {
    match foresight {
        Foresight::Anticipating => anticipated_utility_wsn(action, channels, params, zeta),
        Foresight::Myopic => utility_wsn(action, observed, channels, params),
    }
}

fn infeasible(s: ConstraintSlack) -> GameError {
    GameError::Infeasible { constraint: s.kind, tag: s.tag, slack: s.slack }
}

/// The network's best response to the observed interference.
///
/// Shifts overloaded tags to cleaner sub-channels, then alternates the
/// primal step with projected multiplier updates. A candidate is accepted
/// only if it satisfies every constraint under the observed interference and
/// strictly improves the objective; the incoming action, after the shift, is
/// the first candidate. The loop ends when the multipliers stop moving
/// (`converged`) or at the iteration cap.
pub fn leader_best_response(
    observed: &InterferenceProfile,
    zeta: &[f64],
    channels: &ChannelState,
    params: &SystemParams,
    state: &LeaderState,
    options: LeaderOptions,
) -> Result<LeaderOutcome, GameError> {
    let settings = &params.solver;
    let tol = settings.feasibility_tolerance;
    for n in 0..channels.n_tags() {
        let slack = (channels.h(n) * params.p_t_max - params.harvest_power_threshold) / params.harvest_power_threshold;
        if slack < -tol {
            return Err(GameError::Infeasible { constraint: ConstraintKind::HarvestThreshold, tag: Some(n), slack });
        }
    }
    let (delta, shifts) = allocate_subchannel(&state.action, channels, params, observed)?;
    let objective = |a: &LeaderAction| leader_objective(a, options.foresight, observed, zeta, channels, params);

    let mut current = LeaderAction {
        p_t: state.action.p_t.clone(),
        rho: options.fixed_rho.unwrap_or(state.action.rho),
        delta: delta.clone(),
    };
    let mut best: Option<(LeaderAction, f64)> = None;
    let mut worst_violation: Option<ConstraintSlack> = None;
    let mut accepted = Vec::new();
    let mut consider = |a: &LeaderAction,
                        best: &mut Option<(LeaderAction, f64)>,
                        accepted: &mut Vec<f64>|
     -> Result<(), GameError> {
        let report = check_leader_feasibility(a, observed, channels, params)?;
        if !report.is_feasible(tol) {
            let v = report.most_violated().expect("nonempty report");
            if worst_violation.is_none_or(|w| v.slack > w.slack) {
                // keep the least-bad violation seen: it names the constraint
                // that could not be met even at the best attempt
                worst_violation = Some(v);
            }
            return Ok(());
        }
        let u = objective(a)?;
        let improves = match best {
            None => true,
            Some((_, bu)) => u > *bu + settings.tolerance * abs(*bu),
        };
        if improves {
            *best = Some((a.clone(), u));
            accepted.push(u);
        }
        Ok(())
    };
    consider(&current, &mut best, &mut accepted)?;

    let mut multipliers = state.multipliers.clone();
    let mut paths = Vec::new();
    let mut step_residuals = Vec::new();
    let mut fallback_steps = 0;
    let mut converged = false;
    let mut iteration = 0;
    while iteration < settings.max_iterations {
        iteration += 1;
        let lag = LeaderLagrangian {
            foresight: options.foresight,
            delta: &delta,
            multipliers: &multipliers,
            profile: *observed,
            zeta,
            channels,
            params,
        };
        let step = match options.fixed_rho {
            Some(rho) => primal_step_fixed_rho(&lag, &current.p_t, rho)?,
            None => primal_step(&lag, &current.p_t, current.rho)?,
        };
        paths.push((step.power_path, step.rho_path));
        step_residuals.push(check_leader_stationarity(&lag, &step.p_t, step.rho)?.max_relative());
        if step.used_fallback() {
            fallback_steps += 1;
        }
        current = LeaderAction { p_t: step.p_t, rho: step.rho, delta: delta.clone() };
        consider(&current, &mut best, &mut accepted)?;

        let q = StepQuantities::observe(&current, observed, channels, params)?;
        let next = update_leader_multipliers(&multipliers, &q, params);
        let moved = next.max_abs_diff(&multipliers);
        multipliers = next;
        if moved == 0.0 {
            converged = true;
            break;
        }
    }

    let (action, utility) = match best {
        Some(b) => b,
        None => {
            let v = worst_violation.expect("an infeasible candidate was recorded");
            return Err(infeasible(v));
        }
    };
    Ok(LeaderOutcome {
        state: LeaderState { action, multipliers, utility, iteration, converged },
        shifts,
        accepted,
        paths,
        step_residuals,
        fallback_steps,
    })
}
