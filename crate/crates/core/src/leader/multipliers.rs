use alloc::vec::Vec;

use crate::error::GameError;
use crate::follower::InterferenceProfile;
use crate::math::pos;
use crate::model::{backscatter_power, harvested_energy, sinr, ChannelState, SystemParams};

use super::state::{LeaderAction, LeaderMultipliers};

/// Constraint quantities after a primal step, as the multiplier updates
/// consume them.
#[derive(Debug, Clone, PartialEq)]
pub struct StepQuantities {
    /// Active sub-channel per tag.
    pub active: Vec<Option<usize>>,
    /// SINR on the active sub-channel.
    pub sinr: Vec<f64>,
    pub p_t: Vec<f64>,
    /// Harvested energy `E_n`.
    pub energy: Vec<f64>,
    /// Backscatter requirement `ρ T P_B,TH t_n`.
    pub energy_required: Vec<f64>,
    /// `η h_n P_t,n − η T P_EH,TH`
    pub harvest_margin: Vec<f64>,
    pub rho: f64,
}

impl StepQuantities {
    /// Quantities of `action` under the interference `profile`.
    pub fn observe(
        action: &LeaderAction,
        profile: &InterferenceProfile,
        channels: &ChannelState,
        params: &SystemParams,
    ) -> Result<Self, GameError> {
        let n_tags = action.n_tags();
        let mut q = StepQuantities {
            active: Vec::with_capacity(n_tags),
            sinr: Vec::with_capacity(n_tags),
            p_t: action.p_t.clone(),
            energy: Vec::with_capacity(n_tags),
            energy_required: Vec::with_capacity(n_tags),
            harvest_margin: Vec::with_capacity(n_tags),
            rho: action.rho,
        };
        for n in 0..n_tags {
            let h = channels.h(n);
            let t_n = channels.time_slot(n);
            let k = action.delta.active(n);
            let e = harvested_energy(params, action.rho, h, action.p_t[n])?;
            let s = match k {
                Some(k) if action.rho > 0.0 => {
                    let p_b = backscatter_power(e, action.rho, params, t_n)?;
                    sinr(true, p_b, h, params, profile.on_channel(k), channels.l(n))
                }
                _ => 0.0,
            };
            q.active.push(k);
            q.sinr.push(s);
            q.energy.push(e);
            q.energy_required.push(action.rho * params.block_time * params.backscatter_power_threshold * t_n);
            q.harvest_margin
                .push(params.eta * h * action.p_t[n] - params.eta * params.block_time * params.harvest_power_threshold);
        }
        Ok(q)
    }
}

/// Projected gradient step on every multiplier family. Only the entries of
/// each tag's active sub-channel move for the per-channel families.
pub fn update_leader_multipliers(
    m: &LeaderMultipliers,
    q: &StepQuantities,
    params: &SystemParams,
) -> LeaderMultipliers {
    let w = &params.step_sizes;
    let mut out = m.clone();
    for n in 0..q.p_t.len() {
        if let Some(k) = q.active[n] {
            out.alpha.set(n, k, pos(m.alpha.get(n, k) - w.alpha * (q.sinr[n] - params.sinr_threshold)));
            out.gamma.set(n, k, pos(m.gamma.get(n, k) - w.gamma * q.harvest_margin[n]));
        }
        out.beta[n] = pos(m.beta[n] - w.beta * (params.p_t_max - q.p_t[n]));
        out.mu[n] = pos(m.mu[n] - w.mu * (q.energy[n] - q.energy_required[n]));
    }
    out.tau = pos(m.tau - w.tau * q.rho);
    out.nu = pos(m.nu - w.nu * (1.0 - q.rho));
    out
}
