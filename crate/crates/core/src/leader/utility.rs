use crate::error::GameError;
use crate::follower::{choose_attacked_channel, InterferenceProfile};
use crate::math::sqrt;
use crate::model::{coefficient_a, split_gain, ChannelState, SystemParams};

use super::state::{LeaderAction, LeaderMultipliers, SubchannelMatrix};
use super::Foresight;

/// `Σ_k Σ_n δ ((1−ρ)/(ρ t_n)) η h² P_t |ΔΓ|² / (P_I,k l + N_B)`, the sum of
/// received SINRs.
pub fn received_signal(
    action: &LeaderAction,
    profile: &InterferenceProfile,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<f64, GameError> {
    if action.n_tags() != channels.n_tags() || action.delta.n_tags() != action.n_tags() {
        return Err(GameError::Degenerate("action and channel dimensions differ"));
    }
    let q = split_gain(action.rho)?;
    let mut total = 0.0;
    for n in 0..action.n_tags() {
        let a = coefficient_a(true, params, channels.h(n), channels.time_slot(n));
        for k in 0..action.delta.n_channels() {
            if action.delta.get(n, k) {
                let x = profile.on_channel(k) * channels.l(n) + params.noise_power;
                total += q * action.p_t[n] * a / x;
            }
        }
    }
    Ok(total)
}

/// `U_B`: summed SINR minus `C_B Σ_n P_t,n`.
pub fn utility_wsn(
    action: &LeaderAction,
    profile: &InterferenceProfile,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<f64, GameError> {
    let cost: f64 = action.p_t.iter().sum::<f64>() * params.cost_wsn;
    Ok(received_signal(action, profile, channels, params)? - cost)
}

/// The interference the follower would answer `action` with, given its
/// multipliers `zeta`: best sub-channel and best power on it.
pub fn anticipated_response(
    action: &LeaderAction,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<InterferenceProfile, GameError> {
    let (k, p, _) = choose_attacked_channel(action, channels, params, zeta)?;
    Ok(InterferenceProfile { power: p, attacked_channel: k, leakage: params.leakage_fraction })
}

/// `U_B` evaluated at the follower's reaction to `action`.
pub fn anticipated_utility_wsn(
    action: &LeaderAction,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<f64, GameError> {
    let profile = anticipated_response(action, channels, params, zeta)?;
    utility_wsn(action, &profile, channels, params)
}

/// The network's Lagrangian at fixed sub-channels and multipliers.
///
/// With [`Foresight::Anticipating`] each tag's SINR is replaced by its value
/// at the interferer's water-filling response, `√(C_n A P (1−ρ)/(ρ l))`;
/// with [`Foresight::Myopic`] the observed interference is held fixed. The
/// Lagrangian separates over tags at fixed `ρ`, which the grid oracle uses.
#[derive(Debug, Clone, Copy)]
pub struct LeaderLagrangian<'a> {
    pub foresight: Foresight,
    pub delta: &'a SubchannelMatrix,
    pub multipliers: &'a LeaderMultipliers,
    pub profile: InterferenceProfile,
    pub zeta: &'a [f64],
    pub channels: &'a ChannelState,
    pub params: &'a SystemParams,
}

impl LeaderLagrangian<'_> {
    fn active(&self, n: usize) -> Result<usize, GameError> {
        self.delta.active(n).ok_or(GameError::Degenerate("tag without a single active sub-channel"))
    }

    /// SINR of tag `n` as seen by this Lagrangian.
    pub fn tag_sinr(&self, n: usize, p: f64, rho: f64) -> Result<f64, GameError> {
        let k = self.active(n)?;
        let q = split_gain(rho)?;
        let a = coefficient_a(true, self.params, self.channels.h(n), self.channels.time_slot(n));
        let l = self.channels.l(n);
        Ok(match self.foresight {
            Foresight::Anticipating => {
                let c = self.params.cost_interferer + self.zeta.get(n).copied().unwrap_or(0.0);
                sqrt(c * a * p * q / l)
            }
            Foresight::Myopic => q * p * a / (self.profile.on_channel(k) * l + self.params.noise_power),
        })
    }

    /// Every term of the Lagrangian that involves tag `n`.
    pub fn tag_term(&self, n: usize, p: f64, rho: f64) -> Result<f64, GameError> {
        let k = self.active(n)?;
        let m = self.multipliers;
        let params = self.params;
        let h = self.channels.h(n);
        let t_n = self.channels.time_slot(n);
        let alpha = m.alpha.get(n, k);
        let gamma = m.gamma.get(n, k);
        let energy = params.eta * (1.0 - rho) * params.block_time * h * p;
        Ok((1.0 + alpha) * self.tag_sinr(n, p, rho)? - params.cost_wsn * p
            + m.beta[n] * (params.p_t_max - p)
            + m.mu[n] * (energy - rho * params.block_time * params.backscatter_power_threshold * t_n)
            + gamma * (params.eta * h * p - params.eta * params.block_time * params.harvest_power_threshold)
            - alpha * params.sinr_threshold)
    }

    /// `ν (1 − ρ) + τ ρ`
    pub fn common_term(&self, rho: f64) -> f64 {
        self.multipliers.nu * (1.0 - rho) + self.multipliers.tau * rho
    }

    pub fn value(&self, p_t: &[f64], rho: f64) -> Result<f64, GameError> {
        let mut total = self.common_term(rho);
        for (n, &p) in p_t.iter().enumerate() {
            total += self.tag_term(n, p, rho)?;
        }
        Ok(total)
    }
}
