use alloc::vec::Vec;

use crate::error::GameError;
use crate::follower::InterferenceProfile;
use crate::model::{coefficient_a, split_gain, ChannelState, SystemParams};

use super::state::{LeaderAction, SubchannelMatrix};

/// A tag moved to another sub-channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelShift {
    pub tag: usize,
    /// `None` when the tag's indicator row was not single-valued.
    pub from: Option<usize>,
    pub to: usize,
}

/// H-AP power that puts tag `n` exactly at the SINR threshold on
/// sub-channel `k` under `profile`.
pub fn required_power(
    n: usize,
    k: usize,
    rho: f64,
    channels: &ChannelState,
    params: &SystemParams,
    profile: &InterferenceProfile,
) -> Result<f64, GameError> {
    let q = split_gain(rho)?;
    let a = coefficient_a(true, params, channels.h(n), channels.time_slot(n));
    let x = profile.on_channel(k) * channels.l(n) + params.noise_power;
    Ok(params.sinr_threshold * x / (q * a))
}

/// Sub-channel with the highest SINR for tag `n`, i.e. the least
/// interference; lowest index on ties.
fn best_channel(n: usize, channels: &ChannelState, params: &SystemParams, profile: &InterferenceProfile) -> usize {
    let mut best = 0;
    let mut best_x = f64::INFINITY;
    for k in 0..params.n_channels {
        let x = profile.on_channel(k) * channels.l(n) + params.noise_power;
        if x < best_x {
            best_x = x;
            best = k;
        }
    }
    best
}

/// Moves every tag whose required power on its current sub-channel exceeds
/// `P_t,max` to its best sub-channel. Tags without a single active
/// sub-channel are reassigned the same way. The returned matrix always has
/// exactly one indicator per tag.
pub fn allocate_subchannel(
    action: &LeaderAction,
    channels: &ChannelState,
    params: &SystemParams,
    profile: &InterferenceProfile,
) -> Result<(SubchannelMatrix, Vec<ChannelShift>), GameError> {
    let mut delta = action.delta.clone();
    let mut shifts = Vec::new();
    for n in 0..action.n_tags() {
        let current = action.delta.active(n);
        let overloaded = match current {
            Some(k) => required_power(n, k, action.rho, channels, params, profile)? > params.p_t_max,
            None => true,
        };
        if !overloaded {
            continue;
        }
        let target = best_channel(n, channels, params, profile);
        if current != Some(target) {
            delta.assign(n, target);
            shifts.push(ChannelShift { tag: n, from: current, to: target });
        }
    }
    Ok((delta, shifts))
}
