//! The smart interferer's best response.
//!
//! Given the network's observed action, the interferer maximizes
//! `U_I = −Σ SINR-terms − C_I P_I` subject to `P_I ≤ P_I,max`. The utility is
//! strictly concave in `P_I`, so the first-order condition has a unique
//! root; with a single tag in play it has the water-filling closed form
//! `[(√(l S / (C_I + Σζ)) − N_B)/l]^+`.

use alloc::vec::Vec;

use crate::error::GameError;
use crate::leader::{received_signal, LeaderAction};
use crate::math::{abs, clamp, pos, rel_change, sqrt};
use crate::model::{coefficient_a, split_gain, ChannelState, SystemParams};
use crate::search::decreasing_root;

/// Interference power per sub-channel: full power on the attacked one, a
/// leakage fraction of it everywhere else.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceProfile {
    pub power: f64,
    pub attacked_channel: usize,
    pub leakage: f64,
}

impl InterferenceProfile {
    pub fn silent() -> Self {
        InterferenceProfile { power: 0.0, attacked_channel: 0, leakage: 0.0 }
    }

    pub fn on_channel(&self, k: usize) -> f64 {
        if k == self.attacked_channel {
            self.power
        } else {
            self.leakage * self.power
        }
    }

    fn weight(&self, k: usize) -> f64 {
        if k == self.attacked_channel {
            1.0
        } else {
            self.leakage
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FollowerState {
    pub p_i: f64,
    /// Per-tag multipliers of the power cap; their sum acts on `P_I`.
    pub zeta: Vec<f64>,
    pub attacked_channel: usize,
    pub utility: f64,
    /// Follower iteration counter `T_I`.
    pub iteration: usize,
    pub converged: bool,
}

impl FollowerState {
    /// Silent interferer with zero multipliers.
    pub fn initial(params: &SystemParams) -> Self {
        FollowerState {
            p_i: 0.0,
            zeta: alloc::vec![0.0; params.n_tags],
            attacked_channel: 0,
            utility: f64::NEG_INFINITY,
            iteration: 0,
            converged: false,
        }
    }

    pub fn profile(&self, params: &SystemParams) -> InterferenceProfile {
        InterferenceProfile {
            power: self.p_i,
            attacked_channel: self.attacked_channel,
            leakage: params.leakage_fraction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FollowerMethod {
    /// Water-filling closed form, one tag in play.
    ClosedForm,
    /// Bisection on the summed first-order condition.
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowerOptimum {
    pub power: f64,
    pub method: FollowerMethod,
}

/// One interference term: effective gain `w l` and signal `S = ((1−ρ)/ρ) P_t A`.
struct Term {
    gain: f64,
    signal: f64,
}

fn terms(
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<Vec<Term>, GameError> {
    let q = split_gain(action.rho)?;
    let profile = InterferenceProfile { power: 1.0, attacked_channel, leakage: params.leakage_fraction };
    let mut out = Vec::new();
    for n in 0..action.n_tags() {
        for k in 0..action.delta.n_channels() {
            if !action.delta.get(n, k) {
                continue;
            }
            let w = profile.weight(k);
            let a = coefficient_a(true, params, channels.h(n), channels.time_slot(n));
            out.push(Term { gain: w * channels.l(n), signal: q * action.p_t[n] * a });
        }
    }
    Ok(out)
}

fn has_tag_on(action: &LeaderAction, k: usize) -> bool {
    (0..action.n_tags()).any(|n| action.delta.get(n, k))
}

/// `U_I = −Σ_n δ ((1−ρ)/(ρ t_n)) η h² P_t |ΔΓ|² / (P_I,k l + N_B) − C_I P_I`
pub fn utility_interferer(
    action: &LeaderAction,
    profile: &InterferenceProfile,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<f64, GameError> {
    Ok(-received_signal(action, profile, channels, params)? - params.cost_interferer * profile.power)
}

/// `L_I = U_I + Σ_n ζ_n (P_I,max − P_I)`
pub fn follower_lagrangian(
    p_i: f64,
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<f64, GameError> {
    let profile = InterferenceProfile { power: p_i, attacked_channel, leakage: params.leakage_fraction };
    let u = utility_interferer(action, &profile, channels, params)?;
    Ok(u + zeta.iter().sum::<f64>() * (params.p_i_max - p_i))
}

/// `L_I(to) − L_I(from)` without forming either value, so that the
/// difference stays accurate when tags off the attacked sub-channel add huge
/// constants to `L_I`.
pub fn follower_lagrangian_change(
    from: f64,
    to: f64,
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<f64, GameError> {
    let terms = terms(action, attacked_channel, channels, params)?;
    let noise = params.noise_power;
    let signal: f64 = terms
        .iter()
        .map(|t| t.signal * t.gain * (to - from) / ((t.gain * to + noise) * (t.gain * from + noise)))
        .sum();
    Ok(signal - (params.cost_interferer + zeta.iter().sum::<f64>()) * (to - from))
}

/// Signed first-order residual `∂L_I/∂P_I`:
/// `Σ l S / (P_I l + N_B)² − C_I − Σζ`. Zero at an interior optimum,
/// negative when the optimum sits at `P_I = 0`.
pub fn check_follower_stationarity(
    p_i: f64,
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<f64, GameError> {
    let terms = terms(action, attacked_channel, channels, params)?;
    Ok(marginal(&terms, p_i, params.noise_power) - params.cost_interferer - zeta.iter().sum::<f64>())
}

fn marginal(terms: &[Term], p_i: f64, noise: f64) -> f64 {
    terms
        .iter()
        .map(|t| {
            let x = p_i * t.gain + noise;
            t.gain * t.signal / (x * x)
        })
        .sum()
}

/// `∂²U_I/∂P_I² = −Σ 2 l² S / (P_I l + N_B)³`, strictly negative whenever
/// some tag in play transmits.
pub fn interferer_curvature(
    p_i: f64,
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<f64, GameError> {
    let terms = terms(action, attacked_channel, channels, params)?;
    Ok(-terms
        .iter()
        .map(|t| {
            let x = p_i * t.gain + params.noise_power;
            2.0 * t.gain * t.gain * t.signal / (x * x * x)
        })
        .sum::<f64>())
}

/// Maximizer of `L_I` over `[0, P_I,max]` for a fixed attacked sub-channel.
pub fn optimal_interference_power(
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<FollowerOptimum, GameError> {
    if !has_tag_on(action, attacked_channel) {
        return Err(GameError::Degenerate("no tag allocated to the attacked sub-channel"));
    }
    let price = params.cost_interferer + zeta.iter().sum::<f64>();
    let terms = terms(action, attacked_channel, channels, params)?;
    let live: Vec<&Term> = terms.iter().filter(|t| t.gain > 0.0 && t.signal > 0.0).collect();
    match live.as_slice() {
        [] => Ok(FollowerOptimum { power: 0.0, method: FollowerMethod::ClosedForm }),
        [t] => {
            let level = (sqrt(t.gain * t.signal / price) - params.noise_power) / t.gain;
            Ok(FollowerOptimum { power: clamp(pos(level), 0.0, params.p_i_max), method: FollowerMethod::ClosedForm })
        }
        _ => {
            let noise = params.noise_power;
            let power = decreasing_root(|p| marginal(&terms, p, noise) - price, 0.0, params.p_i_max);
            Ok(FollowerOptimum { power, method: FollowerMethod::Bisection })
        }
    }
}

/// `ζ_n ← [ζ_n − ω_1 (P_I,max − P_I*)]^+`
pub fn update_zeta(zeta: &[f64], p_i_star: f64, params: &SystemParams) -> Vec<f64> {
    let slack = params.p_i_max - p_i_star;
    zeta.iter().map(|&z| pos(z - params.step_sizes.zeta * slack)).collect()
}

/// Sub-channel the interferer attacks: the occupied one where its best
/// power yields the highest utility, lowest index on ties.
pub fn choose_attacked_channel(
    action: &LeaderAction,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
) -> Result<(usize, f64, f64), GameError> {
    let occupied = action.delta.occupied();
    if occupied.is_empty() {
        return Err(GameError::Degenerate("no tag is allocated to any sub-channel"));
    }
    let mut best: Option<(usize, f64, f64)> = None;
    for k in occupied {
        let p = optimal_interference_power(action, k, channels, params, zeta)?.power;
        let profile = InterferenceProfile { power: p, attacked_channel: k, leakage: params.leakage_fraction };
        let u = utility_interferer(action, &profile, channels, params)?;
        if best.is_none_or(|(_, _, bu)| u > bu) {
            best = Some((k, p, u));
        }
    }
    Ok(best.expect("at least one occupied sub-channel"))
}

/// Interferer's iterative best response: alternate the closed-form power
/// with the multiplier update while the utility keeps improving.
///
/// The returned state is the best one seen, starting from `state`
/// re-evaluated against `observed`, so its utility never drops below the
/// incoming state's. `converged` is false when the iteration cap was hit.
pub fn interferer_best_response(
    observed: &LeaderAction,
    channels: &ChannelState,
    params: &SystemParams,
    state: &FollowerState,
) -> Result<FollowerState, GameError> {
    let settings = &params.solver;
    let (channel, _, _) = choose_attacked_channel(observed, channels, params, &state.zeta)?;

    let mut best = state.clone();
    best.utility = utility_interferer(observed, &state.profile(params), channels, params)?;
    best.iteration = 0;
    best.converged = false;

    let mut zeta = state.zeta.clone();
    let mut previous = best.utility;
    for iteration in 1..=settings.max_iterations {
        let p = optimal_interference_power(observed, channel, channels, params, &zeta)?.power;
        let profile = InterferenceProfile { power: p, attacked_channel: channel, leakage: params.leakage_fraction };
        let u = utility_interferer(observed, &profile, channels, params)?;
        let next_zeta = update_zeta(&zeta, p, params);
        if u > best.utility + settings.tolerance * abs(best.utility) {
            best = FollowerState {
                p_i: p,
                zeta: next_zeta.clone(),
                attacked_channel: channel,
                utility: u,
                iteration,
                converged: false,
            };
        }
        best.iteration = iteration;
        let stalled = u <= previous || rel_change(u, previous) <= settings.tolerance;
        if stalled && zeta == next_zeta {
            best.converged = true;
            return Ok(best);
        }
        previous = u;
        zeta = next_zeta;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leader::SubchannelMatrix;
    use alloc::vec;

    /// One tag with `l = 1` and signal `S` set through the transmit power.
    fn single_tag(signal: f64, noise: f64) -> (SystemParams, ChannelState, LeaderAction) {
        let mut p = SystemParams::paper_defaults(1);
        p.noise_power = noise;
        p.p_i_max = 10.0;
        let ch = ChannelState::from_raw(vec![core::f64::consts::FRAC_1_SQRT_2], vec![1.0]);
        let a = coefficient_a(true, &p, ch.h(0), 1.0);
        let action = LeaderAction {
            p_t: vec![signal / a],
            rho: 0.5,
            delta: SubchannelMatrix::all_on(1, p.n_channels, 0),
        };
        (p, ch, action)
    }

    #[test]
    fn silent_network_costs_only_power() {
        let (p, ch, mut action) = single_tag(1.0, 0.1);
        action.p_t = vec![0.0];
        let profile = InterferenceProfile { power: 0.7, attacked_channel: 0, leakage: 0.0 };
        let u = utility_interferer(&action, &profile, &ch, &p).unwrap();
        assert!((u + 0.7).abs() < 1e-15);
    }

    #[test]
    fn utility_direct_substitution() {
        let (p, ch, action) = single_tag(1.0, 0.1);
        let profile = InterferenceProfile { power: 0.9, attacked_channel: 0, leakage: 0.0 };
        let u = utility_interferer(&action, &profile, &ch, &p).unwrap();
        assert!((u + 1.9).abs() < 1e-12, "{u}");
    }

    #[test]
    fn closed_form_single_tag() {
        let (p, ch, action) = single_tag(1.0, 0.1);
        let opt = optimal_interference_power(&action, 0, &ch, &p, &[0.0]).unwrap();
        assert_eq!(opt.method, FollowerMethod::ClosedForm);
        assert!((opt.power - 0.9).abs() < 1e-12);
        let r = check_follower_stationarity(opt.power, &action, 0, &ch, &p, &[0.0]).unwrap();
        assert!(r.abs() < 1e-12);
    }

    #[test]
    fn weak_signal_clamps_to_zero() {
        let (p, ch, action) = single_tag(1e-4, 0.1);
        let opt = optimal_interference_power(&action, 0, &ch, &p, &[0.0]).unwrap();
        assert_eq!(opt.power, 0.0);
        assert!(check_follower_stationarity(0.0, &action, 0, &ch, &p, &[0.0]).unwrap() < 0.0);
    }

    #[test]
    fn residual_negative_above_optimum() {
        let (p, ch, action) = single_tag(1.0, 0.1);
        assert!(check_follower_stationarity(5.0, &action, 0, &ch, &p, &[0.0]).unwrap() < 0.0);
    }

    #[test]
    fn empty_attacked_channel_is_degenerate() {
        let (p, ch, action) = single_tag(1.0, 0.1);
        assert!(matches!(
            optimal_interference_power(&action, 3, &ch, &p, &[0.0]),
            Err(GameError::Degenerate(_))
        ));
    }

    #[test]
    fn zeta_update_cases() {
        let mut p = SystemParams::paper_defaults(2);
        p.p_i_max = 1.0;
        p.step_sizes.zeta = 0.1;
        assert_eq!(update_zeta(&[0.3, 0.0], 1.0, &p), vec![0.3, 0.0]);
        assert_eq!(update_zeta(&[0.0, 0.0], 0.4, &p), vec![0.0, 0.0]);
        let z = update_zeta(&[0.5], 0.2, &p);
        assert!((z[0] - 0.42).abs() < 1e-15);
    }

    #[test]
    fn best_response_to_silence_is_silence() {
        let (p, ch, mut action) = single_tag(1.0, 0.1);
        action.p_t = vec![0.0];
        let mut start = FollowerState::initial(&p);
        start.p_i = 2.0;
        let out = interferer_best_response(&action, &ch, &p, &start).unwrap();
        assert_eq!(out.p_i, 0.0);
        assert!(out.converged);
    }

    #[test]
    fn best_response_reaches_closed_form_at_final_zeta() {
        let (p, ch, action) = single_tag(1.0, 0.1);
        let mut start = FollowerState::initial(&p);
        start.zeta = vec![0.4];
        let out = interferer_best_response(&action, &ch, &p, &start).unwrap();
        assert!(out.converged);
        let closed = optimal_interference_power(&action, 0, &ch, &p, &out.zeta).unwrap().power;
        assert!((out.p_i - closed).abs() < 1e-12);
        assert!(out.utility >= utility_interferer(&action, &start.profile(&p), &ch, &p).unwrap());
    }

    #[test]
    fn curvature_negative() {
        let (p, ch, action) = single_tag(1.0, 0.1);
        assert!(interferer_curvature(0.3, &action, 0, &ch, &p).unwrap() < 0.0);
    }
}
