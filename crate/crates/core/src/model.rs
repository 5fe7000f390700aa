//! Scenario constants and the deterministic link budget shared by both
//! players. Everything here is linear SI: watts, joules, seconds, meters.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::GameError;
use crate::math::abs;
use crate::units::{db_to_linear, dbm_to_watts, wavelength};

/// Gradient step sizes, one per multiplier family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSizes {
    /// Interferer power-cap multiplier.
    pub zeta: f64,
    /// SINR threshold.
    pub alpha: f64,
    /// H-AP power cap.
    pub beta: f64,
    /// Backscatter energy threshold.
    pub mu: f64,
    /// Lower bound on the time-switching ratio.
    pub tau: f64,
    /// Upper bound on the time-switching ratio.
    pub nu: f64,
    /// Harvest threshold.
    pub gamma: f64,
}

impl StepSizes {
    pub fn as_array(&self) -> [f64; 7] {
        [self.zeta, self.alpha, self.beta, self.mu, self.tau, self.nu, self.gamma]
    }

    pub fn from_array(w: [f64; 7]) -> Self {
        StepSizes { zeta: w[0], alpha: w[1], beta: w[2], mu: w[3], tau: w[4], nu: w[5], gamma: w[6] }
    }
}

impl Default for StepSizes {
    // The constraint slacks live on very different scales (SINR ~ 10,
    // powers ~ 0.1 W, energies ~ 1e-6 J), so the steps do too.
    fn default() -> Self {
        StepSizes { zeta: 0.1, alpha: 0.01, beta: 1.0, mu: 1e9, tau: 0.1, nu: 0.1, gamma: 1e9 }
    }
}

/// Iteration limits and tolerances for both solvers and the game loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Primal projection interval for the time-switching ratio is
    /// `[rho_min, 1 - rho_min]`.
    pub rho_min: f64,
    pub max_iterations: usize,
    /// Relative utility change treated as "no improvement".
    pub tolerance: f64,
    /// Relative stationarity residual accepted for a closed-form step.
    pub stationarity_tolerance: f64,
    /// Relative constraint violation still reported as feasible.
    pub feasibility_tolerance: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            rho_min: 1e-3,
            max_iterations: 500,
            tolerance: 1e-9,
            stationarity_tolerance: 1e-5,
            feasibility_tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// Energy-harvesting efficiency, (0, 1].
    pub eta: f64,
    /// Block transmission time T, seconds.
    pub block_time: f64,
    pub n_tags: usize,
    pub n_channels: usize,
    pub gamma0: f64,
    pub gamma1: f64,
    pub noise_power: f64,
    pub cost_interferer: f64,
    pub cost_wsn: f64,
    /// Linear SINR threshold.
    pub sinr_threshold: f64,
    /// Minimum tag input power for backscattering, watts.
    pub backscatter_power_threshold: f64,
    /// Minimum harvested power, watts.
    pub harvest_power_threshold: f64,
    pub p_t_max: f64,
    pub p_i_max: f64,
    pub gain_hap_tx: f64,
    pub gain_tag: f64,
    pub gain_interferer: f64,
    pub wavelength_hap: f64,
    pub wavelength_interferer: f64,
    pub step_sizes: StepSizes,
    /// Fraction of the interference power landing on sub-channels other
    /// than the attacked one, [0, 1).
    pub leakage_fraction: f64,
    pub solver: SolverSettings,
}

impl SystemParams {
    /// The published numeric scenario: 2.4 GHz, 6 dBi H-AP and interferer
    /// antennas, 1.8 dBi tags, -18 dBm backscatter and -22 dBm harvest
    /// thresholds, 10 dB SINR threshold, 20 dBm / 30 dBm power caps,
    /// unit costs, K = 14 sub-channels.
    pub fn paper_defaults(n_tags: usize) -> Self {
        let lambda = wavelength(2.4e9);
        SystemParams {
            eta: 0.5,
            block_time: 1.0,
            n_tags,
            n_channels: 14,
            gamma0: 1.0,
            gamma1: -1.0,
            noise_power: dbm_to_watts(-90.0),
            cost_interferer: 1.0,
            cost_wsn: 1.0,
            sinr_threshold: db_to_linear(10.0),
            backscatter_power_threshold: dbm_to_watts(-18.0),
            harvest_power_threshold: dbm_to_watts(-22.0),
            p_t_max: dbm_to_watts(20.0),
            p_i_max: dbm_to_watts(30.0),
            gain_hap_tx: db_to_linear(6.0),
            gain_tag: db_to_linear(1.8),
            gain_interferer: db_to_linear(6.0),
            wavelength_hap: lambda,
            wavelength_interferer: lambda,
            step_sizes: StepSizes::default(),
            leakage_fraction: 0.0,
            solver: SolverSettings::default(),
        }
    }

    /// `|Γ0 − Γ1|²`
    pub fn reflection_gain(&self) -> f64 {
        let d = self.gamma0 - self.gamma1;
        d * d
    }

    /// Equal TDMA share `t_n = 1/N`.
    pub fn time_slot(&self) -> f64 {
        1.0 / self.n_tags as f64
    }

    pub fn validate(&self) -> Result<(), GameError> {
        fn positive(field: &'static str, v: f64) -> Result<(), GameError> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(GameError::InvalidParams { field, constraint: "a positive finite value" })
            }
        }
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(GameError::InvalidParams { field: "eta", constraint: "eta in (0,1]" });
        }
        positive("block_time", self.block_time)?;
        if self.n_tags == 0 {
            return Err(GameError::InvalidParams { field: "n_tags", constraint: "at least one tag" });
        }
        if self.n_channels == 0 {
            return Err(GameError::InvalidParams {
                field: "n_channels",
                constraint: "at least one sub-channel",
            });
        }
        if !(self.gamma0.is_finite() && self.gamma1.is_finite()) {
            return Err(GameError::InvalidParams {
                field: "gamma0/gamma1",
                constraint: "finite reflection coefficients",
            });
        }
        if self.reflection_gain() <= 0.0 {
            return Err(GameError::Degenerate("reflection coefficients are equal"));
        }
        positive("noise_power", self.noise_power)?;
        positive("cost_interferer", self.cost_interferer)?;
        positive("cost_wsn", self.cost_wsn)?;
        positive("sinr_threshold", self.sinr_threshold)?;
        positive("backscatter_power_threshold", self.backscatter_power_threshold)?;
        positive("harvest_power_threshold", self.harvest_power_threshold)?;
        positive("p_t_max", self.p_t_max)?;
        positive("p_i_max", self.p_i_max)?;
        positive("gain_hap_tx", self.gain_hap_tx)?;
        positive("gain_tag", self.gain_tag)?;
        positive("gain_interferer", self.gain_interferer)?;
        positive("wavelength_hap", self.wavelength_hap)?;
        positive("wavelength_interferer", self.wavelength_interferer)?;
        let names = ["omega1", "omega2", "omega3", "omega4", "omega5", "omega6", "omega7"];
        for (name, w) in names.iter().zip(self.step_sizes.as_array()) {
            positive(name, w)?;
        }
        if !(self.leakage_fraction >= 0.0 && self.leakage_fraction < 1.0) {
            return Err(GameError::InvalidParams {
                field: "leakage_fraction",
                constraint: "leakage_fraction in [0,1)",
            });
        }
        let s = &self.solver;
        if !(s.rho_min > 0.0 && s.rho_min < 0.5) {
            return Err(GameError::InvalidParams { field: "rho_min", constraint: "rho_min in (0,0.5)" });
        }
        if s.max_iterations == 0 {
            return Err(GameError::InvalidParams {
                field: "max_iterations",
                constraint: "at least one iteration",
            });
        }
        positive("tolerance", s.tolerance)?;
        positive("stationarity_tolerance", s.stationarity_tolerance)?;
        positive("feasibility_tolerance", s.feasibility_tolerance)?;
        Ok(())
    }
}

/// Placement of one tag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TagGeometry {
    /// Distance H-AP to tag, meters.
    pub r_hap: f64,
    /// Distance interferer to tag, meters.
    pub r_interferer: f64,
    /// TDMA share, always `1/N`.
    pub time_slot: f64,
}

impl TagGeometry {
    /// One entry per `(r_hap, r_interferer)` pair, all with `t_n = 1/N`.
    pub fn equal_slots(distances: &[(f64, f64)]) -> Vec<TagGeometry> {
        let slot = 1.0 / distances.len() as f64;
        distances
            .iter()
            .map(|&(r_hap, r_interferer)| TagGeometry { r_hap, r_interferer, time_slot: slot })
            .collect()
    }
}

/// Per-tag channel gains, derived from geometry and never set directly.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelState {
    h: Vec<f64>,
    l: Vec<f64>,
    time_slot: Vec<f64>,
}

impl ChannelState {
    pub fn from_geometry(params: &SystemParams, tags: &[TagGeometry]) -> Result<Self, GameError> {
        if tags.len() != params.n_tags {
            return Err(GameError::Degenerate("tag geometry count differs from n_tags"));
        }
        let slot = params.time_slot();
        let mut h = Vec::with_capacity(tags.len());
        let mut l = Vec::with_capacity(tags.len());
        let mut time_slot = Vec::with_capacity(tags.len());
        for tag in tags {
            if abs(tag.time_slot - slot) > 1e-12 * slot {
                return Err(GameError::InvalidParams {
                    field: "time_slot",
                    constraint: "time_slot = 1/N for every tag",
                });
            }
            h.push(channel_gain_hap(params, tag.r_hap)?);
            l.push(channel_gain_interferer(params, tag.r_interferer)?);
            time_slot.push(tag.time_slot);
        }
        Ok(ChannelState { h, l, time_slot })
    }

    /// Gains set directly, bypassing geometry; unit tests only.
    #[cfg(test)]
    pub(crate) fn from_raw(h: Vec<f64>, l: Vec<f64>) -> Self {
        let slot = 1.0 / h.len() as f64;
        let time_slot = alloc::vec![slot; h.len()];
        ChannelState { h, l, time_slot }
    }

    pub fn n_tags(&self) -> usize {
        self.h.len()
    }

    /// Forward gain H-AP to tag.
    pub fn h(&self, n: usize) -> f64 {
        self.h[n]
    }

    /// Interference gain interferer to tag.
    pub fn l(&self, n: usize) -> f64 {
        self.l[n]
    }

    pub fn time_slot(&self, n: usize) -> f64 {
        self.time_slot[n]
    }

    pub fn forward_gains(&self) -> &[f64] {
        &self.h
    }

    pub fn interference_gains(&self) -> &[f64] {
        &self.l
    }
}

fn friis(gain_a: f64, gain_b: f64, lambda: f64, r: f64) -> Result<f64, GameError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(GameError::InvalidGeometry { distance: r });
    }
    let spread = 4.0 * PI * r;
    Ok(gain_a * gain_b * lambda * lambda / (spread * spread))
}

/// `G_t G_r λ_B² / (4π r)²`
pub fn channel_gain_hap(params: &SystemParams, r: f64) -> Result<f64, GameError> {
    friis(params.gain_hap_tx, params.gain_tag, params.wavelength_hap, r)
}

/// `G_i G_t λ_j² / (4π r)²`. The receive-side gain is the H-AP antenna gain
/// `G_t`, matching the published link model.
pub fn channel_gain_interferer(params: &SystemParams, r: f64) -> Result<f64, GameError> {
    friis(params.gain_interferer, params.gain_hap_tx, params.wavelength_interferer, r)
}

fn check_ratio(rho: f64) -> Result<(), GameError> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(GameError::Domain { quantity: "time-switching ratio", value: rho })
    }
}

/// Energy harvested during `(1 − ρ)T`: `η (1 − ρ) T h P_t`.
pub fn harvested_energy(params: &SystemParams, rho: f64, h: f64, p_t: f64) -> Result<f64, GameError> {
    check_ratio(rho)?;
    Ok(params.eta * (1.0 - rho) * params.block_time * h * p_t)
}

/// Average backscatter power over the tag's slot: `E_n / (ρ T t_n)`.
pub fn backscatter_power(e_n: f64, rho: f64, params: &SystemParams, t_n: f64) -> Result<f64, GameError> {
    check_ratio(rho)?;
    if rho == 0.0 {
        return Err(GameError::Domain { quantity: "time-switching ratio (no backscatter time)", value: rho });
    }
    if t_n <= 0.0 {
        return Err(GameError::Domain { quantity: "time slot", value: t_n });
    }
    Ok(e_n / (rho * params.block_time * t_n))
}

/// `δ P_B h |Γ0 − Γ1|² / (P_I l + N_B)`
pub fn sinr(delta: bool, p_b: f64, h: f64, params: &SystemParams, p_i: f64, l: f64) -> f64 {
    if !delta {
        return 0.0;
    }
    p_b * h * params.reflection_gain() / (p_i * l + params.noise_power)
}

/// `A_{k,n} = δ η h² |Γ0 − Γ1|² / t_n`; the only place this composite is
/// formed.
pub fn coefficient_a(delta: bool, params: &SystemParams, h: f64, t_n: f64) -> f64 {
    if !delta {
        return 0.0;
    }
    params.eta * h * h * params.reflection_gain() / t_n
}

/// `(1 − ρ)/ρ`, the factor the harvest/backscatter split applies to the
/// received signal.
pub fn split_gain(rho: f64) -> Result<f64, GameError> {
    check_ratio(rho)?;
    if rho == 0.0 {
        return Err(GameError::Domain { quantity: "time-switching ratio (no backscatter time)", value: rho });
    }
    Ok((1.0 - rho) / rho)
}
