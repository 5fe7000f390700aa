use alloc::vec::Vec;

use crate::error::GameError;
use crate::math::sqrt;
use crate::model::{coefficient_a, split_gain};

use super::utility::LeaderLagrangian;

/// Composite coefficients of the network's Lagrangian at one point
/// `(P_t, ρ)`. Never cached: recompute whenever the state moves.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderCoefficients {
    /// `A_n` on the tag's active sub-channel.
    pub a: Vec<f64>,
    /// `B_n = l_n P_t,n A_n`
    pub b: Vec<f64>,
    /// `C_n = C_I + ζ_n`
    pub c: Vec<f64>,
    /// Marginal price of power,
    /// `C_B + β_n − μ_n η (1−ρ) T h_n − γ_n η h_n`.
    pub d: Vec<f64>,
    /// `1 + α_n` on the active sub-channel.
    pub weight: Vec<f64>,
    /// Marginal price of `ρ`, `Σ μ_n (η T h_n P_t,n + t_n T P_B,TH) + ν − τ`.
    pub e: f64,
    /// `Σ (1 + α_n) √(C_n A_n P_t,n / l_n)`
    pub w: f64,
    /// Quartic constant `w² / (4 e²)`.
    pub f: f64,
    /// Ferrari resolvent `4 S²` of `ρ⁴ − ρ³ + f = 0`; NaN without real roots.
    pub g: f64,
    /// Per-tag `η (ρ − 1) h_n (μ_n T + γ_n) − C_B − β_n`, as typeset.
    pub printed_d: Vec<f64>,
    /// Per-tag `η h_n T P_t,n + t_n T P_B,TH + ν − τ`, as typeset.
    pub printed_e: Vec<f64>,
}

impl LeaderCoefficients {
    pub fn compute(lag: &LeaderLagrangian<'_>, p_t: &[f64], rho: f64) -> Result<Self, GameError> {
        split_gain(rho)?;
        let params = lag.params;
        let m = lag.multipliers;
        let t = params.block_time;
        let n_tags = p_t.len();
        let mut out = LeaderCoefficients {
            a: Vec::with_capacity(n_tags),
            b: Vec::with_capacity(n_tags),
            c: Vec::with_capacity(n_tags),
            d: Vec::with_capacity(n_tags),
            weight: Vec::with_capacity(n_tags),
            e: m.nu - m.tau,
            w: 0.0,
            f: 0.0,
            g: f64::NAN,
            printed_d: Vec::with_capacity(n_tags),
            printed_e: Vec::with_capacity(n_tags),
        };
        for (n, &p) in p_t.iter().enumerate() {
            let k = lag.delta.active(n).ok_or(GameError::Degenerate("tag without a single active sub-channel"))?;
            let h = lag.channels.h(n);
            let l = lag.channels.l(n);
            let t_n = lag.channels.time_slot(n);
            let a = coefficient_a(true, params, h, t_n);
            let c = params.cost_interferer + lag.zeta.get(n).copied().unwrap_or(0.0);
            let alpha = m.alpha.get(n, k);
            let gamma = m.gamma.get(n, k);
            let d = params.cost_wsn + m.beta[n] - m.mu[n] * params.eta * (1.0 - rho) * t * h - gamma * params.eta * h;
            out.a.push(a);
            out.b.push(l * p * a);
            out.c.push(c);
            out.d.push(d);
            out.weight.push(1.0 + alpha);
            out.e += m.mu[n] * (params.eta * t * h * p + t_n * t * params.backscatter_power_threshold);
            out.w += (1.0 + alpha) * sqrt(c * a * p / l);
            out.printed_d
                .push(params.eta * (rho - 1.0) * h * (m.mu[n] * t + gamma) - params.cost_wsn - m.beta[n]);
            out.printed_e
                .push(params.eta * h * t * p + t_n * t * params.backscatter_power_threshold + m.nu - m.tau);
        }
        out.f = out.w * out.w / (4.0 * out.e * out.e);
        out.g = ferrari_resolvent(out.f);
        Ok(out)
    }
}

/// `4 S²` for `ρ⁴ − ρ³ + f = 0`, NaN when no real root exists.
pub(crate) fn ferrari_resolvent(f: f64) -> f64 {
    match ferrari_s(f) {
        Some(s) => 4.0 * s * s,
        None => f64::NAN,
    }
}

pub(crate) const QUARTIC_LIMIT: f64 = 27.0 / 256.0;

pub(crate) fn ferrari_s(f: f64) -> Option<f64> {
    if !(f > 0.0 && f <= QUARTIC_LIMIT) {
        return None;
    }
    let disc = crate::math::pos(81.0 - 768.0 * f);
    let q = crate::math::cbrt((27.0 * f + 3.0 * f * sqrt(disc)) / 2.0);
    if !(q > 0.0) {
        return None;
    }
    Some(0.5 * sqrt(0.25 + (q + 12.0 * f / q) / 3.0))
}
