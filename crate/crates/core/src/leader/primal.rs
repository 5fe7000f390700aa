//! Primal step of the network's dual decomposition: transmit powers and the
//! time-switching ratio at fixed multipliers and sub-channels.
//!
//! The typeset closed forms are tried first. Every candidate must pass the
//! first-order check of the Lagrangian; if it does not, the algebraically
//! corrected closed forms are used, and only when those fail too the step
//! falls back to a one-dimensional numerical search.

use alloc::vec::Vec;

use crate::error::GameError;
use crate::math::{abs, cbrt, clamp, pos, powf, sqrt};
use crate::model::{coefficient_a, split_gain};
use crate::search::{golden_max, scan_then_golden};

use super::coefficients::{ferrari_s, LeaderCoefficients};
use super::utility::LeaderLagrangian;
use super::Foresight;

/// How a primal coordinate was obtained. Ordered by how much it deviates
/// from the analytic solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PrimalPath {
    /// The typeset closed form passed the first-order check.
    Printed,
    /// The optimum is at a bound of the box, certified by the sign of the
    /// derivative.
    Boundary,
    /// The corrected closed form passed the first-order check.
    ClosedForm,
    /// One-dimensional numerical maximization.
    Numeric,
}

impl PrimalPath {
    pub fn is_fallback(self) -> bool {
        self == PrimalPath::Numeric
    }

    pub fn name(self) -> &'static str {
        match self {
            PrimalPath::Printed => "printed",
            PrimalPath::Boundary => "boundary",
            PrimalPath::ClosedForm => "closed_form",
            PrimalPath::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSwitchingChoice {
    pub rho: f64,
    pub path: PrimalPath,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrimalStep {
    pub p_t: Vec<f64>,
    pub rho: f64,
    /// Worst path over all tags.
    pub power_path: PrimalPath,
    pub rho_path: PrimalPath,
    /// Lagrangian value at `(p_t, rho)`.
    pub lagrangian: f64,
}

impl PrimalStep {
    pub fn used_fallback(&self) -> bool {
        self.power_path.is_fallback() || self.rho_path.is_fallback()
    }
}

/// One first-order residual.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StationarityResidual {
    Interior {
        residual: f64,
        /// `|residual|` over the larger of the two competing terms.
        relative: f64,
    },
    /// The coordinate sits on a bound; the residual contract does not apply.
    Boundary { residual: f64 },
}

impl StationarityResidual {
    fn new(lead: f64, price: f64, at_bound: bool) -> Self {
        let residual = lead - price;
        if at_bound {
            return StationarityResidual::Boundary { residual };
        }
        let scale = abs(lead).max(abs(price));
        let relative = if scale > 0.0 { abs(residual) / scale } else { 0.0 };
        StationarityResidual::Interior { residual, relative }
    }

    pub fn relative(&self) -> Option<f64> {
        match self {
            StationarityResidual::Interior { relative, .. } => Some(*relative),
            StationarityResidual::Boundary { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stationarity {
    /// `∂L/∂P_t,n` per tag.
    pub power: Vec<StationarityResidual>,
    /// `∂L/∂ρ`
    pub rho: StationarityResidual,
}

impl Stationarity {
    /// Largest relative residual over the interior coordinates.
    pub fn max_relative(&self) -> f64 {
        self.power
            .iter()
            .chain(core::iter::once(&self.rho))
            .filter_map(|r| r.relative())
            .fold(0.0, f64::max)
    }
}

/// `[C/(A l (1−ρ)) ((1+α)(1−ρ)A/(2E))²]^+`, exactly as typeset.
pub fn printed_transmit_power(c: f64, a: f64, l: f64, rho: f64, alpha: f64, e: f64) -> f64 {
    let inner = (1.0 + alpha) * (1.0 - rho) * a / (2.0 * e);
    pos(c / (a * l * (1.0 - rho)) * inner * inner)
}

/// The typeset quartic-root expression for `ρ*` with its intermediate `G`.
/// `None` whenever an intermediate leaves the reals.
pub fn printed_time_switching(f: f64) -> Option<f64> {
    if !(f > 0.0 && f.is_finite()) {
        return None;
    }
    let c2 = cbrt(2.0);
    let root = sqrt(768.0 * f + 81.0);
    let g = 0.25 - c2 * 12.0 * f / cbrt(f * (3.0 * root - 27.0)) + cbrt(-27.0 * f + 3.0 * f * root) / (3.0 * c2);
    if !(g > 0.0 && g.is_finite()) {
        return None;
    }
    let rho = pos(-0.25 + 0.5 * (sqrt(g) - (0.5 - g - powf(g, -0.25))));
    rho.is_finite().then_some(rho)
}

/// Real roots `ρ1 < 3/4 < ρ2` of `ρ⁴ − ρ³ + f = 0` on `(0, 1)`; `ρ2` is
/// the local maximizer of the Lagrangian in `ρ`, `ρ1` a local minimizer.
pub fn quartic_roots(f: f64) -> Option<(f64, f64)> {
    let s = ferrari_s(f)?;
    let spread = 0.75 - 4.0 * s * s + 1.0 / (8.0 * s);
    if spread < 0.0 {
        return None;
    }
    let half = 0.5 * sqrt(spread);
    Some((0.25 + s - half, 0.25 + s + half))
}

struct TagConsts {
    a: f64,
    c: f64,
    l: f64,
    weight: f64,
    /// Observed `P_I,k l + N_B`.
    x: f64,
}

fn tag_consts(lag: &LeaderLagrangian<'_>, n: usize) -> Result<TagConsts, GameError> {
    let k = lag.delta.active(n).ok_or(GameError::Degenerate("tag without a single active sub-channel"))?;
    let l = lag.channels.l(n);
    Ok(TagConsts {
        a: coefficient_a(true, lag.params, lag.channels.h(n), lag.channels.time_slot(n)),
        c: lag.params.cost_interferer + lag.zeta.get(n).copied().unwrap_or(0.0),
        l,
        weight: 1.0 + lag.multipliers.alpha.get(n, k),
        x: lag.profile.on_channel(k) * l + lag.params.noise_power,
    })
}

fn tag_price(lag: &LeaderLagrangian<'_>, n: usize, rho: f64) -> Result<f64, GameError> {
    let k = lag.delta.active(n).ok_or(GameError::Degenerate("tag without a single active sub-channel"))?;
    let p = lag.params;
    let m = lag.multipliers;
    let h = lag.channels.h(n);
    Ok(p.cost_wsn + m.beta[n]
        - m.mu[n] * p.eta * (1.0 - rho) * p.block_time * h
        - m.gamma.get(n, k) * p.eta * h)
}

fn rho_price(lag: &LeaderLagrangian<'_>, p_t: &[f64]) -> f64 {
    let p = lag.params;
    let m = lag.multipliers;
    let mut e = m.nu - m.tau;
    for (n, &pt) in p_t.iter().enumerate() {
        let h = lag.channels.h(n);
        e += m.mu[n] * (p.eta * p.block_time * h * pt + lag.channels.time_slot(n) * p.block_time * p.backscatter_power_threshold);
    }
    e
}

/// Marginal signal value of power for tag `n`, the leading term of
/// `∂L/∂P_t,n`.
fn power_lead(lag: &LeaderLagrangian<'_>, t: &TagConsts, p: f64, q: f64) -> f64 {
    match lag.foresight {
        Foresight::Anticipating => t.weight * 0.5 * sqrt(t.c * t.a * q / (t.l * p)),
        Foresight::Myopic => t.weight * q * t.a / t.x,
    }
}

/// Magnitude of the signal's derivative in `ρ`, the leading term of
/// `−∂L/∂ρ`.
fn rho_lead(lag: &LeaderLagrangian<'_>, p_t: &[f64], rho: f64) -> Result<f64, GameError> {
    let mut lead = 0.0;
    for (n, &p) in p_t.iter().enumerate() {
        let t = tag_consts(lag, n)?;
        lead += match lag.foresight {
            Foresight::Anticipating => {
                t.weight * sqrt(t.c * t.a * p / t.l) / (2.0 * powf(rho, 1.5) * sqrt(1.0 - rho))
            }
            Foresight::Myopic => t.weight * p * t.a / (t.x * rho * rho),
        };
    }
    Ok(lead)
}

fn near(a: f64, b: f64) -> bool {
    abs(a - b) <= 1e-12 * abs(a).max(abs(b)).max(1e-300)
}

fn rho_bounds(lag: &LeaderLagrangian<'_>) -> (f64, f64) {
    let lo = lag.params.solver.rho_min;
    (lo, 1.0 - lo)
}

/// First-order residuals of the network's Lagrangian at `(p_t, rho)`:
/// `∂L/∂P_t,n` and `∂L/∂ρ`, each flagged when its coordinate is on a bound.
pub fn check_leader_stationarity(
    lag: &LeaderLagrangian<'_>,
    p_t: &[f64],
    rho: f64,
) -> Result<Stationarity, GameError> {
    let q = split_gain(rho)?;
    let (lo, hi) = rho_bounds(lag);
    let mut power = Vec::with_capacity(p_t.len());
    for (n, &p) in p_t.iter().enumerate() {
        let t = tag_consts(lag, n)?;
        let at_bound = p <= 0.0 || near(p, lag.params.p_t_max) || p > lag.params.p_t_max;
        let lead = if p > 0.0 { power_lead(lag, &t, p, q) } else { f64::INFINITY };
        power.push(StationarityResidual::new(lead, tag_price(lag, n, rho)?, at_bound));
    }
    let at_bound = rho <= lo || rho >= hi || near(rho, lo) || near(rho, hi);
    // ∂L/∂ρ = −lead − e
    let lead = rho_lead(lag, p_t, rho)?;
    let e = rho_price(lag, p_t);
    let rho = StationarityResidual::new(-e, lead, at_bound);
    Ok(Stationarity { power, rho })
}

/// Whether `p` is consistent with the first-order conditions of a concave
/// function on `[0, cap]`.
fn power_kkt_holds(lead: f64, price: f64, p: f64, cap: f64, tol: f64) -> bool {
    let r = StationarityResidual::new(lead, price, false);
    let StationarityResidual::Interior { residual, relative } = r else { return false };
    if !residual.is_finite() {
        return p >= cap && residual > 0.0;
    }
    if p <= 0.0 {
        residual <= 0.0 || relative <= tol
    } else if p >= cap {
        residual >= 0.0 || relative <= tol
    } else {
        relative <= tol
    }
}

/// Maximizer of the Lagrangian in `P_t,n` at fixed `ρ`, per tag.
pub fn optimal_transmit_power(
    lag: &LeaderLagrangian<'_>,
    p_current: &[f64],
    rho: f64,
) -> Result<(Vec<f64>, PrimalPath), GameError> {
    let q = split_gain(rho)?;
    let cap = lag.params.p_t_max;
    let tol = lag.params.solver.stationarity_tolerance;
    let coeffs = LeaderCoefficients::compute(lag, p_current, rho)?;
    let mut out = Vec::with_capacity(p_current.len());
    let mut worst = PrimalPath::Printed;
    for n in 0..p_current.len() {
        let t = tag_consts(lag, n)?;
        let d = tag_price(lag, n, rho)?;
        let holds = |p: f64| {
            let lead = if p > 0.0 { power_lead(lag, &t, p, q) } else { f64::INFINITY };
            power_kkt_holds(lead, d, p, cap, tol)
        };
        let (p, path) = match lag.foresight {
            Foresight::Myopic => {
                // linear in P: bang-bang
                let p = if power_lead(lag, &t, 1.0, q) - d > 0.0 { cap } else { 0.0 };
                (p, PrimalPath::Boundary)
            }
            Foresight::Anticipating => {
                let printed = clamp(
                    printed_transmit_power(t.c, t.a, t.l, rho, t.weight - 1.0, coeffs.printed_e[n]),
                    0.0,
                    cap,
                );
                if printed.is_finite() && holds(printed) {
                    (printed, PrimalPath::Printed)
                } else {
                    let corrected = if d <= 0.0 {
                        cap
                    } else {
                        t.weight * t.weight * t.c * t.a * q / (4.0 * t.l * d * d)
                    };
                    let corrected = clamp(corrected, 0.0, cap);
                    if holds(corrected) {
                        let path = if corrected >= cap { PrimalPath::Boundary } else { PrimalPath::ClosedForm };
                        (corrected, path)
                    } else {
                        let f = |p: f64| lag.tag_term(n, p, rho).unwrap_or(f64::NEG_INFINITY);
                        let (p, _) = golden_max(f, 0.0, cap, 1e-12 * cap);
                        (p, PrimalPath::Numeric)
                    }
                }
            }
        };
        worst = worst.max(path);
        out.push(p);
    }
    Ok((out, worst))
}

fn best_of(lag: &LeaderLagrangian<'_>, p_t: &[f64], candidates: &[f64]) -> Result<(f64, f64), GameError> {
    let mut best = (candidates[0], lag.value(p_t, candidates[0])?);
    for &r in &candidates[1..] {
        let v = lag.value(p_t, r)?;
        if v > best.1 {
            best = (r, v);
        }
    }
    Ok(best)
}

/// Corrected closed form for `ρ*`: the larger quartic root when the
/// Lagrangian has an interior local maximum in `ρ`, compared against both
/// bounds of `[ρ_min, 1 − ρ_min]`.
pub fn corrected_time_switching(lag: &LeaderLagrangian<'_>, p_t: &[f64]) -> Result<TimeSwitchingChoice, GameError> {
    let (lo, hi) = rho_bounds(lag);
    let (edge, edge_value) = best_of(lag, p_t, &[lo, hi])?;
    let coeffs = LeaderCoefficients::compute(lag, p_t, 0.5)?;
    if coeffs.e < 0.0 && coeffs.w > 0.0 {
        if let Some((_, r2)) = quartic_roots(coeffs.f) {
            if r2 > lo && r2 < hi && lag.value(p_t, r2)? > edge_value {
                return Ok(TimeSwitchingChoice { rho: r2, path: PrimalPath::ClosedForm });
            }
        }
    }
    Ok(TimeSwitchingChoice { rho: edge, path: PrimalPath::Boundary })
}

fn rho_residual_ok(lag: &LeaderLagrangian<'_>, p_t: &[f64], rho: f64) -> Result<bool, GameError> {
    let tol = lag.params.solver.stationarity_tolerance;
    let lead = rho_lead(lag, p_t, rho)?;
    let e = rho_price(lag, p_t);
    Ok(StationarityResidual::new(-e, lead, false).relative().is_some_and(|r| r <= tol))
}

/// Whether `rho` on a bound is certified by the derivative's sign.
fn rho_edge_ok(lag: &LeaderLagrangian<'_>, p_t: &[f64], rho: f64) -> Result<bool, GameError> {
    let (lo, _) = rho_bounds(lag);
    let slope = -rho_lead(lag, p_t, rho)? - rho_price(lag, p_t);
    Ok(if rho <= lo { slope <= 0.0 } else { slope >= 0.0 })
}

/// Maximizer of the Lagrangian in `ρ` at fixed powers.
pub fn optimal_time_switching(lag: &LeaderLagrangian<'_>, p_t: &[f64]) -> Result<TimeSwitchingChoice, GameError> {
    let (lo, hi) = rho_bounds(lag);
    if lag.foresight == Foresight::Myopic {
        // convex in ρ, so the maximum is on a bound
        let (rho, _) = best_of(lag, p_t, &[lo, hi])?;
        return Ok(TimeSwitchingChoice { rho, path: PrimalPath::Boundary });
    }
    let coeffs = LeaderCoefficients::compute(lag, p_t, 0.5)?;
    let (_, edge_value) = best_of(lag, p_t, &[lo, hi])?;
    if coeffs.e < 0.0 && coeffs.w > 0.0 {
        if let Some(r) = printed_time_switching(coeffs.f) {
            if r > lo && r < hi && rho_residual_ok(lag, p_t, r)? && lag.value(p_t, r)? >= edge_value {
                return Ok(TimeSwitchingChoice { rho: r, path: PrimalPath::Printed });
            }
        }
    }
    let choice = corrected_time_switching(lag, p_t)?;
    let certified = match choice.path {
        PrimalPath::ClosedForm => rho_residual_ok(lag, p_t, choice.rho)?,
        _ => rho_edge_ok(lag, p_t, choice.rho)?,
    };
    if certified {
        return Ok(choice);
    }
    let f = |r: f64| lag.value(p_t, r).unwrap_or(f64::NEG_INFINITY);
    let (rho, _) = scan_then_golden(f, lo, hi, 400, 1e-12);
    Ok(TimeSwitchingChoice { rho, path: PrimalPath::Numeric })
}

fn settle(lag: &LeaderLagrangian<'_>, p_start: &[f64], rho_start: f64) -> Result<PrimalStep, GameError> {
    let (lo, hi) = rho_bounds(lag);
    let mut rho = clamp(rho_start, lo, hi);
    let mut p_t: Vec<f64> = p_start.to_vec();
    let mut power_path = PrimalPath::Printed;
    let mut rho_path = PrimalPath::Printed;
    for _ in 0..100 {
        let (p_next, pp) = optimal_transmit_power(lag, &p_t, rho)?;
        let choice = optimal_time_switching(lag, &p_next)?;
        let still = near(choice.rho, rho) && p_next.iter().zip(&p_t).all(|(a, b)| near(*a, *b));
        p_t = p_next;
        rho = choice.rho;
        power_path = pp;
        rho_path = choice.path;
        if still {
            break;
        }
    }
    let lagrangian = lag.value(&p_t, rho)?;
    Ok(PrimalStep { p_t, rho, power_path, rho_path, lagrangian })
}

fn pinned(lag: &LeaderLagrangian<'_>, p_start: &[f64], rho: f64) -> Result<PrimalStep, GameError> {
    let (p_t, power_path) = optimal_transmit_power(lag, p_start, rho)?;
    let rho_path = if rho_edge_ok(lag, &p_t, rho)? { PrimalPath::Boundary } else { PrimalPath::Numeric };
    let lagrangian = lag.value(&p_t, rho)?;
    Ok(PrimalStep { p_t, rho, power_path, rho_path, lagrangian })
}

/// Joint maximizer of the Lagrangian over `(P_t, ρ)`.
///
/// Alternates the two coordinate maximizations from the starting point and
/// compares the result with the best powers on each bound of `ρ`; the joint
/// objective is not concave in `ρ`, so the coordinate fixed point alone can
/// be a saddle.
pub fn primal_step(lag: &LeaderLagrangian<'_>, p_start: &[f64], rho_start: f64) -> Result<PrimalStep, GameError> {
    let (lo, hi) = rho_bounds(lag);
    let mut best = settle(lag, p_start, rho_start)?;
    for edge in [lo, hi] {
        let cand = pinned(lag, p_start, edge)?;
        if cand.lagrangian > best.lagrangian {
            best = cand;
        }
    }
    Ok(best)
}

/// Primal step with `ρ` held fixed.
pub fn primal_step_fixed_rho(lag: &LeaderLagrangian<'_>, p_start: &[f64], rho: f64) -> Result<PrimalStep, GameError> {
    let (p_t, power_path) = optimal_transmit_power(lag, p_start, rho)?;
    let lagrangian = lag.value(&p_t, rho)?;
    Ok(PrimalStep { p_t, rho, power_path, rho_path: PrimalPath::Boundary, lagrangian })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::follower::InterferenceProfile;
    use crate::leader::{LeaderMultipliers, SubchannelMatrix};
    use crate::model::{ChannelState, SystemParams, TagGeometry};

    #[test]
    fn printed_power_example() {
        assert!((printed_transmit_power(1.0, 1.0, 1.0, 0.5, 0.0, 0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn printed_power_grows_with_alpha() {
        let mut last = 0.0;
        for i in 0..10 {
            let p = printed_transmit_power(1.0, 1.0, 1.0, 0.5, i as f64, 0.5);
            assert!(p > last);
            last = p;
        }
    }

    #[test]
    fn quartic_roots_solve_the_quartic() {
        for &f in &[1e-6, 1e-3, 0.05, 0.1, 0.105] {
            let (r1, r2) = quartic_roots(f).unwrap();
            assert!(r1 < 0.75 && r2 > 0.75);
            for r in [r1, r2] {
                assert!((r.powi(4) - r.powi(3) + f).abs() < 1e-14);
            }
        }
        assert!(quartic_roots(0.2).is_none());
        assert!(quartic_roots(0.0).is_none());
    }

    #[test]
    fn printed_rho_leaves_the_reals() {
        for &f in &[1e-3, 0.05, 0.1] {
            assert!(printed_time_switching(f).is_none());
        }
    }

    fn scenario(n: usize) -> (SystemParams, ChannelState, SubchannelMatrix) {
        let p = SystemParams::paper_defaults(n);
        let d: Vec<(f64, f64)> = (0..n).map(|i| (1.0 + 0.5 * i as f64, 10.0)).collect();
        let ch = ChannelState::from_geometry(&p, &TagGeometry::equal_slots(&d)).unwrap();
        let delta = SubchannelMatrix::all_on(n, p.n_channels, 0);
        (p, ch, delta)
    }

    #[test]
    fn interior_power_passes_its_residual() {
        let (mut p, ch, delta) = scenario(2);
        p.cost_wsn = 1e3;
        let m = LeaderMultipliers::zeros(2, p.n_channels);
        let zeta = [0.0, 0.0];
        let lag = LeaderLagrangian {
            foresight: Foresight::Anticipating,
            delta: &delta,
            multipliers: &m,
            profile: InterferenceProfile::silent(),
            zeta: &zeta,
            channels: &ch,
            params: &p,
        };
        let (pt, path) = optimal_transmit_power(&lag, &[0.05, 0.05], 0.3).unwrap();
        assert_eq!(path, PrimalPath::ClosedForm);
        assert!(pt.iter().all(|&x| x > 0.0 && x < p.p_t_max));
        let st = check_leader_stationarity(&lag, &pt, 0.3).unwrap();
        for r in &st.power {
            assert!(r.relative().unwrap() < 1e-10);
        }
        // above the stationary value the residual turns negative
        let above: Vec<f64> = pt.iter().map(|x| x * 1.5).collect();
        let st = check_leader_stationarity(&lag, &above, 0.3).unwrap();
        for r in &st.power {
            let StationarityResidual::Interior { residual, .. } = r else { panic!() };
            assert!(*residual < 0.0);
        }
    }

    #[test]
    fn quartic_root_is_a_local_max_but_the_edge_wins() {
        let (p, ch, delta) = scenario(1);
        let zero = LeaderMultipliers::zeros(1, p.n_channels);
        let lag0 = LeaderLagrangian {
            foresight: Foresight::Anticipating,
            delta: &delta,
            multipliers: &zero,
            profile: InterferenceProfile::silent(),
            zeta: &[0.0],
            channels: &ch,
            params: &p,
        };
        let w = LeaderCoefficients::compute(&lag0, &[0.01], 0.5).unwrap().w;
        // choose τ so that f = 0.05
        let mut m = zero.clone();
        m.tau = w / (2.0 * 0.05f64.sqrt());
        let lag = LeaderLagrangian { multipliers: &m, ..lag0 };
        assert!((LeaderCoefficients::compute(&lag, &[0.01], 0.5).unwrap().f - 0.05).abs() < 1e-12);
        let (_, r2) = quartic_roots(0.05).unwrap();
        let st = check_leader_stationarity(&lag, &[0.01], r2).unwrap();
        assert!(st.rho.relative().unwrap() < 1e-8);
        let v = |r: f64| lag.value(&[0.01], r).unwrap();
        assert!(v(r2) > v(r2 - 1e-3) && v(r2) > v(r2 + 1e-3));
        // the signal term blows up as ρ → 0, so the lower edge is global
        let choice = optimal_time_switching(&lag, &[0.01]).unwrap();
        assert_eq!(choice.path, PrimalPath::Boundary);
        assert_eq!(choice.rho, p.solver.rho_min);
        assert!(v(choice.rho) > v(r2));
    }

    #[test]
    fn myopic_powers_are_bang_bang() {
        let (p, ch, delta) = scenario(3);
        let m = LeaderMultipliers::zeros(3, p.n_channels);
        let zeta = [0.0; 3];
        let lag = LeaderLagrangian {
            foresight: Foresight::Myopic,
            delta: &delta,
            multipliers: &m,
            profile: InterferenceProfile { power: 1.0, attacked_channel: 0, leakage: 0.0 },
            zeta: &zeta,
            channels: &ch,
            params: &p,
        };
        let (pt, path) = optimal_transmit_power(&lag, &[0.05; 3], 0.5).unwrap();
        assert_eq!(path, PrimalPath::Boundary);
        assert!(pt.iter().all(|&x| x == 0.0 || x == p.p_t_max));
        let step = primal_step(&lag, &[0.05; 3], 0.5).unwrap();
        assert!(step.rho == p.solver.rho_min || step.rho == 1.0 - p.solver.rho_min);
    }

    #[test]
    fn joint_step_beats_its_start() {
        let (p, ch, delta) = scenario(3);
        let m = LeaderMultipliers::zeros(3, p.n_channels);
        let zeta = [0.0; 3];
        let lag = LeaderLagrangian {
            foresight: Foresight::Anticipating,
            delta: &delta,
            multipliers: &m,
            profile: InterferenceProfile::silent(),
            zeta: &zeta,
            channels: &ch,
            params: &p,
        };
        let start = [0.05; 3];
        let step = primal_step(&lag, &start, 0.5).unwrap();
        assert!(step.lagrangian >= lag.value(&start, 0.5).unwrap());
        assert!(!step.used_fallback());
    }
}
