//! Brute-force verifiers: refined grid maximizers and finite-difference
//! Hessians. They only evaluate utilities and Lagrangians, never the
//! closed-form solvers.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::GameError;
use crate::follower::{follower_lagrangian, follower_lagrangian_change};
use crate::leader::{LeaderAction, LeaderLagrangian};
use crate::math::abs;
use crate::model::{ChannelState, SystemParams};

/// Uniform grid on `[lower, upper]`, refined `refinements` times around the
/// best point, each time shrinking the window by `zoom`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lower: f64,
    pub upper: f64,
    /// Points per axis, endpoints included.
    pub resolution: usize,
    pub refinements: usize,
    pub zoom: f64,
}

impl GridSpec {
    /// 10 000 points, two ×10 refinements.
    pub fn line(lower: f64, upper: f64) -> Self {
        GridSpec { lower, upper, resolution: 10_000, refinements: 2, zoom: 10.0 }
    }

    /// 400 points per axis, two ×10 refinements.
    pub fn axis(lower: f64, upper: f64) -> Self {
        GridSpec { lower, upper, resolution: 400, refinements: 2, zoom: 10.0 }
    }

    pub fn validate(&self) -> Result<(), GameError> {
        if !(self.lower.is_finite() && self.upper.is_finite() && self.lower < self.upper) {
            return Err(GameError::InvalidParams { field: "grid bounds", constraint: "finite bounds with lower < upper" });
        }
        if self.resolution < 16 {
            return Err(GameError::InvalidParams { field: "grid resolution", constraint: "at least 16 points" });
        }
        if !(self.zoom > 1.0) {
            return Err(GameError::InvalidParams { field: "grid zoom", constraint: "zoom > 1" });
        }
        Ok(())
    }

    /// Width of one cell after all refinements.
    pub fn final_cell(&self) -> f64 {
        let mut width = self.upper - self.lower;
        for _ in 0..self.refinements {
            width /= self.zoom;
        }
        width / (self.resolution - 1) as f64
    }
}

fn scan<F: FnMut(f64) -> f64>(f: &mut F, lo: f64, hi: f64, resolution: usize) -> (f64, f64) {
    let step = (hi - lo) / (resolution - 1) as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..resolution {
        let x = if i + 1 == resolution { hi } else { lo + step * i as f64 };
        let v = f(x);
        // strict: ties keep the lowest index
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Refined grid maximum of `f` over `grid`: `(argmax, max)`.
pub fn grid_max_1d<F: FnMut(f64) -> f64>(mut f: F, grid: &GridSpec) -> Result<(f64, f64), GameError> {
    grid.validate()?;
    let (mut lo, mut hi) = (grid.lower, grid.upper);
    let mut best = scan(&mut f, lo, hi, grid.resolution);
    for _ in 0..grid.refinements {
        let half = 0.5 * (hi - lo) / grid.zoom;
        lo = (best.0 - half).max(grid.lower);
        hi = (best.0 + half).min(grid.upper);
        let cand = scan(&mut f, lo, hi, grid.resolution);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    Ok(best)
}

/// Like [`grid_max_1d`], but `increment(reference, x)` returns
/// `f(x) − f(reference)`. Each pass measures against the best point so far,
/// which keeps the comparison exact when `f` itself is huge and flat.
pub fn grid_max_increment<F: FnMut(f64, f64) -> f64>(mut increment: F, grid: &GridSpec) -> Result<f64, GameError> {
    grid.validate()?;
    let (mut lo, mut hi) = (grid.lower, grid.upper);
    let mut best = grid.lower;
    for pass in 0..=grid.refinements {
        if pass > 0 {
            let half = 0.5 * (hi - lo) / grid.zoom;
            lo = (best - half).max(grid.lower);
            hi = (best + half).min(grid.upper);
        }
        let reference = best;
        let (x, v) = scan(&mut |x| increment(reference, x), lo, hi, grid.resolution);
        if v > 0.0 {
            best = x;
        }
    }
    Ok(best)
}

/// Grid maximum of the interferer's Lagrangian over `P_I` on the attacked
/// sub-channel.
pub fn grid_max_follower(
    action: &LeaderAction,
    attacked_channel: usize,
    channels: &ChannelState,
    params: &SystemParams,
    zeta: &[f64],
    grid: &GridSpec,
) -> Result<(f64, f64), GameError> {
    follower_lagrangian(0.0, action, attacked_channel, channels, params, zeta)?;
    let p = grid_max_increment(
        |from, to| {
            follower_lagrangian_change(from, to, action, attacked_channel, channels, params, zeta)
                .unwrap_or(f64::NEG_INFINITY)
        },
        grid,
    )?;
    Ok((p, follower_lagrangian(p, action, attacked_channel, channels, params, zeta)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeaderGridMax {
    pub p_t: Vec<f64>,
    pub rho: f64,
    pub value: f64,
}

/// Grid maximum of the network's Lagrangian over `(P_t, ρ)`. At fixed `ρ`
/// the Lagrangian separates over tags, so each tag's power is gridded on
/// its own inside the outer grid over `ρ`.
pub fn grid_max_leader(
    lag: &LeaderLagrangian<'_>,
    power_grid: &GridSpec,
    rho_grid: &GridSpec,
) -> Result<LeaderGridMax, GameError> {
    power_grid.validate()?;
    rho_grid.validate()?;
    let n_tags = lag.delta.n_tags();
    let inner = |rho: f64| -> Result<(Vec<f64>, f64), GameError> {
        let mut p_t = Vec::with_capacity(n_tags);
        let mut total = lag.common_term(rho);
        for n in 0..n_tags {
            lag.tag_term(n, power_grid.lower, rho)?;
            let (p, v) = grid_max_1d(|p| lag.tag_term(n, p, rho).unwrap_or(f64::NEG_INFINITY), power_grid)?;
            p_t.push(p);
            total += v;
        }
        Ok((p_t, total))
    };
    let (rho, _) = grid_max_1d(|rho| inner(rho).map(|r| r.1).unwrap_or(f64::NEG_INFINITY), rho_grid)?;
    let (p_t, value) = inner(rho)?;
    Ok(LeaderGridMax { p_t, rho, value })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    NegativeDefinite,
    PositiveDefinite,
    Indefinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hessian {
    /// Row-major, `dim × dim`.
    pub entries: Vec<f64>,
    pub dim: usize,
    /// Leading principal minors `D_1 … D_dim`.
    pub minors: Vec<f64>,
    pub verdict: Definiteness,
}

impl Hessian {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }
}

fn determinant(m: &[f64], dim: usize) -> f64 {
    let mut a = m.to_vec();
    let mut det = 1.0;
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&i, &j| abs(a[i * dim + col]).total_cmp(&abs(a[j * dim + col])))
            .expect("nonempty");
        if a[pivot * dim + col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            for k in 0..dim {
                a.swap(pivot * dim + k, col * dim + k);
            }
            det = -det;
        }
        let d = a[col * dim + col];
        det *= d;
        for row in col + 1..dim {
            let factor = a[row * dim + col] / d;
            for k in col..dim {
                a[row * dim + k] -= factor * a[col * dim + k];
            }
        }
    }
    det
}

/// Classifies a symmetric matrix by its leading principal minors.
pub fn classify(entries: &[f64], dim: usize) -> (Vec<f64>, Definiteness) {
    let mut minors = Vec::with_capacity(dim);
    for k in 1..=dim {
        let mut sub = Vec::with_capacity(k * k);
        for i in 0..k {
            sub.extend_from_slice(&entries[i * dim..i * dim + k]);
        }
        minors.push(determinant(&sub, k));
    }
    let negative = minors.iter().enumerate().all(|(k, &d)| if k % 2 == 0 { d < 0.0 } else { d > 0.0 });
    let positive = minors.iter().all(|&d| d > 0.0);
    let verdict = if negative {
        Definiteness::NegativeDefinite
    } else if positive {
        Definiteness::PositiveDefinite
    } else {
        Definiteness::Indefinite
    };
    (minors, verdict)
}

/// Central-difference Hessian of `f` at `point` with per-coordinate steps.
///
/// `f` returns `None` outside its domain; a stencil point there is a
/// [`GameError::Boundary`] error naming the coordinate.
pub fn finite_diff_hessian<F: Fn(&[f64]) -> Option<f64>>(f: F, point: &[f64], step: &[f64]) -> Result<Hessian, GameError> {
    let dim = point.len();
    if step.len() != dim || dim == 0 {
        return Err(GameError::Degenerate("step and point dimensions differ"));
    }
    let eval = |x: &[f64], coordinate: usize| f(x).ok_or(GameError::Boundary { coordinate });
    let center = eval(point, 0)?;
    let mut entries = vec![0.0; dim * dim];
    let mut x = point.to_vec();
    for i in 0..dim {
        let h = step[i];
        x[i] = point[i] + h;
        let plus = eval(&x, i)?;
        x[i] = point[i] - h;
        let minus = eval(&x, i)?;
        x[i] = point[i];
        entries[i * dim + i] = (plus - 2.0 * center + minus) / (h * h);
        for j in 0..i {
            let k = step[j];
            let mut corner = |si: f64, sj: f64| {
                x[i] = point[i] + si * h;
                x[j] = point[j] + sj * k;
                let v = eval(&x, i);
                x[i] = point[i];
                x[j] = point[j];
                v
            };
            let pp = corner(1.0, 1.0)?;
            let pm = corner(1.0, -1.0)?;
            let mp = corner(-1.0, 1.0)?;
            let mm = corner(-1.0, -1.0)?;
            let v = (pp - pm - mp + mm) / (4.0 * h * k);
            entries[i * dim + j] = v;
            entries[j * dim + i] = v;
        }
    }
    let (minors, verdict) = classify(&entries, dim);
    Ok(Hessian { entries, dim, minors, verdict })
}
