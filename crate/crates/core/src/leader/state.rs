use alloc::vec;
use alloc::vec::Vec;

use crate::model::SystemParams;

/// Binary sub-channel indicators `δ_{k,n}`, one row per tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubchannelMatrix {
    n_tags: usize,
    n_channels: usize,
    cells: Vec<bool>,
}

impl SubchannelMatrix {
    pub fn empty(n_tags: usize, n_channels: usize) -> Self {
        SubchannelMatrix { n_tags, n_channels, cells: vec![false; n_tags * n_channels] }
    }

    /// Every tag on sub-channel `channel`.
    pub fn all_on(n_tags: usize, n_channels: usize, channel: usize) -> Self {
        let mut m = Self::empty(n_tags, n_channels);
        for n in 0..n_tags {
            m.assign(n, channel);
        }
        m
    }

    pub fn from_channels(channels: &[usize], n_channels: usize) -> Self {
        let mut m = Self::empty(channels.len(), n_channels);
        for (n, &k) in channels.iter().enumerate() {
            m.assign(n, k);
        }
        m
    }

    pub fn n_tags(&self) -> usize {
        self.n_tags
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn get(&self, n: usize, k: usize) -> bool {
        self.cells[n * self.n_channels + k]
    }

    pub fn set(&mut self, n: usize, k: usize, on: bool) {
        self.cells[n * self.n_channels + k] = on;
    }

    /// Puts tag `n` on exactly sub-channel `k`.
    pub fn assign(&mut self, n: usize, k: usize) {
        for j in 0..self.n_channels {
            self.set(n, j, j == k);
        }
    }

    pub fn row_count(&self, n: usize) -> usize {
        (0..self.n_channels).filter(|&k| self.get(n, k)).count()
    }

    /// The tag's sub-channel when exactly one indicator is set.
    pub fn active(&self, n: usize) -> Option<usize> {
        if self.row_count(n) == 1 {
            (0..self.n_channels).find(|&k| self.get(n, k))
        } else {
            None
        }
    }

    pub fn is_valid(&self) -> bool {
        (0..self.n_tags).all(|n| self.row_count(n) == 1)
    }

    /// Sub-channels carrying at least one tag, ascending.
    pub fn occupied(&self) -> Vec<usize> {
        (0..self.n_channels).filter(|&k| (0..self.n_tags).any(|n| self.get(n, k))).collect()
    }

    /// Active channel per tag; `None` for rows that are not single-valued.
    pub fn channels(&self) -> Vec<Option<usize>> {
        (0..self.n_tags).map(|n| self.active(n)).collect()
    }
}

/// Per `(tag, sub-channel)` real values, used for `α_{k,n}` and `γ_{k,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TagChannelValues {
    n_channels: usize,
    values: Vec<f64>,
}

impl TagChannelValues {
    pub fn zeros(n_tags: usize, n_channels: usize) -> Self {
        TagChannelValues { n_channels, values: vec![0.0; n_tags * n_channels] }
    }

    pub fn get(&self, n: usize, k: usize) -> f64 {
        self.values[n * self.n_channels + k]
    }

    pub fn set(&mut self, n: usize, k: usize, v: f64) {
        self.values[n * self.n_channels + k] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// What the interferer observes: transmit powers, the time-switching ratio
/// and the sub-channel indicators.
#[derive(Debug, Clone, PartialEq)]
pub struct LeaderAction {
    pub p_t: Vec<f64>,
    pub rho: f64,
    pub delta: SubchannelMatrix,
}

impl LeaderAction {
    pub fn n_tags(&self) -> usize {
        self.p_t.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeaderMultipliers {
    /// SINR threshold, per tag and sub-channel.
    pub alpha: TagChannelValues,
    /// Power cap, per tag.
    pub beta: Vec<f64>,
    /// Backscatter energy threshold, per tag.
    pub mu: Vec<f64>,
    /// `ρ ≤ 1`
    pub nu: f64,
    /// `ρ ≥ 0`
    pub tau: f64,
    /// Harvest threshold, per tag and sub-channel.
    pub gamma: TagChannelValues,
}

impl LeaderMultipliers {
    pub fn zeros(n_tags: usize, n_channels: usize) -> Self {
        LeaderMultipliers {
            alpha: TagChannelValues::zeros(n_tags, n_channels),
            beta: vec![0.0; n_tags],
            mu: vec![0.0; n_tags],
            nu: 0.0,
            tau: 0.0,
            gamma: TagChannelValues::zeros(n_tags, n_channels),
        }
    }

    pub fn all_nonnegative(&self) -> bool {
        self.alpha.values().iter().chain(self.gamma.values()).chain(&self.beta).chain(&self.mu).all(|&v| v >= 0.0)
            && self.nu >= 0.0
            && self.tau >= 0.0
    }

    /// Largest absolute difference over every multiplier.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d: f64 = crate::math::abs(self.nu - other.nu).max(crate::math::abs(self.tau - other.tau));
        let pairs = self
            .alpha
            .values()
            .iter()
            .zip(other.alpha.values())
            .chain(self.gamma.values().iter().zip(other.gamma.values()))
            .chain(self.beta.iter().zip(&other.beta))
            .chain(self.mu.iter().zip(&other.mu));
        for (a, b) in pairs {
            d = d.max(crate::math::abs(a - b));
        }
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeaderState {
    pub action: LeaderAction,
    pub multipliers: LeaderMultipliers,
    /// Objective value of `action` when it was accepted.
    pub utility: f64,
    /// Leader iteration counter `T_B`.
    pub iteration: usize,
    pub converged: bool,
}

impl LeaderState {
    /// Half the power cap on every tag, `ρ = 0.5`, everyone on the first
    /// sub-channel, all multipliers zero.
    pub fn initial(params: &SystemParams) -> Self {
        let n = params.n_tags;
        LeaderState {
            action: LeaderAction {
                p_t: vec![0.5 * params.p_t_max; n],
                rho: 0.5,
                delta: SubchannelMatrix::all_on(n, params.n_channels, 0),
            },
            multipliers: LeaderMultipliers::zeros(n, params.n_channels),
            utility: f64::NEG_INFINITY,
            iteration: 0,
            converged: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_active_row() {
        let mut m = SubchannelMatrix::all_on(3, 4, 2);
        assert!(m.is_valid());
        assert_eq!(m.active(1), Some(2));
        m.set(1, 0, true);
        assert_eq!(m.row_count(1), 2);
        assert_eq!(m.active(1), None);
        assert!(!m.is_valid());
        m.assign(1, 3);
        assert_eq!(m.channels(), vec![Some(2), Some(3), Some(2)]);
        assert_eq!(m.occupied(), vec![2, 3]);
    }

    #[test]
    fn initial_state_matches_documented_start() {
        let p = SystemParams::paper_defaults(3);
        let s = LeaderState::initial(&p);
        assert_eq!(s.action.p_t, vec![0.05; 3]);
        assert_eq!(s.action.rho, 0.5);
        assert_eq!(s.action.delta.occupied(), vec![0]);
        assert!(s.multipliers.all_nonnegative());
    }
}
