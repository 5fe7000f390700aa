use alloc::vec::Vec;

use crate::error::{ConstraintKind, GameError};
use crate::follower::InterferenceProfile;
use crate::model::{ChannelState, SystemParams};

use super::multipliers::StepQuantities;
use super::state::LeaderAction;

/// Signed slack of one constraint, normalized by its threshold so that
/// `-0.1` means "10 % short".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintSlack {
    pub kind: ConstraintKind,
    /// `None` for network-wide constraints.
    pub tag: Option<usize>,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeasibilityReport {
    pub slacks: Vec<ConstraintSlack>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self, tolerance: f64) -> bool {
        self.slacks.iter().all(|s| s.slack >= -tolerance)
    }

    /// The constraint with the most negative slack.
    pub fn most_violated(&self) -> Option<ConstraintSlack> {
        self.slacks.iter().copied().min_by(|a, b| a.slack.total_cmp(&b.slack))
    }

    /// Smallest slack of one constraint family.
    pub fn worst_of(&self, kind: ConstraintKind) -> Option<f64> {
        self.slacks.iter().filter(|s| s.kind == kind).map(|s| s.slack).reduce(f64::min)
    }

    /// Number of constraints with nonnegative slack.
    pub fn satisfied_count(&self) -> usize {
        self.slacks.iter().filter(|s| s.slack >= 0.0).count()
    }
}

/// Normalized slack of every constraint of the network's problem under the
/// interference `profile`:
///
/// * SINR: `(SINR − SINR_TH)/SINR_TH` on the active sub-channel;
/// * backscatter energy: `(E_n − ρ T P_B,TH t_n)/(ρ T P_B,TH t_n)`;
/// * power cap: `(P_t,max − P_t,n)/P_t,max`, or `P_t,n/P_t,max` when negative;
/// * indicator row: `0` with one active sub-channel, `−1` otherwise;
/// * time switching: `min(ρ, 1 − ρ)`;
/// * harvest: `(E_n − η(1−ρ)T P_EH,TH)/(η(1−ρ)T P_EH,TH)`, which reduces to
///   `(h_n P_t,n − P_EH,TH)/P_EH,TH`.
pub fn check_leader_feasibility(
    action: &LeaderAction,
    profile: &InterferenceProfile,
    channels: &ChannelState,
    params: &SystemParams,
) -> Result<FeasibilityReport, GameError> {
    let mut report = FeasibilityReport::default();
    let rho_slack = action.rho.min(1.0 - action.rho);
    let q = if (0.0..=1.0).contains(&action.rho) {
        Some(StepQuantities::observe(action, profile, channels, params)?)
    } else {
        None
    };
    for n in 0..action.n_tags() {
        let p = action.p_t[n];
        let push = |r: &mut FeasibilityReport, kind, slack| r.slacks.push(ConstraintSlack { kind, tag: Some(n), slack });
        let (sinr, energy, required) = match &q {
            Some(q) => (q.sinr[n], q.energy[n], q.energy_required[n]),
            None => (0.0, 0.0, 0.0),
        };
        push(&mut report, ConstraintKind::Sinr, (sinr - params.sinr_threshold) / params.sinr_threshold);
        let energy_slack = if required > 0.0 { (energy - required) / required } else if q.is_some() { 0.0 } else { -1.0 };
        push(&mut report, ConstraintKind::BackscatterEnergy, energy_slack);
        let cap = if p < 0.0 { p / params.p_t_max } else { (params.p_t_max - p) / params.p_t_max };
        push(&mut report, ConstraintKind::PowerCap, cap);
        let valid = if action.delta.active(n).is_some() { 0.0 } else { -1.0 };
        push(&mut report, ConstraintKind::BinaryIndicator, valid);
        let h = channels.h(n);
        let harvest = (h * p - params.harvest_power_threshold) / params.harvest_power_threshold;
        push(&mut report, ConstraintKind::HarvestThreshold, harvest);
    }
    report.slacks.push(ConstraintSlack { kind: ConstraintKind::TimeSwitching, tag: None, slack: rho_slack });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leader::SubchannelMatrix;
    use crate::model::TagGeometry;
    use alloc::vec;

    fn scenario() -> (SystemParams, ChannelState) {
        let p = SystemParams::paper_defaults(3);
        let tags = TagGeometry::equal_slots(&[(1.0, 10.0), (2.0, 10.0), (2.5, 10.0)]);
        (p.clone(), ChannelState::from_geometry(&p, &tags).unwrap())
    }

    #[test]
    fn all_zero_action() {
        let (p, ch) = scenario();
        let action = LeaderAction { p_t: vec![0.0; 3], rho: 0.5, delta: SubchannelMatrix::all_on(3, 14, 0) };
        let r = check_leader_feasibility(&action, &InterferenceProfile::silent(), &ch, &p).unwrap();
        assert!(r.worst_of(ConstraintKind::Sinr).unwrap() < 0.0);
        assert!(r.worst_of(ConstraintKind::BackscatterEnergy).unwrap() < 0.0);
        assert!(r.worst_of(ConstraintKind::PowerCap).unwrap() > 0.0);
        assert!(!r.is_feasible(1e-6));
    }

    #[test]
    fn double_indicator_is_reported() {
        let (p, ch) = scenario();
        let mut delta = SubchannelMatrix::all_on(3, 14, 0);
        delta.set(2, 4, true);
        let action = LeaderAction { p_t: vec![0.1; 3], rho: 0.01, delta };
        let r = check_leader_feasibility(&action, &InterferenceProfile::silent(), &ch, &p).unwrap();
        for s in r.slacks.iter().filter(|s| s.kind == ConstraintKind::BinaryIndicator) {
            assert_eq!(s.slack, if s.tag == Some(2) { -1.0 } else { 0.0 });
        }
        assert!(!r.is_feasible(1e-6));
    }

    #[test]
    fn strong_clean_action_is_feasible() {
        let (p, ch) = scenario();
        let action = LeaderAction { p_t: vec![0.1; 3], rho: 0.01, delta: SubchannelMatrix::all_on(3, 14, 1) };
        let profile = InterferenceProfile { power: 1.0, attacked_channel: 0, leakage: 0.0 };
        let r = check_leader_feasibility(&action, &profile, &ch, &p).unwrap();
        assert!(r.is_feasible(1e-6), "{:?}", r.most_violated());
    }
}
