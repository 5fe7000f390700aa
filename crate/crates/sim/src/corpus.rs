//! Seeded random instances for the certification runs.

use bsgame_core::{
    ChannelState, InterferenceProfile, LeaderAction, LeaderMultipliers, SubchannelMatrix, SystemParams,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{random_placement, RandomPlacement};

/// Beyond about 3.07 m the H-AP cannot deliver the harvest threshold even at
/// full power, so corpus tags stay inside 3 m.
pub const CORPUS_RADIUS_M: f64 = 3.0;

#[derive(Debug, Clone)]
pub struct CorpusInstance {
    pub params: SystemParams,
    pub channels: ChannelState,
    pub action: LeaderAction,
    pub zeta: Vec<f64>,
    pub profile: InterferenceProfile,
    pub multipliers: LeaderMultipliers,
}

fn instance(rng: &mut ChaCha8Rng, max_tags: usize) -> CorpusInstance {
    let n = rng.gen_range(1..=max_tags);
    let params = SystemParams::paper_defaults(n);
    let spec = RandomPlacement { seed: rng.gen(), radius_m: CORPUS_RADIUS_M, ..Default::default() };
    let d: Vec<(f64, f64)> = random_placement(n, &spec).iter().map(|t| (t.r_hap_m, t.r_interferer_m)).collect();
    let channels = ChannelState::from_geometry(&params, &bsgame_core::TagGeometry::equal_slots(&d))
        .expect("placement inside the disk is valid");
    let k = params.n_channels;
    // a few sub-channels so that several tags share one
    let used = rng.gen_range(1..=3.min(k));
    let chans: Vec<usize> = (0..n).map(|_| rng.gen_range(0..used)).collect();
    let action = LeaderAction {
        p_t: (0..n).map(|_| rng.gen_range(0.05..1.0) * params.p_t_max).collect(),
        rho: rng.gen_range(0.01..0.99),
        delta: SubchannelMatrix::from_channels(&chans, k),
    };
    let zeta = (0..n).map(|_| if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..2.0) }).collect();
    let profile = InterferenceProfile {
        power: rng.gen_range(0.0..params.p_i_max),
        attacked_channel: rng.gen_range(0..used),
        leakage: 0.0,
    };
    let mut multipliers = LeaderMultipliers::zeros(n, k);
    for (t, &c) in chans.iter().enumerate() {
        if rng.gen_bool(0.3) {
            multipliers.beta[t] = rng.gen_range(0.0..10.0);
        }
        if rng.gen_bool(0.3) {
            multipliers.alpha.set(t, c, rng.gen_range(0.0..1.0));
        }
    }
    CorpusInstance { params, channels, action, zeta, profile, multipliers }
}

/// `count` instances with 1 to `max_tags` tags each.
pub fn random_corpus(seed: u64, count: usize, max_tags: usize) -> Vec<CorpusInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| instance(&mut rng, max_tags)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_reproducible() {
        let a = random_corpus(5, 10, 4);
        let b = random_corpus(5, 10, 4);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.action, y.action);
            assert_eq!(x.channels, y.channels);
        }
    }

    #[test]
    fn every_tag_can_reach_the_harvest_threshold() {
        for inst in random_corpus(6, 50, 5) {
            for n in 0..inst.channels.n_tags() {
                assert!(inst.channels.h(n) * inst.params.p_t_max >= inst.params.harvest_power_threshold);
            }
        }
    }
}
