#![allow(dead_code)]

use bsgame_core::{ChannelState, LeaderAction, SubchannelMatrix, SystemParams, TagGeometry};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct Instance {
    pub params: SystemParams,
    pub channels: ChannelState,
    pub action: LeaderAction,
    pub zeta: Vec<f64>,
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Tags within harvesting range, interferer 5-15 m away, random action.
pub fn random_instance(rng: &mut ChaCha8Rng, max_tags: usize) -> Instance {
    let n = rng.gen_range(1..=max_tags);
    let params = SystemParams::paper_defaults(n);
    let d: Vec<(f64, f64)> = (0..n).map(|_| (rng.gen_range(0.5..3.0), rng.gen_range(5.0..15.0))).collect();
    let channels = ChannelState::from_geometry(&params, &TagGeometry::equal_slots(&d)).unwrap();
    let chans: Vec<usize> = (0..n).map(|_| rng.gen_range(0..2)).collect();
    let action = LeaderAction {
        p_t: (0..n).map(|_| rng.gen_range(0.01..1.0) * params.p_t_max).collect(),
        rho: rng.gen_range(0.01..0.99),
        delta: SubchannelMatrix::from_channels(&chans, params.n_channels),
    };
    let zeta = (0..n).map(|_| if rng.gen_bool(0.5) { 0.0 } else { rng.gen_range(0.0..2.0) }).collect();
    Instance { params, channels, action, zeta }
}

pub fn preset_geometry(n: usize) -> Vec<TagGeometry> {
    let d: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let r = if n == 1 { 1.0 } else { 1.0 + 1.5 * i as f64 / (n - 1) as f64 };
            (r, 10.0)
        })
        .collect();
    TagGeometry::equal_slots(&d)
}
