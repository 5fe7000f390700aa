mod common;

use bsgame_core::follower::{follower_lagrangian, interferer_curvature, utility_interferer};
use bsgame_core::leader::LeaderLagrangian;
use bsgame_core::oracle::{finite_diff_hessian, grid_max_1d, grid_max_follower, grid_max_leader, Definiteness, GridSpec};
use bsgame_core::{
    ChannelState, Foresight, InterferenceProfile, LeaderMultipliers, SubchannelMatrix, SystemParams, TagGeometry,
};
use common::{random_instance, rng};
use rand::Rng;

#[test]
fn refinement_stays_within_one_coarse_cell() {
    let mut r = rng(31);
    for _ in 0..100 {
        let inst = random_instance(&mut r, 4);
        let k = inst.action.delta.occupied()[0];
        let fine = GridSpec::line(0.0, inst.params.p_i_max);
        let coarse = GridSpec { refinements: 0, ..fine };
        let f = |p| follower_lagrangian(p, &inst.action, k, &inst.channels, &inst.params, &inst.zeta).unwrap();
        let (a, _) = grid_max_1d(f, &coarse).unwrap();
        let (b, _) = grid_max_follower(&inst.action, k, &inst.channels, &inst.params, &inst.zeta, &fine).unwrap();
        let cell = inst.params.p_i_max / (fine.resolution - 1) as f64;
        assert!((a - b).abs() <= cell * (1.0 + 1e-9), "{a} vs {b}");
    }
}

#[test]
fn grid_never_beats_the_optimum() {
    let mut r = rng(32);
    for _ in 0..100 {
        let inst = random_instance(&mut r, 4);
        let k = inst.action.delta.occupied()[0];
        let grid = GridSpec::line(0.0, inst.params.p_i_max);
        let (g, _) = grid_max_follower(&inst.action, k, &inst.channels, &inst.params, &inst.zeta, &grid).unwrap();
        let opt = bsgame_core::follower::optimal_interference_power(
            &inst.action,
            k,
            &inst.channels,
            &inst.params,
            &inst.zeta,
        )
        .unwrap();
        let gain = bsgame_core::follower::follower_lagrangian_change(
            opt.power,
            g,
            &inst.action,
            k,
            &inst.channels,
            &inst.params,
            &inst.zeta,
        )
        .unwrap();
        assert!(gain <= 1e-9, "grid beats optimum by {gain}");
    }
}

#[test]
fn symmetric_tags_get_equal_powers() {
    let p = SystemParams::paper_defaults(2);
    let ch = ChannelState::from_geometry(&p, &TagGeometry::equal_slots(&[(1.5, 10.0), (1.5, 10.0)])).unwrap();
    let delta = SubchannelMatrix::all_on(2, p.n_channels, 0);
    let mut m = LeaderMultipliers::zeros(2, p.n_channels);
    m.beta = vec![50.0, 50.0];
    let lag = LeaderLagrangian {
        foresight: Foresight::Anticipating,
        delta: &delta,
        multipliers: &m,
        profile: InterferenceProfile::silent(),
        zeta: &[0.0, 0.0],
        channels: &ch,
        params: &p,
    };
    let g = grid_max_leader(&lag, &GridSpec::axis(0.0, p.p_t_max), &GridSpec::axis(0.001, 0.999)).unwrap();
    assert_eq!(g.p_t[0], g.p_t[1]);
}

#[test]
fn interferer_hessian_is_negative() {
    let mut r = rng(33);
    let mut checked = 0;
    while checked < 200 {
        let mut inst = random_instance(&mut r, 4);
        let k = inst.action.delta.occupied()[0];
        inst.action.delta = SubchannelMatrix::all_on(inst.action.n_tags(), inst.params.n_channels, k);
        let p = &inst.params;
        let x = r.gen_range(0.05..0.95) * p.p_i_max;
        let step = 1e-5 * p.p_i_max;
        let u = |v: &[f64]| {
            let profile = InterferenceProfile { power: v[0], attacked_channel: k, leakage: 0.0 };
            utility_interferer(&inst.action, &profile, &inst.channels, p).ok()
        };
        let analytic = interferer_curvature(x, &inst.action, k, &inst.channels, p).unwrap();
        if 4.0 * f64::EPSILON * u(&[x]).unwrap().abs() / (step * step) > 0.1 * analytic.abs() {
            continue;
        }
        checked += 1;
        let h = finite_diff_hessian(u, &[x], &[step]).unwrap();
        assert_eq!(h.verdict, Definiteness::NegativeDefinite, "{h:?} analytic {analytic}");
    }
}
