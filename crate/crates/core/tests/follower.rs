mod common;

use bsgame_core::follower::{
    check_follower_stationarity, choose_attacked_channel, interferer_best_response, interferer_curvature,
    optimal_interference_power, utility_interferer, FollowerMethod,
};
use bsgame_core::oracle::{grid_max_follower, GridSpec};
use bsgame_core::{FollowerState, InterferenceProfile, SubchannelMatrix};
use common::{random_instance, rng};

#[test]
fn closed_form_and_bisection_match_grid() {
    let mut r = rng(11);
    let mut multi = 0;
    for _ in 0..200 {
        let inst = random_instance(&mut r, 4);
        let k = inst.action.delta.occupied()[0];
        let opt = optimal_interference_power(&inst.action, k, &inst.channels, &inst.params, &inst.zeta).unwrap();
        if opt.method == FollowerMethod::Bisection {
            multi += 1;
        }
        assert!(opt.power >= 0.0 && opt.power <= inst.params.p_i_max);
        let grid = GridSpec::line(0.0, inst.params.p_i_max);
        let (g, _) = grid_max_follower(&inst.action, k, &inst.channels, &inst.params, &inst.zeta, &grid).unwrap();
        assert!((g - opt.power).abs() <= 1e-5 * inst.params.p_i_max, "grid {g} vs {}", opt.power);
        if opt.power > 0.0 && opt.power < inst.params.p_i_max {
            let r = check_follower_stationarity(opt.power, &inst.action, k, &inst.channels, &inst.params, &inst.zeta)
                .unwrap();
            let price = inst.params.cost_interferer + inst.zeta.iter().sum::<f64>();
            assert!(r.abs() <= 1e-6 * price, "residual {r}");
        }
    }
    assert!(multi > 20, "too few multi-tag draws: {multi}");
}

#[test]
fn curvature_negative_and_matches_finite_differences() {
    let mut r = rng(12);
    let mut checked = 0;
    let mut draws = 0;
    while checked < 1000 {
        draws += 1;
        assert!(draws < 50_000, "too few well-conditioned draws");
        let mut inst = random_instance(&mut r, 4);
        // tags elsewhere only add a constant, which would swamp the stencil
        let k = inst.action.delta.occupied()[0];
        inst.action.delta = SubchannelMatrix::all_on(inst.action.n_tags(), inst.params.n_channels, k);
        let p = &inst.params;
        let h = 1e-4 * p.p_i_max;
        // the stencil's own error is about 2(h/x)², so stay where x ≫ h
        let x = r_range(&mut r, 0.01 * p.p_i_max, p.p_i_max - 2.0 * h);
        let analytic = interferer_curvature(x, &inst.action, k, &inst.channels, p).unwrap();
        assert!(analytic < 0.0);
        let u = |pi: f64| {
            utility_interferer(
                &inst.action,
                &InterferenceProfile { power: pi, attacked_channel: k, leakage: 0.0 },
                &inst.channels,
                p,
            )
            .unwrap()
        };
        // rounding in u alone moves the stencil by about 4ε|u|/h²; when that
        // rivals the curvature the comparison measures noise, not the formula
        if 4.0 * f64::EPSILON * u(x).abs() / (h * h) > 1e-4 * analytic.abs() {
            continue;
        }
        checked += 1;
        let fd = (u(x + h) - 2.0 * u(x) + u(x - h)) / (h * h);
        assert!((fd - analytic).abs() <= 1e-3 * analytic.abs(), "fd {fd} analytic {analytic} at {x}");
    }
}

fn r_range(r: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    use rand::Rng;
    r.gen_range(lo..hi)
}

#[test]
fn best_response_never_loses_utility() {
    let mut r = rng(13);
    for _ in 0..100 {
        let inst = random_instance(&mut r, 5);
        let mut start = FollowerState::initial(&inst.params);
        start.zeta = inst.zeta.clone();
        start.p_i = r_range(&mut r, 0.0, inst.params.p_i_max);
        let before =
            utility_interferer(&inst.action, &start.profile(&inst.params), &inst.channels, &inst.params).unwrap();
        let out = interferer_best_response(&inst.action, &inst.channels, &inst.params, &start).unwrap();
        assert!(out.utility >= before);
        assert!(out.p_i >= 0.0 && out.p_i <= inst.params.p_i_max);
        assert!(out.zeta.iter().all(|&z| z >= 0.0));
        let (k, _, _) = choose_attacked_channel(&inst.action, &inst.channels, &inst.params, &inst.zeta).unwrap();
        assert_eq!(out.attacked_channel, k);
    }
}

#[test]
fn costlier_interference_never_hurts_the_network() {
    let mut r = rng(14);
    for _ in 0..100 {
        let inst = random_instance(&mut r, 4);
        let mut p = inst.params.clone();
        let mut last = f64::NEG_INFINITY;
        for c in [0.1, 1.0, 10.0, 100.0] {
            p.cost_interferer = c;
            let u = bsgame_core::leader::anticipated_utility_wsn(&inst.action, &inst.channels, &p, &inst.zeta).unwrap();
            assert!(u >= last - 1e-12 * u.abs());
            last = u;
        }
    }
}
