//! Scenario runs, the ρ sweep, the two-game comparison and the
//! certification suite.

use std::path::Path;

use bsgame_core::follower::{choose_attacked_channel, interferer_curvature, optimal_interference_power};
use bsgame_core::game::{detect_equilibrium, play, EquilibriumReport, GameOptions, GameTrace};
use bsgame_core::leader::{anticipated_utility_wsn, leader_best_response, LeaderOptions};
use bsgame_core::oracle::{finite_diff_hessian, grid_max_follower, Definiteness, GridSpec};
use bsgame_core::{
    ChannelState, GameError, GameMode, InitialActions, LeaderAction, LeaderState, SubchannelMatrix, SystemParams,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{ConfigError, Mode, ScenarioConfig};
use crate::corpus::random_corpus;
use crate::output::{rows_from_trace, write_json, write_rows, ResultRow, RunSummary};

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Game(#[from] GameError),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl SimError {
    /// 3 for an infeasible scenario, 4 for bad input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Config(_) => 4,
            SimError::Game(GameError::Infeasible { .. }) => 3,
            SimError::Game(
                GameError::InvalidParams { .. } | GameError::InvalidGeometry { .. } | GameError::Degenerate(_),
            ) => 4,
            _ => 1,
        }
    }
}

/// Parameters, channels and starting point of a config.
pub struct Scenario {
    pub params: SystemParams,
    pub channels: ChannelState,
    pub initial: InitialActions,
}

impl Scenario {
    pub fn build(config: &ScenarioConfig) -> Result<Self, SimError> {
        config.validate()?;
        let params = config.system_params();
        let channels = ChannelState::from_geometry(&params, &config.geometry())?;
        let mut initial = InitialActions::standard(&params);
        let n = params.n_tags;
        if let Some(dbm) = config.initial.p_t_dbm {
            initial.leader.action.p_t = vec![bsgame_core::units::dbm_to_watts(dbm); n];
        }
        initial.leader.action.rho = config.initial.rho;
        initial.leader.action.delta = SubchannelMatrix::all_on(n, params.n_channels, config.initial.channel);
        Ok(Scenario { params, channels, initial })
    }
}

pub struct ScenarioRun {
    pub scenario_id: String,
    pub trace: GameTrace,
    pub report: EquilibriumReport,
    pub rows: Vec<ResultRow>,
    pub summary: RunSummary,
}

impl ScenarioRun {
    /// `<id>_<mode>.csv` and `<id>_<mode>_summary.json`.
    pub fn write(&self, dir: &Path) -> Result<(), SimError> {
        std::fs::create_dir_all(dir)?;
        let stem = format!("{}_{}", self.scenario_id, self.trace.mode.name());
        write_rows(std::fs::File::create(dir.join(format!("{stem}.csv")))?, &self.rows)?;
        write_json(&dir.join(format!("{stem}_summary.json")), &self.summary)?;
        Ok(())
    }
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun, SimError> {
    let s = Scenario::build(config)?;
    let options = GameOptions {
        mode: config.mode.into(),
        max_rounds: config.max_rounds,
        tolerance: config.tolerance,
        fixed_rho: config.fixed_rho,
    };
    let trace = play(&s.params, &s.channels, &s.initial, options)?;
    let report = detect_equilibrium(&trace, config.tolerance, &s.channels, &s.params)?;
    let rows = rows_from_trace(&config.scenario_id, &trace);
    let summary = RunSummary::new(&config.scenario_id, &trace, &report, s.params.solver.feasibility_tolerance);
    Ok(ScenarioRun { scenario_id: config.scenario_id.clone(), trace, report, rows, summary })
}

/// `points` values evenly spaced over `[0.001, 0.999]`.
pub fn rho_grid(points: usize) -> Vec<f64> {
    let (lo, hi) = (0.001, 0.999);
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1).max(1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub rho: f64,
    pub u_b: Option<f64>,
    pub u_i: Option<f64>,
    pub converged: bool,
    pub rounds: usize,
    /// `ok`, or why the point failed.
    pub status: String,
}

/// Plays the configured game with `ρ` held at each grid value. Points run
/// in parallel; failures are recorded and the sweep goes on.
pub fn sweep_rho(config: &ScenarioConfig, grid: &[f64]) -> Result<Vec<SweepPoint>, SimError> {
    config.validate()?;
    if let Some(bad) = grid.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
        return Err(ConfigError::Invalid { field: "rho_grid".into(), constraint: format!("{bad} is outside (0,1)") }.into());
    }
    Ok(grid
        .par_iter()
        .map(|&rho| {
            let c = ScenarioConfig { fixed_rho: Some(rho), ..config.clone() };
            match run_scenario(&c) {
                Ok(run) => SweepPoint {
                    rho,
                    u_b: Some(run.summary.u_b),
                    u_i: Some(run.summary.u_i),
                    converged: run.trace.converged,
                    rounds: run.trace.rounds.len(),
                    status: "ok".into(),
                },
                Err(e) => SweepPoint { rho, u_b: None, u_i: None, converged: false, rounds: 0, status: e.to_string() },
            }
        })
        .collect())
}

pub fn write_sweep(path: &Path, points: &[SweepPoint]) -> Result<(), SimError> {
    let mut w = csv::Writer::from_path(path)?;
    for p in points {
        w.serialize(p)?;
    }
    w.flush()?;
    Ok(())
}

/// Grid value with the largest utility; lowest `ρ` on ties.
pub fn sweep_peak(points: &[SweepPoint]) -> Option<(f64, f64)> {
    points
        .iter()
        .filter_map(|p| p.u_b.map(|u| (p.rho, u)))
        .fold(None, |best, (r, u)| match best {
            Some((_, bu)) if bu >= u => best,
            _ => Some((r, u)),
        })
}

/// Rises to a single peak and falls after it, over the successful points.
pub fn is_unimodal(points: &[SweepPoint]) -> bool {
    let u: Vec<f64> = points.iter().filter_map(|p| p.u_b).collect();
    let Some(peak) = u.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| i) else {
        return false;
    };
    u[..=peak].windows(2).all(|w| w[1] >= w[0]) && u[peak..].windows(2).all(|w| w[1] <= w[0])
}

pub struct Comparison {
    pub n_tags: usize,
    pub stackelberg: ScenarioRun,
    pub nash: ScenarioRun,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonSummary {
    pub n_tags: usize,
    pub u_b_stackelberg: f64,
    pub u_b_nash: f64,
    pub u_i_stackelberg: f64,
    pub u_i_nash: f64,
    pub rounds_stackelberg: usize,
    pub rounds_nash: usize,
    pub converged_stackelberg: bool,
    pub converged_nash: bool,
    /// `U_B` under Stackelberg ≥ under Nash.
    pub leader_dominance: bool,
    /// `U_I` under Stackelberg ≥ under Nash.
    pub follower_dominance: bool,
}

impl Comparison {
    pub fn summary(&self) -> ComparisonSummary {
        let (s, n) = (&self.stackelberg.summary, &self.nash.summary);
        ComparisonSummary {
            n_tags: self.n_tags,
            u_b_stackelberg: s.u_b,
            u_b_nash: n.u_b,
            u_i_stackelberg: s.u_i,
            u_i_nash: n.u_i,
            rounds_stackelberg: s.rounds,
            rounds_nash: n.rounds,
            converged_stackelberg: s.converged,
            converged_nash: n.converged,
            leader_dominance: s.u_b >= n.u_b,
            follower_dominance: s.u_i >= n.u_i,
        }
    }

    /// Both modes' rows, Stackelberg first.
    pub fn rows(&self) -> Vec<ResultRow> {
        self.stackelberg.rows.iter().chain(&self.nash.rows).cloned().collect()
    }
}

/// Both games on the same scenario for every tag count. Explicit `tags`
/// in the config fix the count; otherwise the preset placement is used.
pub fn compare_games(config: &ScenarioConfig, tag_counts: &[usize]) -> Result<Vec<Comparison>, SimError> {
    let counts: Vec<usize> = match &config.tags {
        Some(t) => vec![t.len()],
        None => tag_counts.to_vec(),
    };
    counts
        .par_iter()
        .map(|&n| {
            let base = ScenarioConfig { n_tags: n, scenario_id: format!("{}-n{n}", config.scenario_id), ..config.clone() };
            let stackelberg = run_scenario(&ScenarioConfig { mode: Mode::Stackelberg, ..base.clone() })?;
            let nash = run_scenario(&ScenarioConfig { mode: Mode::Nash, ..base })?;
            Ok(Comparison { n_tags: n, stackelberg, nash })
        })
        .collect()
}

pub fn write_comparisons(dir: &Path, comparisons: &[Comparison]) -> Result<(), SimError> {
    std::fs::create_dir_all(dir)?;
    for c in comparisons {
        write_rows(std::fs::File::create(dir.join(format!("compare_n{}.csv", c.n_tags)))?, &c.rows())?;
    }
    let summaries: Vec<ComparisonSummary> = comparisons.iter().map(Comparison::summary).collect();
    write_json(&dir.join("compare_summary.json"), &summaries)?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HessianCounts {
    pub negative_definite: usize,
    pub indefinite: usize,
    pub positive_definite: usize,
    /// Stencil left the domain.
    pub boundary: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct OracleReport {
    pub instances: usize,
    pub follower_checked: usize,
    /// Worst `|closed form − grid argmax| / P_I,max`.
    pub follower_max_error: f64,
    pub follower_breaches: usize,
    pub follower_curvature_checked: usize,
    pub follower_curvature_nonnegative: usize,
    pub leader_runs: usize,
    pub leader_infeasible: usize,
    pub leader_steps: usize,
    pub leader_fallback_steps: usize,
    pub leader_max_residual: f64,
    /// Non-fallback steps whose relative residual exceeds the tolerance.
    pub leader_residual_breaches: usize,
    pub fallback_rate: f64,
    /// 2×2 Hessians of the anticipated objective in `(P_t,n, ρ)` at the
    /// accepted Stackelberg optima.
    pub leader_hessians: HessianCounts,
}

pub const FOLLOWER_TOLERANCE: f64 = 1e-5;
pub const LEADER_RESIDUAL_TOLERANCE: f64 = 1e-5;
pub const MAX_FALLBACK_RATE: f64 = 0.2;

impl OracleReport {
    /// No closed form missed its oracle and fallbacks stayed rare.
    pub fn residuals_pass(&self) -> bool {
        self.follower_breaches == 0 && self.leader_residual_breaches == 0 && self.fallback_rate < MAX_FALLBACK_RATE
    }

    pub fn concavity_pass(&self) -> bool {
        let h = &self.leader_hessians;
        self.follower_curvature_nonnegative == 0
            && h.indefinite == 0
            && h.positive_definite == 0
            && h.boundary == 0
            && h.negative_definite > 0
    }
}

/// Hessian of the anticipated objective in `(P_t,n, ρ)`, per tag.
fn leader_hessians(action: &LeaderAction, zeta: &[f64], ch: &ChannelState, params: &SystemParams, out: &mut HessianCounts) {
    let step = [1e-5 * params.p_t_max, 1e-5];
    for n in 0..action.n_tags() {
        let f = |x: &[f64]| {
            if x[0] < 0.0 || !(x[1] > 0.0 && x[1] < 1.0) {
                return None;
            }
            let mut a = action.clone();
            a.p_t[n] = x[0];
            a.rho = x[1];
            anticipated_utility_wsn(&a, ch, params, zeta).ok()
        };
        match finite_diff_hessian(f, &[action.p_t[n], action.rho], &step) {
            Ok(h) => match h.verdict {
                Definiteness::NegativeDefinite => out.negative_definite += 1,
                Definiteness::Indefinite => out.indefinite += 1,
                Definiteness::PositiveDefinite => out.positive_definite += 1,
            },
            Err(_) => out.boundary += 1,
        }
    }
}

/// Certifies the closed forms on `count` random instances: the interferer's
/// power against the grid oracle and its curvature sign, every leader primal
/// step against its first-order conditions, and the curvature of the
/// anticipated objective at each accepted Stackelberg optimum.
pub fn oracle_check(seed: u64, count: usize) -> Result<OracleReport, SimError> {
    let corpus = random_corpus(seed, count, 5);
    let mut r = OracleReport { instances: corpus.len(), ..Default::default() };
    for (i, inst) in corpus.iter().enumerate() {
        let (p, ch) = (&inst.params, &inst.channels);
        let (k, _, _) = choose_attacked_channel(&inst.action, ch, p, &inst.zeta)?;
        let opt = optimal_interference_power(&inst.action, k, ch, p, &inst.zeta)?;
        let (g, _) = grid_max_follower(&inst.action, k, ch, p, &inst.zeta, &GridSpec::line(0.0, p.p_i_max))?;
        let err = (opt.power - g).abs() / p.p_i_max;
        r.follower_checked += 1;
        r.follower_max_error = r.follower_max_error.max(err);
        if err > FOLLOWER_TOLERANCE {
            r.follower_breaches += 1;
        }
        r.follower_curvature_checked += 1;
        if interferer_curvature(opt.power, &inst.action, k, ch, p)? >= 0.0 {
            r.follower_curvature_nonnegative += 1;
        }

        let mode = if i % 2 == 0 { GameMode::Stackelberg } else { GameMode::Nash };
        let options = LeaderOptions { foresight: mode.foresight(), fixed_rho: None };
        let start = LeaderState { action: inst.action.clone(), multipliers: inst.multipliers.clone(), ..LeaderState::initial(p) };
        r.leader_runs += 1;
        let out = match leader_best_response(&inst.profile, &inst.zeta, ch, p, &start, options) {
            Ok(out) => out,
            Err(GameError::Infeasible { .. }) => {
                r.leader_infeasible += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for (&(pp, rp), &res) in out.paths.iter().zip(&out.step_residuals) {
            r.leader_steps += 1;
            if pp.is_fallback() || rp.is_fallback() {
                r.leader_fallback_steps += 1;
            } else {
                r.leader_max_residual = r.leader_max_residual.max(res);
                if res > LEADER_RESIDUAL_TOLERANCE {
                    r.leader_residual_breaches += 1;
                }
            }
        }
        if mode == GameMode::Stackelberg {
            leader_hessians(&out.state.action, &inst.zeta, ch, p, &mut r.leader_hessians);
        }
    }
    r.fallback_rate = if r.leader_steps == 0 { 0.0 } else { r.leader_fallback_steps as f64 / r.leader_steps as f64 };
    Ok(r)
}
