//! JSON scenario files in human units.
//!
//! Every key is optional; absent keys take the published scenario values.
//! Powers are in dBm, gains in dB/dBi, frequencies in GHz, distances in
//! meters. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use bsgame_core::units::{db_to_linear, dbm_to_watts, linear_to_db, wavelength, watts_to_dbm};
use bsgame_core::{GameError, GameMode, SolverSettings, StepSizes, SystemParams, TagGeometry};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("invalid `{field}`: {constraint}")]
    Invalid { field: String, constraint: String },
    #[error("degenerate game: {0}")]
    Degenerate(String),
}

impl ConfigError {
    fn invalid(field: &str, constraint: &str) -> Self {
        ConfigError::Invalid { field: field.to_string(), constraint: constraint.to_string() }
    }
}

impl From<GameError> for ConfigError {
    fn from(e: GameError) -> Self {
        match e {
            GameError::InvalidParams { field, constraint } => ConfigError::invalid(field, constraint),
            GameError::Degenerate(what) => ConfigError::Degenerate(what.to_string()),
            other => ConfigError::Degenerate(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Stackelberg,
    Nash,
}

impl From<Mode> for GameMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Stackelberg => GameMode::Stackelberg,
            Mode::Nash => GameMode::Nash,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TagPlacement {
    pub r_hap_m: f64,
    pub r_interferer_m: f64,
}

/// Tags uniform in an annulus around the H-AP; the interferer sits
/// `interferer_distance_m` from the H-AP.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RandomPlacement {
    pub seed: u64,
    pub radius_m: f64,
    /// Keeps tags out of the antenna near field.
    pub min_radius_m: f64,
    pub interferer_distance_m: f64,
}

impl Default for RandomPlacement {
    fn default() -> Self {
        RandomPlacement { seed: 0, radius_m: 5.0, min_radius_m: 0.5, interferer_distance_m: 10.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StepSizeConfig {
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    pub omega4: f64,
    pub omega5: f64,
    pub omega6: f64,
    pub omega7: f64,
}

impl Default for StepSizeConfig {
    fn default() -> Self {
        StepSizeConfig::from(StepSizes::default())
    }
}

impl From<StepSizes> for StepSizeConfig {
    fn from(s: StepSizes) -> Self {
        let [omega1, omega2, omega3, omega4, omega5, omega6, omega7] = s.as_array();
        StepSizeConfig { omega1, omega2, omega3, omega4, omega5, omega6, omega7 }
    }
}

impl From<StepSizeConfig> for StepSizes {
    fn from(c: StepSizeConfig) -> Self {
        StepSizes::from_array([c.omega1, c.omega2, c.omega3, c.omega4, c.omega5, c.omega6, c.omega7])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub rho_min: f64,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub stationarity_tolerance: f64,
    pub feasibility_tolerance: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let s = SolverSettings::default();
        SolverConfig {
            rho_min: s.rho_min,
            max_iterations: s.max_iterations,
            tolerance: s.tolerance,
            stationarity_tolerance: s.stationarity_tolerance,
            feasibility_tolerance: s.feasibility_tolerance,
        }
    }
}

/// Starting point of both players.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialConfig {
    /// `None`: half of `P_t,max`.
    pub p_t_dbm: Option<f64>,
    pub rho: f64,
    pub channel: usize,
}

impl Default for InitialConfig {
    fn default() -> Self {
        InitialConfig { p_t_dbm: None, rho: 0.5, channel: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    /// Ignored when `tags` is given.
    pub n_tags: usize,
    pub n_channels: usize,
    pub eta: f64,
    pub block_time_s: f64,
    pub gamma0: f64,
    pub gamma1: f64,
    pub noise_dbm: f64,
    pub cost_interferer: f64,
    pub cost_wsn: f64,
    pub sinr_threshold_db: f64,
    pub backscatter_threshold_dbm: f64,
    pub harvest_threshold_dbm: f64,
    pub p_t_max_dbm: f64,
    pub p_i_max_dbm: f64,
    pub gain_hap_dbi: f64,
    pub gain_tag_dbi: f64,
    pub gain_interferer_dbi: f64,
    pub frequency_ghz: f64,
    /// `None`: same as the H-AP.
    pub interferer_frequency_ghz: Option<f64>,
    pub leakage_fraction: f64,
    pub step_sizes: StepSizeConfig,
    pub solver: SolverConfig,
    /// Explicit placement; takes precedence over `random`.
    pub tags: Option<Vec<TagPlacement>>,
    pub random: Option<RandomPlacement>,
    pub mode: Mode,
    pub max_rounds: usize,
    pub tolerance: f64,
    pub fixed_rho: Option<f64>,
    pub initial: InitialConfig,
    pub out_dir: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            scenario_id: "preset".to_string(),
            n_tags: 3,
            n_channels: 14,
            eta: 0.5,
            block_time_s: 1.0,
            gamma0: 1.0,
            gamma1: -1.0,
            noise_dbm: -90.0,
            cost_interferer: 1.0,
            cost_wsn: 1.0,
            sinr_threshold_db: 10.0,
            backscatter_threshold_dbm: -18.0,
            harvest_threshold_dbm: -22.0,
            p_t_max_dbm: 20.0,
            p_i_max_dbm: 30.0,
            gain_hap_dbi: 6.0,
            gain_tag_dbi: 1.8,
            gain_interferer_dbi: 6.0,
            frequency_ghz: 2.4,
            interferer_frequency_ghz: None,
            leakage_fraction: 0.0,
            step_sizes: StepSizeConfig::default(),
            solver: SolverConfig::default(),
            tags: None,
            random: None,
            mode: Mode::Stackelberg,
            max_rounds: 50,
            tolerance: 1e-6,
            fixed_rho: None,
            initial: InitialConfig::default(),
            out_dir: None,
        }
    }
}

/// Tags evenly spaced from 1 m to 2.5 m from the H-AP, all 10 m from the
/// interferer.
pub fn preset_placement(n: usize) -> Vec<TagPlacement> {
    (0..n)
        .map(|i| {
            let r_hap_m = if n == 1 { 1.0 } else { 1.0 + 1.5 * i as f64 / (n - 1) as f64 };
            TagPlacement { r_hap_m, r_interferer_m: 10.0 }
        })
        .collect()
}

/// Seeded uniform placement in the annulus `[min_radius_m, radius_m]`.
pub fn random_placement(n: usize, spec: &RandomPlacement) -> Vec<TagPlacement> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (r0, r1) = (spec.min_radius_m, spec.radius_m);
    (0..n)
        .map(|_| {
            // uniform in area
            let r = (r0 * r0 + rng.gen::<f64>() * (r1 * r1 - r0 * r0)).sqrt();
            let theta = rng.gen::<f64>() * std::f64::consts::TAU;
            let (x, y) = (r * theta.cos(), r * theta.sin());
            let dx = x - spec.interferer_distance_m;
            TagPlacement { r_hap_m: r, r_interferer_m: (dx * dx + y * y).sqrt() }
        })
        .collect()
}

impl ScenarioConfig {
    /// The published scenario with `n` tags.
    pub fn preset(n: usize) -> Self {
        ScenarioConfig { scenario_id: format!("preset-n{n}"), n_tags: n, ..Default::default() }
    }

    pub fn placement(&self) -> Vec<TagPlacement> {
        match (&self.tags, &self.random) {
            (Some(tags), _) => tags.clone(),
            (None, Some(spec)) => random_placement(self.n_tags, spec),
            (None, None) => preset_placement(self.n_tags),
        }
    }

    pub fn tag_count(&self) -> usize {
        self.tags.as_ref().map_or(self.n_tags, Vec::len)
    }

    pub fn geometry(&self) -> Vec<TagGeometry> {
        let d: Vec<(f64, f64)> = self.placement().iter().map(|t| (t.r_hap_m, t.r_interferer_m)).collect();
        TagGeometry::equal_slots(&d)
    }

    /// Linear-unit parameters.
    pub fn system_params(&self) -> SystemParams {
        let f_hap = self.frequency_ghz * 1e9;
        let f_int = self.interferer_frequency_ghz.unwrap_or(self.frequency_ghz) * 1e9;
        let s = &self.solver;
        SystemParams {
            eta: self.eta,
            block_time: self.block_time_s,
            n_tags: self.tag_count(),
            n_channels: self.n_channels,
            gamma0: self.gamma0,
            gamma1: self.gamma1,
            noise_power: dbm_to_watts(self.noise_dbm),
            cost_interferer: self.cost_interferer,
            cost_wsn: self.cost_wsn,
            sinr_threshold: db_to_linear(self.sinr_threshold_db),
            backscatter_power_threshold: dbm_to_watts(self.backscatter_threshold_dbm),
            harvest_power_threshold: dbm_to_watts(self.harvest_threshold_dbm),
            p_t_max: dbm_to_watts(self.p_t_max_dbm),
            p_i_max: dbm_to_watts(self.p_i_max_dbm),
            gain_hap_tx: db_to_linear(self.gain_hap_dbi),
            gain_tag: db_to_linear(self.gain_tag_dbi),
            gain_interferer: db_to_linear(self.gain_interferer_dbi),
            wavelength_hap: wavelength(f_hap),
            wavelength_interferer: wavelength(f_int),
            step_sizes: self.step_sizes.into(),
            leakage_fraction: self.leakage_fraction,
            solver: SolverSettings {
                rho_min: s.rho_min,
                max_iterations: s.max_iterations,
                tolerance: s.tolerance,
                stationarity_tolerance: s.stationarity_tolerance,
                feasibility_tolerance: s.feasibility_tolerance,
            },
        }
    }

    /// Writes `params` back in human units. Geometry and run settings are
    /// kept from `self`.
    pub fn with_params(&self, params: &SystemParams) -> Result<Self, ConfigError> {
        let dbm = |field: &str, w: f64| watts_to_dbm(w).map_err(|_| ConfigError::invalid(field, "a positive power"));
        let db = |field: &str, x: f64| linear_to_db(x).map_err(|_| ConfigError::invalid(field, "a positive ratio"));
        let ghz = |lambda: f64| bsgame_core::units::SPEED_OF_LIGHT / lambda / 1e9;
        let s = &params.solver;
        Ok(ScenarioConfig {
            n_tags: params.n_tags,
            n_channels: params.n_channels,
            eta: params.eta,
            block_time_s: params.block_time,
            gamma0: params.gamma0,
            gamma1: params.gamma1,
            noise_dbm: dbm("noise_dbm", params.noise_power)?,
            cost_interferer: params.cost_interferer,
            cost_wsn: params.cost_wsn,
            sinr_threshold_db: db("sinr_threshold_db", params.sinr_threshold)?,
            backscatter_threshold_dbm: dbm("backscatter_threshold_dbm", params.backscatter_power_threshold)?,
            harvest_threshold_dbm: dbm("harvest_threshold_dbm", params.harvest_power_threshold)?,
            p_t_max_dbm: dbm("p_t_max_dbm", params.p_t_max)?,
            p_i_max_dbm: dbm("p_i_max_dbm", params.p_i_max)?,
            gain_hap_dbi: db("gain_hap_dbi", params.gain_hap_tx)?,
            gain_tag_dbi: db("gain_tag_dbi", params.gain_tag)?,
            gain_interferer_dbi: db("gain_interferer_dbi", params.gain_interferer)?,
            frequency_ghz: ghz(params.wavelength_hap),
            interferer_frequency_ghz: Some(ghz(params.wavelength_interferer)),
            leakage_fraction: params.leakage_fraction,
            step_sizes: params.step_sizes.into(),
            solver: SolverConfig {
                rho_min: s.rho_min,
                max_iterations: s.max_iterations,
                tolerance: s.tolerance,
                stationarity_tolerance: s.stationarity_tolerance,
                feasibility_tolerance: s.feasibility_tolerance,
            },
            ..self.clone()
        })
    }

    /// Checks everything the game needs before it starts.
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.eta > 0.0 && self.eta <= 1.0) {
            return Err(ConfigError::invalid("eta", "eta ∈ (0,1]"));
        }
        if self.gamma0 == self.gamma1 {
            return Err(ConfigError::Degenerate("gamma0 = gamma1 leaves no reflection differential".into()));
        }
        if !(self.frequency_ghz > 0.0 && self.frequency_ghz.is_finite()) {
            return Err(ConfigError::invalid("frequency_ghz", "a positive frequency"));
        }
        if let Some(f) = self.interferer_frequency_ghz {
            if !(f > 0.0 && f.is_finite()) {
                return Err(ConfigError::invalid("interferer_frequency_ghz", "a positive frequency"));
            }
        }
        match (&self.tags, &self.random) {
            (Some(_), Some(_)) => return Err(ConfigError::invalid("tags", "give either `tags` or `random`, not both")),
            (Some(tags), None) => {
                if tags.is_empty() {
                    return Err(ConfigError::invalid("tags", "at least one tag"));
                }
                for (i, t) in tags.iter().enumerate() {
                    if !(t.r_hap_m > 0.0 && t.r_hap_m.is_finite()) {
                        return Err(ConfigError::invalid(&format!("tags[{i}].r_hap_m"), "a positive distance"));
                    }
                    if !(t.r_interferer_m > 0.0 && t.r_interferer_m.is_finite()) {
                        return Err(ConfigError::invalid(&format!("tags[{i}].r_interferer_m"), "a positive distance"));
                    }
                }
            }
            (None, Some(r)) => {
                if !(r.min_radius_m > 0.0 && r.min_radius_m < r.radius_m && r.radius_m.is_finite()) {
                    return Err(ConfigError::invalid("random.radius_m", "0 < min_radius_m < radius_m"));
                }
                if !(r.interferer_distance_m > r.radius_m && r.interferer_distance_m.is_finite()) {
                    return Err(ConfigError::invalid(
                        "random.interferer_distance_m",
                        "outside the tag disk (greater than radius_m)",
                    ));
                }
            }
            (None, None) => {}
        }
        if self.max_rounds == 0 {
            return Err(ConfigError::invalid("max_rounds", "at least one round"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(ConfigError::invalid("tolerance", "a positive finite value"));
        }
        if let Some(rho) = self.fixed_rho {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(ConfigError::invalid("fixed_rho", "fixed_rho ∈ (0,1)"));
            }
        }
        let init = &self.initial;
        if !(init.rho > 0.0 && init.rho < 1.0) {
            return Err(ConfigError::invalid("initial.rho", "initial.rho ∈ (0,1)"));
        }
        if init.channel >= self.n_channels {
            return Err(ConfigError::invalid("initial.channel", "below n_channels"));
        }
        if let Some(p) = init.p_t_dbm {
            if !(p.is_finite() && p <= self.p_t_max_dbm) {
                return Err(ConfigError::invalid("initial.p_t_dbm", "at most p_t_max_dbm"));
            }
        }
        self.system_params().validate()?;
        Ok(())
    }
}

/// Parses and validates a scenario; `origin` labels parse errors.
pub fn parse_config(text: &str, origin: &str) -> Result<ScenarioConfig, ConfigError> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text, &path.display().to_string())
}
