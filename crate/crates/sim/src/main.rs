use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bsgame_sim::config::{load_config, Mode, ScenarioConfig};
use bsgame_sim::experiments::{
    compare_games, oracle_check, rho_grid, run_scenario, sweep_peak, sweep_rho, write_comparisons, write_sweep,
    SimError,
};
use bsgame_sim::output::write_json;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "bsgame", version, about = "Backscatter network vs. smart interferer power-control game")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON scenario file; the published preset when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for random tag placement (and the certification corpus).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Play one game and write its rounds.
    Run {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Hold ρ fixed on a grid and record the converged network utility.
    SweepRho {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Play both games on the same scenarios.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Tag counts to compare.
        #[arg(long, value_delimiter = ',', default_values_t = [3, 5, 10])]
        n: Vec<usize>,
    },
    /// Check every closed form against its brute-force oracle.
    OracleCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 200)]
        instances: usize,
    },
}

fn scenario(common: &Common, mode: Option<Mode>) -> Result<ScenarioConfig, SimError> {
    let mut c = match &common.config {
        Some(path) => load_config(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = common.seed {
        if let Some(r) = c.random.as_mut() {
            r.seed = seed;
        }
    }
    if let Some(m) = mode {
        c.mode = m;
    }
    Ok(c)
}

fn out_dir(common: &Common, config: &ScenarioConfig) -> PathBuf {
    common.out.clone().or_else(|| config.out_dir.clone()).unwrap_or_else(|| PathBuf::from("out"))
}

fn execute(command: Command) -> Result<u8, SimError> {
    match command {
        Command::Run { common, mode } => {
            let config = scenario(&common, mode)?;
            let run = run_scenario(&config)?;
            run.write(&out_dir(&common, &config))?;
            let s = &run.summary;
            println!(
                "{} {}: {} rounds, converged={} u_b={:e} u_i={:e}",
                s.scenario_id, s.mode, s.rounds, s.converged, s.u_b, s.u_i
            );
            Ok(if s.converged { 0 } else { 2 })
        }
        Command::SweepRho { common, mode, points } => {
            let config = scenario(&common, mode)?;
            let dir = out_dir(&common, &config);
            std::fs::create_dir_all(&dir)?;
            let pts = sweep_rho(&config, &rho_grid(points))?;
            write_sweep(&dir.join(format!("{}_rho_sweep.csv", config.scenario_id)), &pts)?;
            let failed = pts.iter().filter(|p| p.u_b.is_none()).count();
            match sweep_peak(&pts) {
                Some((rho, u)) => println!("peak at rho={rho} u_b={u:e}; {failed} failed points"),
                None => println!("no point succeeded"),
            }
            Ok(if pts.iter().all(|p| p.converged) { 0 } else { 2 })
        }
        Command::Compare { common, n } => {
            let config = scenario(&common, None)?;
            let comparisons = compare_games(&config, &n)?;
            write_comparisons(&out_dir(&common, &config), &comparisons)?;
            let mut all_converged = true;
            for c in &comparisons {
                let s = c.summary();
                all_converged &= s.converged_stackelberg && s.converged_nash;
                println!(
                    "N={}: u_b {:e} vs {:e} (leader {}), u_i {:e} vs {:e} (follower {})",
                    s.n_tags,
                    s.u_b_stackelberg,
                    s.u_b_nash,
                    if s.leader_dominance { "ok" } else { "FAIL" },
                    s.u_i_stackelberg,
                    s.u_i_nash,
                    if s.follower_dominance { "ok" } else { "FAIL" },
                );
            }
            Ok(if all_converged { 0 } else { 2 })
        }
        Command::OracleCheck { common, instances } => {
            let report = oracle_check(common.seed.unwrap_or(0), instances)?;
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            std::fs::create_dir_all(&dir)?;
            write_json(&dir.join("oracle_check.json"), &report)?;
            print_report(&report, &dir.join("oracle_check.json"));
            Ok(if report.residuals_pass() { 0 } else { 2 })
        }
    }
}

fn print_report(r: &bsgame_sim::experiments::OracleReport, path: &Path) {
    println!(
        "follower: {} checked, worst error {:e} x P_I,max, {} breaches",
        r.follower_checked, r.follower_max_error, r.follower_breaches
    );
    println!(
        "leader: {} steps, worst residual {:e}, {} breaches, fallback rate {:.3}",
        r.leader_steps, r.leader_max_residual, r.leader_residual_breaches, r.fallback_rate
    );
    let h = &r.leader_hessians;
    println!(
        "anticipated objective Hessians: {} negative definite, {} indefinite, {} positive definite, {} at a boundary",
        h.negative_definite, h.indefinite, h.positive_definite, h.boundary
    );
    println!("report written to {}", path.display());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
