//! Per-round CSV rows and JSON summaries.
//!
//! A row carries the actions its utilities were evaluated at: the leader
//! action the interferer observed and the interferer's reply. Floats are
//! written in shortest round-trip form, so reading a row back and
//! re-evaluating the utilities reproduces them bit for bit.

use std::io::Write;
use std::path::Path;

use bsgame_core::game::{EquilibriumReport, GameTrace};
use bsgame_core::{LeaderAction, SubchannelMatrix};
use serde::{Deserialize, Serialize};

pub const ROW_HEADER: [&str; 11] = [
    "scenario_id",
    "mode",
    "round",
    "u_b",
    "u_i",
    "p_i_watts",
    "rho",
    "p_t_watts_list",
    "channels",
    "converged",
    "attacked_channel",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario_id: String,
    pub mode: String,
    pub round: usize,
    pub u_b: f64,
    pub u_i: f64,
    pub p_i_watts: f64,
    pub rho: f64,
    /// `;`-separated, one per tag.
    pub p_t_watts_list: String,
    /// `;`-separated active sub-channel per tag, `-` when none.
    pub channels: String,
    /// The trace settled.
    pub converged: bool,
    pub attacked_channel: usize,
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

pub fn rows_from_trace(scenario_id: &str, trace: &GameTrace) -> Vec<ResultRow> {
    trace
        .rounds
        .iter()
        .map(|r| {
            let a = &r.observed_leader;
            ResultRow {
                scenario_id: scenario_id.to_string(),
                mode: trace.mode.name().to_string(),
                round: r.round,
                u_b: r.u_b,
                u_i: r.u_i,
                p_i_watts: r.follower.p_i,
                rho: a.rho,
                p_t_watts_list: join(a.p_t.iter()),
                channels: join(a.delta.channels().iter().map(|c| c.map_or("-".to_string(), |k| k.to_string()))),
                converged: trace.converged,
                attacked_channel: r.follower.attacked_channel,
            }
        })
        .collect()
}

impl ResultRow {
    /// Rebuilds the leader action of the row.
    pub fn leader_action(&self, n_channels: usize) -> Result<LeaderAction, String> {
        let p_t = self
            .p_t_watts_list
            .split(';')
            .map(|s| s.parse::<f64>().map_err(|e| format!("p_t_watts_list: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut delta = SubchannelMatrix::empty(p_t.len(), n_channels);
        for (n, c) in self.channels.split(';').enumerate() {
            if c != "-" {
                let k: usize = c.parse().map_err(|e| format!("channels: {e}"))?;
                delta.set(n, k, true);
            }
        }
        Ok(LeaderAction { p_t, rho: self.rho, delta })
    }
}

pub fn write_rows<W: Write>(out: W, rows: &[ResultRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(ROW_HEADER)?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path) -> csv::Result<Vec<ResultRow>> {
    csv::Reader::from_path(path)?.deserialize().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub scenario_id: String,
    pub mode: String,
    pub converged: bool,
    pub converged_round: Option<usize>,
    pub rounds: usize,
    pub u_b: f64,
    pub u_i: f64,
    pub p_t_watts: Vec<f64>,
    pub rho: f64,
    pub channels: Vec<Option<usize>>,
    pub p_i_watts: f64,
    pub attacked_channel: usize,
    pub channel_shifts: usize,
    pub leader_steps: usize,
    pub fallback_steps: usize,
    pub leader_max_relative_residual: f64,
    pub follower_residual: f64,
    pub follower_at_bound: bool,
    pub feasible: bool,
    pub worst_slack: Option<SlackSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackSummary {
    pub constraint: String,
    pub tag: Option<usize>,
    pub slack: f64,
}

impl RunSummary {
    pub fn new(scenario_id: &str, trace: &GameTrace, report: &EquilibriumReport, feasibility_tol: f64) -> Self {
        let last = trace.last().expect("a finished game has rounds");
        let action = &report.leader.action;
        RunSummary {
            scenario_id: scenario_id.to_string(),
            mode: trace.mode.name().to_string(),
            converged: trace.converged,
            converged_round: trace.converged_round,
            rounds: trace.rounds.len(),
            u_b: last.u_b,
            u_i: last.u_i,
            p_t_watts: action.p_t.clone(),
            rho: action.rho,
            channels: action.delta.channels(),
            p_i_watts: report.follower.p_i,
            attacked_channel: report.follower.attacked_channel,
            channel_shifts: trace.rounds.iter().map(|r| r.shifts.len()).sum(),
            leader_steps: trace.rounds.iter().map(|r| r.leader_steps).sum(),
            fallback_steps: trace.rounds.iter().map(|r| r.fallback_steps).sum(),
            leader_max_relative_residual: report.leader_stationarity.max_relative(),
            follower_residual: report.follower_stationarity.residual,
            follower_at_bound: report.follower_stationarity.at_bound,
            feasible: report.feasibility.is_feasible(feasibility_tol),
            worst_slack: report.feasibility.most_violated().map(|s| SlackSummary {
                constraint: s.kind.name().to_string(),
                tag: s.tag,
                slack: s.slack,
            }),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    std::fs::write(path, text)
}
