//! gNB cell layout, signal model, cell selection and hysteresis-based
//! handover triggering.
//!
//! The signal model is linear in distance: `rsrp = -dbm_per_unit * d`. Under
//! the defaults (1 dBm per unit, threshold -120 dBm) a cell's coverage edge
//! at 120 units sits exactly at the threshold, and best-cell selection
//! reduces to nearest-cell selection.

use serde::{Deserialize, Serialize};

use crate::domain::{CellId, Position};

/// A simulated gNB cell site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSite {
    pub cell: CellId,
    pub position: Position,
    /// Nominal coverage radius in distance units.
    pub coverage_radius: f64,
    /// Serving threshold; positions whose rsrp falls below it are out of
    /// this cell's coverage.
    pub threshold_dbm: f64,
}

impl CellSite {
    pub const DEFAULT_COVERAGE_RADIUS: f64 = 120.0;
    pub const DEFAULT_THRESHOLD_DBM: f64 = -120.0;

    pub fn new(cell: CellId, position: Position) -> Self {
        CellSite {
            cell,
            position,
            coverage_radius: Self::DEFAULT_COVERAGE_RADIUS,
            threshold_dbm: Self::DEFAULT_THRESHOLD_DBM,
        }
    }
}

/// Radio model parameters shared by all sites.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    /// Path-loss slope of the linear signal model (dBm per distance unit).
    #[serde(default = "RadioConfig::default_dbm_per_unit")]
    pub dbm_per_unit: f64,
    /// Margin a neighbor must exceed the serving cell by before a handover
    /// fires.
    #[serde(default = "RadioConfig::default_hysteresis_db")]
    pub hysteresis_db: f64,
}

impl RadioConfig {
    fn default_dbm_per_unit() -> f64 {
        1.0
    }

    fn default_hysteresis_db() -> f64 {
        3.0
    }
}

impl Default for RadioConfig {
    fn default() -> Self {
        RadioConfig {
            dbm_per_unit: Self::default_dbm_per_unit(),
            hysteresis_db: Self::default_hysteresis_db(),
        }
    }
}

/// Outcome of a handover evaluation for one UE position.
#[derive(Debug, Clone, PartialEq)]
pub enum HandoverDecision {
    /// Keep the serving cell.
    Stay,
    /// Hand over to a better neighbor.
    Handover { target: CellId, rsrp_dbm: f64 },
    /// Every site is below its serving threshold.
    RadioLoss,
}

/// Received signal strength of `site` at `pos` in dBm.
///
/// Strictly decreasing in distance; equals `threshold_dbm` exactly at
/// `coverage_radius` under the default configuration.
pub fn rsrp(site: &CellSite, pos: &Position, cfg: &RadioConfig) -> f64 {
    -cfg.dbm_per_unit * site.position.distance_to(pos)
}

/// Strongest in-coverage site at `pos`, or `None` when every site is below
/// its threshold. Exact rsrp ties break toward the lexicographically
/// smallest cell id.
pub fn best_cell<'a>(
    pos: &Position,
    sites: &'a [CellSite],
    cfg: &RadioConfig,
) -> Option<(&'a CellSite, f64)> {
    let mut best: Option<(&CellSite, f64)> = None;
    for site in sites {
        let level = rsrp(site, pos, cfg);
        if level < site.threshold_dbm {
            continue;
        }
        let replace = match best {
            None => true,
            Some((best_site, best_level)) => {
                level > best_level || (level == best_level && site.cell.id < best_site.cell.id)
            }
        };
        if replace {
            best = Some((site, level));
        }
    }
    best
}

/// Evaluates the handover criterion for a UE currently served by `serving`.
///
/// - `Handover(target)` when the strongest non-serving in-coverage site
///   exceeds the serving rsrp by more than `hysteresis_db`;
/// - `RadioLoss` when every site (serving included) is below its threshold;
/// - `Stay` otherwise.
///
/// The returned target is never the serving cell, and the choice of the
/// strongest candidate makes one-step ping-pong impossible: right after a
/// handover the old serving cell cannot beat the new one by the margin.
pub fn handover_decision(
    serving: &CellId,
    pos: &Position,
    sites: &[CellSite],
    cfg: &RadioConfig,
) -> HandoverDecision {
    let serving_site = sites
        .iter()
        .find(|s| &s.cell == serving)
        .expect("serving cell must be one of the scenario sites");
    let serving_rsrp = rsrp(serving_site, pos, cfg);

    let all_below = sites.iter().all(|s| rsrp(s, pos, cfg) < s.threshold_dbm);
    if all_below {
        return HandoverDecision::RadioLoss;
    }

    let mut candidate: Option<(&CellSite, f64)> = None;
    for site in sites {
        if &site.cell == serving {
            continue;
        }
        let level = rsrp(site, pos, cfg);
        if level < site.threshold_dbm {
            continue;
        }
        let replace = match candidate {
            None => true,
            Some((best_site, best_level)) => {
                level > best_level || (level == best_level && site.cell.id < best_site.cell.id)
            }
        };
        if replace {
            candidate = Some((site, level));
        }
    }

    match candidate {
        Some((site, level)) if level > serving_rsrp + cfg.hysteresis_db => {
            HandoverDecision::Handover {
                target: site.cell.clone(),
                rsrp_dbm: level,
            }
        }
        _ => HandoverDecision::Stay,
    }
}
