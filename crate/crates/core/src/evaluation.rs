//! Policy loss and the exhaustive `(theta0, mu)` sweep.
//!
//! The loss adds, for every day of the horizon, the powered output shortfall
//! in currency and the statistical value of life times the powered
//! cumulative death stock. It is not discounted. Because `D_j` is the
//! cumulative stock, a death is charged once for every remaining day of the
//! horizon, so early deaths cost more than late ones.

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ModelError};
use crate::exec::{map_ordered, Execution};
use crate::policy::{PolicyRegime, RegimeKind};
use crate::scenario::{run_scenario, ScenarioConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LossParams {
    /// 1 is linear, 2 quadratic.
    pub m_power: f64,
    /// Statistical value of one life.
    pub chi: f64,
    /// Last day included in the sum (days `0..=horizon_days`).
    pub horizon_days: u32,
}

impl Default for LossParams {
    fn default() -> Self {
        Self {
            m_power: 1.0,
            chi: 0.64e6,
            horizon_days: 810,
        }
    }
}

impl LossParams {
    pub fn validate(&self, prefix: &str) -> Result<(), ConfigError> {
        if !(self.m_power > 0.0 && self.m_power.is_finite()) {
            return Err(ConfigError::invalid(
                format!("{prefix}.m_power"),
                format!("{} must be positive", self.m_power),
            ));
        }
        if !(self.chi >= 0.0 && self.chi.is_finite()) {
            return Err(ConfigError::invalid(
                format!("{prefix}.chi"),
                format!("{} must be >= 0", self.chi),
            ));
        }
        if self.horizon_days < 1 {
            return Err(ConfigError::invalid(format!("{prefix}.horizon_days"), "must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Loss {
    /// Raw value in currency units (powered when `m != 1`).
    pub psi: f64,
    /// `psi / y_bar`.
    pub psi_ybar_days: f64,
}

fn powered(x: f64, m: f64) -> Result<f64, ModelError> {
    if m.fract() == 0.0 && m.abs() <= i32::MAX as f64 {
        Ok(x.powi(m as i32))
    } else if x < 0.0 {
        Err(ModelError::UndefinedPower { m, value: x })
    } else {
        Ok(x.powf(m))
    }
}

pub fn loss_psi(traj: &Trajectory, lp: &LossParams) -> Result<Loss, ModelError> {
    let required = lp.horizon_days as usize + 1;
    let rows = traj.rows.get(..required).ok_or(ModelError::HorizonTooShort {
        required,
        available: traj.rows.len(),
    })?;
    let mut psi = 0.0;
    for r in rows {
        let shortfall = (1.0 - r.output / traj.y_bar) * traj.y_bar;
        psi += powered(shortfall, lp.m_power)? + lp.chi * powered(r.deaths, lp.m_power)?;
    }
    Ok(Loss {
        psi,
        psi_ybar_days: psi / traj.y_bar,
    })
}

/// Outcome of one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossCell {
    pub regime: RegimeKind,
    pub theta0: f64,
    pub mu: f64,
    pub loss: Option<Loss>,
    pub terminal_deaths: f64,
    /// Lowest `Y / y_bar` over the horizon.
    pub min_output_ratio: f64,
    pub mean_output_gap: f64,
    pub error: Option<String>,
}

impl LossCell {
    pub fn psi(&self) -> Option<f64> {
        self.loss.map(|l| l.psi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub loss: LossParams,
    pub cells: Vec<LossCell>,
    /// Index into `cells` of the smallest loss among successful cells.
    pub argmin: Option<usize>,
}

impl LossReport {
    pub fn argmin_cell(&self) -> Option<&LossCell> {
        self.argmin.map(|i| &self.cells[i])
    }

    pub fn failed(&self) -> impl Iterator<Item = &LossCell> {
        self.cells.iter().filter(|c| c.error.is_some())
    }
}

/// Regime for one grid point. `theta0 >= 1` means no lockdown at all.
pub fn cell_regime(base: &PolicyRegime, theta0: f64, mu: f64) -> PolicyRegime {
    if theta0 >= 1.0 {
        PolicyRegime {
            kind: RegimeKind::None,
            theta0: base.theta0,
            mu,
            ..*base
        }
    } else {
        PolicyRegime {
            kind: RegimeKind::Soft,
            theta0,
            mu,
            ..*base
        }
    }
}

fn evaluate_cell(cfg: &ScenarioConfig, regime: PolicyRegime, theta0: f64, lp: &LossParams) -> LossCell {
    let mut cell = LossCell {
        regime: regime.kind,
        theta0,
        mu: regime.mu,
        loss: None,
        terminal_deaths: f64::NAN,
        min_output_ratio: f64::NAN,
        mean_output_gap: f64::NAN,
        error: None,
    };
    let cfg = ScenarioConfig {
        policy: regime,
        ..cfg.clone()
    };
    if let Err(e) = regime.validate("policy") {
        cell.error = Some(e.to_string());
        return cell;
    }
    let traj = match run_scenario(&cfg) {
        Ok(t) => t,
        Err(e) => {
            cell.error = Some(e.to_string());
            return cell;
        }
    };
    match loss_psi(&traj, lp) {
        Ok(loss) => {
            let horizon = &traj.rows[..=lp.horizon_days as usize];
            cell.loss = Some(loss);
            cell.terminal_deaths = horizon.last().map_or(0.0, |r| r.deaths);
            cell.min_output_ratio = horizon
                .iter()
                .map(|r| r.output / traj.y_bar)
                .fold(f64::INFINITY, f64::min);
            cell.mean_output_gap = horizon.iter().map(|r| r.output_gap).sum::<f64>() / horizon.len() as f64;
        }
        Err(e) => cell.error = Some(e.to_string()),
    }
    cell
}

/// Run one simulation per `(theta0, mu)` pair and locate the minimum loss.
///
/// Grid points with `theta0 < 1` are soft regimes sharing the scenario's
/// activation threshold; `theta0 = 1` stands for no lockdown. Cells are
/// independent, so `exec` only changes wall-clock time, never the report.
pub fn policy_sweep_with(
    cfg: &ScenarioConfig,
    thetas: &[f64],
    mus: &[f64],
    lp: &LossParams,
    exec: Execution,
) -> Result<LossReport, ConfigError> {
    if thetas.is_empty() {
        return Err(ConfigError::invalid("sweep.thetas", "grid is empty"));
    }
    if mus.is_empty() {
        return Err(ConfigError::invalid("sweep.mus", "grid is empty"));
    }
    lp.validate("loss")?;
    if cfg.run_days < lp.horizon_days {
        return Err(ConfigError::invalid(
            "run_days",
            format!("{} is shorter than the loss horizon {}", cfg.run_days, lp.horizon_days),
        ));
    }
    let points: Vec<(f64, f64)> = mus
        .iter()
        .flat_map(|&mu| thetas.iter().map(move |&t| (t, mu)))
        .collect();
    let cells = map_ordered(&points, exec, |&(theta0, mu)| {
        evaluate_cell(cfg, cell_regime(&cfg.policy, theta0, mu), theta0, lp)
    });
    let argmin = cells
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.psi().map(|p| (i, p)))
        .fold(None, |best: Option<(usize, f64)>, (i, p)| match best {
            Some((_, b)) if b <= p => best,
            _ => Some((i, p)),
        })
        .map(|(i, _)| i);
    Ok(LossReport {
        loss: *lp,
        cells,
        argmin,
    })
}

pub fn policy_sweep(
    cfg: &ScenarioConfig,
    thetas: &[f64],
    mus: &[f64],
    lp: &LossParams,
) -> Result<LossReport, ConfigError> {
    policy_sweep_with(cfg, thetas, mus, lp, Execution::default())
}
