//! Labour supply and aggregate output.

use serde::{Deserialize, Serialize};

use crate::epidemic::{delayed_recovered, CompartmentState, Population, ReturnDelays};
use crate::error::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EconomyParams {
    /// Labour share in the Cobb-Douglas production function.
    pub alpha_share: f64,
    /// Output of one health worker in general-worker units.
    #[serde(alias = "alpha_h")]
    pub a_multiplier: f64,
    /// Pre-pandemic output.
    pub y_bar: f64,
    /// Pre-pandemic labour, set to the day-zero labour force at `theta = 1`.
    #[serde(skip)]
    pub l_bar: f64,
}

impl Default for EconomyParams {
    fn default() -> Self {
        Self {
            alpha_share: 0.35,
            a_multiplier: 3.0,
            y_bar: 2.7e12,
            l_bar: 884e6 + 1000.0 + 3.0 * 0.76e6,
        }
    }
}

impl EconomyParams {
    pub fn validate(&self, prefix: &str) -> Result<(), ConfigError> {
        if !(self.alpha_share > 0.0 && self.alpha_share < 1.0) {
            return Err(ConfigError::invalid(
                format!("{prefix}.alpha_share"),
                format!("{} must lie in (0, 1)", self.alpha_share),
            ));
        }
        if !(self.a_multiplier >= 0.0 && self.a_multiplier.is_finite()) {
            return Err(ConfigError::invalid(
                format!("{prefix}.a_multiplier"),
                format!("{} must be >= 0", self.a_multiplier),
            ));
        }
        if !(self.y_bar > 0.0 && self.y_bar.is_finite()) {
            return Err(ConfigError::invalid(
                format!("{prefix}.y_bar"),
                format!("{} must be positive", self.y_bar),
            ));
        }
        Ok(())
    }
}

/// Effective labour force. Only the general term is subject to lockdown;
/// mild and severe patients do not work, asymptomatic people do.
pub fn labor_force(state: &CompartmentState, theta: f64, ep: &EconomyParams, delays: ReturnDelays) -> f64 {
    theta * general_workers(state, delays.general) + ep.a_multiplier * health_workers(state, delays.health)
}

/// General workers available before any lockdown restriction.
pub fn general_workers(state: &CompartmentState, delta_g: u32) -> f64 {
    let g = &state.general;
    g.susceptible + g.asymptomatic + delayed_recovered(state, Population::General, delta_g)
}

fn health_workers(state: &CompartmentState, delta_h: u32) -> f64 {
    let h = &state.health;
    h.susceptible + h.asymptomatic + delayed_recovered(state, Population::Health, delta_h)
}

/// Output scaled so that `output(l_bar) == y_bar`.
pub fn output(labor: f64, ep: &EconomyParams) -> f64 {
    ep.y_bar * (labor / ep.l_bar).powf(ep.alpha_share)
}

/// Fractional shortfall of output below `y_bar`; negative above it.
pub fn output_gap(y: f64, ep: &EconomyParams) -> f64 {
    1.0 - y / ep.y_bar
}

#[cfg(test)]
mod tests {
    use super::*;

    const DELAYS: ReturnDelays = ReturnDelays {
        general: 14,
        health: 14,
    };

    fn stocks() -> CompartmentState {
        CompartmentState::seeded(884e6, 0.76e6, 0.0, 0.0)
    }

    #[test]
    fn pre_pandemic_labor() {
        let ep = EconomyParams::default();
        assert_eq!(labor_force(&stocks(), 1.0, &ep, DELAYS), 886.28e6);
        assert_eq!(labor_force(&stocks(), 0.5, &ep, DELAYS), 444.28e6);
    }

    #[test]
    fn only_health_workers_left() {
        let ep = EconomyParams::default();
        let mut s = stocks();
        s.general.susceptible = 0.0;
        s.general.severe = 884e6;
        assert_eq!(labor_force(&s, 1.0, &ep, DELAYS), 3.0 * 0.76e6);
    }

    #[test]
    fn output_values() {
        let ep = EconomyParams {
            l_bar: 100.0,
            ..EconomyParams::default()
        };
        assert_eq!(output(100.0, &ep), 2.7e12);
        assert_eq!(output(0.0, &ep), 0.0);
        let half = output(50.0, &ep) / ep.y_bar;
        assert!((half - 0.5_f64.powf(0.35)).abs() < 1e-15);
        assert!((half - 0.7846).abs() < 1e-4);
    }

    #[test]
    fn gap_values() {
        let ep = EconomyParams::default();
        assert_eq!(output_gap(ep.y_bar, &ep), 0.0);
        assert!((output_gap(0.95 * ep.y_bar, &ep) - 0.05).abs() < 1e-15);
        assert!(output_gap(1.1 * ep.y_bar, &ep) < 0.0);
    }

    #[test]
    fn labor_slope_in_theta_is_general_mass() {
        let ep = EconomyParams::default();
        let mut s = stocks();
        s.general.asymptomatic = 1e6;
        let slope = labor_force(&s, 1.0, &ep, DELAYS) - labor_force(&s, 0.0, &ep, DELAYS);
        assert_eq!(slope, general_workers(&s, 14));
    }
}
