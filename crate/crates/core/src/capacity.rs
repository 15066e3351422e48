//! Health-system stress and the probabilities of going untreated.

use serde::{Deserialize, Serialize};

use crate::epidemic::{delayed_recovered, CompartmentState, LockdownPair, Population};
use crate::error::ConfigError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CapacityParams {
    /// Hospital beds, held constant.
    pub beds: f64,
    /// Doctors needed per mild patient.
    pub phi_m: LockdownPair,
    /// Doctors needed per severe patient.
    pub phi_c: LockdownPair,
    pub lambda_m: f64,
    pub lambda_c: f64,
    pub lambda_b: f64,
    /// Stress is clamped to `1 - epsilon_sat` below saturation.
    pub epsilon_sat: f64,
}

impl Default for CapacityParams {
    fn default() -> Self {
        Self {
            beds: 0.49e6,
            phi_m: LockdownPair::new(1.0 / 15.0, 1.0 / 26.0),
            phi_c: LockdownPair::new(1.0 / 7.0, 1.0 / 10.0),
            lambda_m: 2.0,
            lambda_c: 2.0,
            lambda_b: 2.0,
            epsilon_sat: 1e-9,
        }
    }
}

impl CapacityParams {
    pub fn validate(&self, prefix: &str) -> Result<(), ConfigError> {
        let key = |name: &str| format!("{prefix}.{name}");
        if !(self.beds > 0.0 && self.beds.is_finite()) {
            return Err(ConfigError::invalid(
                key("beds"),
                format!("{} must be positive", self.beds),
            ));
        }
        for (name, v) in [
            ("phi_m.open", self.phi_m.open),
            ("phi_m.lockdown", self.phi_m.lockdown),
            ("phi_c.open", self.phi_c.open),
            ("phi_c.lockdown", self.phi_c.lockdown),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ConfigError::invalid(key(name), format!("ratio {v} must lie in (0, 1]")));
            }
        }
        for (name, v) in [
            ("lambda_m", self.lambda_m),
            ("lambda_c", self.lambda_c),
            ("lambda_b", self.lambda_b),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::invalid(key(name), format!("{v} must be positive")));
            }
        }
        if !(self.epsilon_sat > 0.0 && self.epsilon_sat < 0.1) {
            return Err(ConfigError::invalid(
                key("epsilon_sat"),
                format!("{} must lie in (0, 0.1)", self.epsilon_sat),
            ));
        }
        Ok(())
    }
}

/// Health-system load on one day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StressSnapshot {
    /// Doctor demand over doctor supply.
    pub h_g: f64,
    /// Severe patients over beds.
    pub h_b: f64,
    pub doctors_available: f64,
    /// Doctor-demand proxy compared against `h_max` and `l_norm`.
    pub kappa: f64,
    /// Maximum load the system can absorb.
    pub h_max: f64,
    /// Normal operating load.
    pub l_norm: f64,
}

/// Working health staff: susceptible, asymptomatic, and those recovered at
/// least `delta_h` days ago.
pub fn doctors_available(state: &CompartmentState, delta_h: u32) -> f64 {
    let h = &state.health;
    h.susceptible + delayed_recovered(state, Population::Health, delta_h) + h.asymptomatic
}

// sqrt((26 * 10) / (7 * 15))
fn normal_load_divisor() -> f64 {
    (260.0_f64 / 105.0).sqrt()
}

pub fn stress(state: &CompartmentState, cp: &CapacityParams, lockdown_active: bool, delta_h: u32) -> StressSnapshot {
    let im = state.mild();
    let ic = state.severe();
    let doctors = doctors_available(state, delta_h);
    let demand = im * cp.phi_m.select(lockdown_active) + ic * cp.phi_c.select(lockdown_active);
    let h_g = if doctors > 0.0 {
        demand / doctors
    } else if demand > 0.0 {
        f64::INFINITY
    } else {
        0.0
    };
    StressSnapshot {
        h_g,
        h_b: ic / cp.beds,
        doctors_available: doctors,
        kappa: (ic / 7.0 + im / 15.0).min(1.5 * ic),
        h_max: doctors.min(cp.beds),
        l_norm: (2.0 / 3.0 * cp.beds).min(doctors / normal_load_divisor()),
    }
}

/// `1 - exp(-lambda / (1 - g)) / exp(-lambda)` rewritten as `-expm1(-lambda g / (1 - g))`.
fn untreated(lambda: f64, g: f64) -> f64 {
    -(-lambda * g / (1.0 - g)).exp_m1()
}

/// Probability that a mild patient goes untreated.
///
/// Zero at zero stress, rising to exactly one once `h_g >= 1`.
pub fn alpha_m(h_g: f64, lambda_m: f64, epsilon_sat: f64) -> f64 {
    if h_g >= 1.0 {
        return 1.0;
    }
    let g = h_g.min(1.0 - epsilon_sat);
    untreated(lambda_m, g).clamp(0.0, 1.0)
}

/// Probability that a severe patient goes untreated; whichever of doctors or
/// beds is more stressed dominates.
pub fn alpha_c(h_g: f64, h_b: f64, lambda_c: f64, lambda_b: f64, epsilon_sat: f64) -> f64 {
    if h_g >= 1.0 || h_b >= 1.0 {
        return 1.0;
    }
    let g = h_g.min(1.0 - epsilon_sat);
    let b = h_b.min(1.0 - epsilon_sat);
    let worst = (lambda_c / (1.0 - g)).max(lambda_b / (1.0 - b));
    let floor = lambda_c.max(lambda_b);
    // worst - floor >= 0 since 1 / (1 - x) >= 1
    (-(floor - worst).exp_m1()).clamp(0.0, 1.0)
}
