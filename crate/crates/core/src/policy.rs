//! Lockdown controllers and lockdown-adjusted transmission rates.
//!
//! `theta` is the share of the general labour force allowed to work. It also
//! scales transmission by `theta^(1 + nu)`.

use serde::{Deserialize, Serialize};

use crate::capacity::StressSnapshot;
use crate::epidemic::DiseaseParams;
use crate::error::{ConfigError, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    #[default]
    None,
    /// Two-level lockdown with a trigger/release hysteresis band.
    Hard,
    /// Lockdown depth follows a power rule of normalized stress.
    Soft,
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegimeKind::None => "none",
            RegimeKind::Hard => "hard",
            RegimeKind::Soft => "soft",
        })
    }
}

impl std::str::FromStr for RegimeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(RegimeKind::None),
            "hard" => Ok(RegimeKind::Hard),
            "soft" => Ok(RegimeKind::Soft),
            other => Err(format!("unknown regime `{other}` (expected none, hard or soft)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyRegime {
    pub kind: RegimeKind,
    /// Activity floor under full lockdown.
    pub theta0: f64,
    /// Power-rule exponent: below 1 concave, 1 linear, above 1 convex.
    pub mu: f64,
    /// Normalized stress at which the soft controller first engages.
    pub activation_stress: f64,
}

impl Default for PolicyRegime {
    fn default() -> Self {
        Self {
            kind: RegimeKind::None,
            theta0: 0.5,
            mu: 1.0,
            activation_stress: 0.75,
        }
    }
}

impl PolicyRegime {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn hard(theta0: f64) -> Self {
        Self {
            kind: RegimeKind::Hard,
            theta0,
            ..Self::default()
        }
    }

    pub fn soft(theta0: f64, mu: f64) -> Self {
        Self {
            kind: RegimeKind::Soft,
            theta0,
            mu,
            ..Self::default()
        }
    }

    pub fn validate(&self, prefix: &str) -> Result<(), ConfigError> {
        if !(self.theta0 > 0.0 && self.theta0 < 1.0) {
            return Err(ConfigError::invalid(
                format!("{prefix}.theta0"),
                format!("{} must lie in (0, 1)", self.theta0),
            ));
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(ConfigError::invalid(
                format!("{prefix}.mu"),
                format!("{} must be >= 0", self.mu),
            ));
        }
        if !(0.0..=1.0).contains(&self.activation_stress) {
            return Err(ConfigError::invalid(
                format!("{prefix}.activation_stress"),
                format!("{} must lie in [0, 1]", self.activation_stress),
            ));
        }
        Ok(())
    }
}

/// Per-run controller memory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControllerState {
    /// Hard regime: a lockdown is in force.
    pub in_lockdown: bool,
    /// Soft regime: the power rule is active for the current episode.
    pub engaged: bool,
    pub theta_prev: f64,
}

impl Default for ControllerState {
    fn default() -> Self {
        Self {
            in_lockdown: false,
            engaged: false,
            theta_prev: 1.0,
        }
    }
}

/// Two-level controller. Locks down once `kappa` reaches `h_max`, reopens
/// once it falls below `l_norm`, and holds its last decision in between.
pub fn theta_hard(snap: &StressSnapshot, regime: &PolicyRegime, ctrl: ControllerState) -> (f64, ControllerState) {
    let in_lockdown = if snap.kappa >= snap.h_max {
        true
    } else if snap.kappa < snap.l_norm {
        false
    } else {
        ctrl.in_lockdown
    };
    let theta = if in_lockdown { regime.theta0 } else { 1.0 };
    (
        theta,
        ControllerState {
            in_lockdown,
            theta_prev: theta,
            ..ctrl
        },
    )
}

/// `Z^mu`, with `Z^0` taken as 0 at `Z = 0` and 1 elsewhere.
pub fn power_rule(z: f64, mu: f64) -> f64 {
    if mu == 0.0 {
        if z > 0.0 {
            1.0
        } else {
            0.0
        }
    } else {
        z.powf(mu)
    }
}

/// Position of `kappa` inside the `[l_norm, h_max]` band, clamped to `[0, 1]`.
pub fn normalized_stress(snap: &StressSnapshot) -> Result<f64, ModelError> {
    let width = snap.h_max - snap.l_norm;
    if !(width > 0.0) {
        return Err(ModelError::DegenerateBand {
            h_max: snap.h_max,
            l_norm: snap.l_norm,
        });
    }
    Ok(((snap.kappa - snap.l_norm) / width).clamp(0.0, 1.0))
}

/// Power-rule controller. Stays open until normalized stress reaches the
/// activation level, then sets `theta = (theta0 - 1) Z^mu + 1` until stress
/// falls back to zero, after which it may engage again.
pub fn theta_soft(
    snap: &StressSnapshot,
    regime: &PolicyRegime,
    ctrl: ControllerState,
) -> Result<(f64, ControllerState), ModelError> {
    let z = normalized_stress(snap)?;
    let engaged = if ctrl.engaged {
        z > 0.0
    } else {
        z >= regime.activation_stress
    };
    let theta = if engaged {
        ((regime.theta0 - 1.0) * power_rule(z, regime.mu) + 1.0).clamp(regime.theta0, 1.0)
    } else {
        1.0
    };
    Ok((
        theta,
        ControllerState {
            engaged,
            theta_prev: theta,
            ..ctrl
        },
    ))
}

/// Dispatch on the regime kind.
pub fn next_theta(
    snap: &StressSnapshot,
    regime: &PolicyRegime,
    ctrl: ControllerState,
) -> Result<(f64, ControllerState), ModelError> {
    match regime.kind {
        RegimeKind::None => Ok((
            1.0,
            ControllerState {
                theta_prev: 1.0,
                ..ctrl
            },
        )),
        RegimeKind::Hard => Ok(theta_hard(snap, regime, ctrl)),
        RegimeKind::Soft => theta_soft(snap, regime, ctrl),
    }
}

/// Transmission rates `(lambda_g, lambda_h)` for `theta` on `day`. The
/// post-mutation bases apply strictly after `mutation_day`.
pub fn effective_lambdas(p: &DiseaseParams, theta: f64, day: u32) -> (f64, f64) {
    let (base_g, base_h) = if day > p.mutation_day {
        (p.lambda_g_post, p.lambda_h_post)
    } else {
        (p.lambda_g_pre(), p.cm_h_ci_h)
    };
    let scale = theta.powf(1.0 + p.nu);
    (base_g * scale, base_h * scale)
}
