//! Deterministic daily-step macro-SIRD simulator.
//!
//! The epidemic runs through asymptomatic, mild and severe stages for a
//! general population and a health-worker population. Treatment probability
//! falls as doctors and beds saturate. A lockdown controller (none, hard or
//! soft) reduces both transmission and the working labour force, and a loss
//! function trades the output shortfall against deaths over a grid of
//! lockdown rules.
//!
//! Each run is a pure function of its [`ScenarioConfig`]. Sweeps evaluate
//! grid cells in parallel when the `parallel` feature (on by default) is
//! enabled.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capacity;
pub mod economy;
pub mod epidemic;
pub mod error;
pub mod evaluation;
pub mod exec;
pub mod policy;
pub mod report;
pub mod scenario;

pub use capacity::{alpha_c, alpha_m, doctors_available, stress, CapacityParams, StressSnapshot};
pub use economy::{labor_force, output, output_gap, EconomyParams};
pub use epidemic::{
    conservation_check, delayed_recovered, step_disease, CompartmentState, DailyRates, DiseaseParams, LockdownPair,
    Population,
};
pub use error::{ConfigError, ExportError, ModelError, SimError};
pub use evaluation::{loss_psi, policy_sweep, policy_sweep_with, LossCell, LossParams, LossReport};
pub use exec::Execution;
pub use policy::{effective_lambdas, theta_hard, theta_soft, ControllerState, PolicyRegime, RegimeKind};
pub use report::{quarterly_table, QuarterRow};
pub use scenario::{load_scenario, run_scenario, ScenarioConfig, Simulation, Trajectory, TrajectoryRow};
