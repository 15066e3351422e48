//! Scenario configuration and the day-by-day driver.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::capacity::{alpha_c, alpha_m, stress, CapacityParams, StressSnapshot};
use crate::economy::{labor_force, output, output_gap, EconomyParams};
use crate::epidemic::{step_disease, CompartmentState, DailyRates, DiseaseParams};
use crate::error::{ConfigError, ModelError, SimError};
use crate::evaluation::LossParams;
use crate::policy::{effective_lambdas, next_theta, ControllerState, PolicyRegime};

/// Day-zero stocks. Every other compartment starts empty.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialSeeds {
    pub s_g: f64,
    pub s_h: f64,
    pub a_g: f64,
    pub a_h: f64,
}

impl Default for InitialSeeds {
    fn default() -> Self {
        Self {
            s_g: 884e6,
            s_h: 0.76e6,
            a_g: 1000.0,
            a_h: 0.0,
        }
    }
}

impl InitialSeeds {
    pub fn state(&self) -> CompartmentState {
        CompartmentState::seeded(self.s_g, self.s_h, self.a_g, self.a_h)
    }

    pub fn population(&self) -> f64 {
        self.state().total()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub run_days: u32,
    pub initial: InitialSeeds,
    pub disease: DiseaseParams,
    pub capacity: CapacityParams,
    pub economy: EconomyParams,
    pub policy: PolicyRegime,
    pub loss: LossParams,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let mut cfg = Self {
            run_days: 810,
            initial: InitialSeeds::default(),
            disease: DiseaseParams::default(),
            capacity: CapacityParams::default(),
            economy: EconomyParams::default(),
            policy: PolicyRegime::default(),
            loss: LossParams::default(),
        };
        cfg.derive();
        cfg
    }
}

impl ScenarioConfig {
    /// Recompute the quantities that follow from the initial stocks.
    fn derive(&mut self) {
        let state = self.initial.state();
        self.disease.population = state.total();
        self.economy.l_bar = labor_force(&state, 1.0, &self.economy, self.disease.return_delays());
    }

    /// Check every invariant and recompute derived quantities.
    pub fn finalize(&mut self) -> Result<(), ConfigError> {
        for (name, v) in [
            ("s_g", self.initial.s_g),
            ("s_h", self.initial.s_h),
            ("a_g", self.initial.a_g),
            ("a_h", self.initial.a_h),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ConfigError::invalid(
                    format!("initial.{name}"),
                    format!("{v} must be >= 0"),
                ));
            }
        }
        if !(self.initial.population() > 0.0) {
            return Err(ConfigError::invalid("initial", "population must be positive"));
        }
        self.disease.validate("disease")?;
        self.capacity.validate("capacity")?;
        self.economy.validate("economy")?;
        self.policy.validate("policy")?;
        self.loss.validate("loss")?;
        self.derive();
        if !(self.economy.l_bar > 0.0) {
            return Err(ConfigError::invalid(
                "initial",
                "day-zero labour force must be positive",
            ));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String, ConfigError> {
        Ok(toml::to_string(self)?)
    }
}

/// Parse and validate a TOML scenario. Omitted keys take their defaults;
/// unknown keys are rejected.
pub fn load_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let de = toml::Deserializer::parse(text).map_err(|e| ConfigError::Parse {
        path: "<document>".into(),
        message: e.message().to_string(),
    })?;
    let mut cfg: ScenarioConfig = serde_path_to_error::deserialize(de).map_err(|e| ConfigError::Parse {
        path: e.path().to_string(),
        message: e.inner().message().to_string(),
    })?;
    cfg.finalize()?;
    Ok(cfg)
}

pub fn load_scenario_file(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    load_scenario(&text)
}

/// One simulated day.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub day: u32,
    pub s_g: f64,
    pub s_h: f64,
    pub a_g: f64,
    pub a_h: f64,
    pub im_g: f64,
    pub im_h: f64,
    pub ic_g: f64,
    pub ic_h: f64,
    pub r_g: f64,
    pub r_h: f64,
    /// Cumulative deaths.
    pub deaths: f64,
    pub theta: f64,
    pub lambda_g: f64,
    pub lambda_h: f64,
    pub h_g: f64,
    pub h_b: f64,
    pub alpha_m: f64,
    pub alpha_c: f64,
    pub kappa: f64,
    pub h_max: f64,
    pub l_norm: f64,
    pub labor: f64,
    pub output: f64,
    pub output_gap: f64,
    pub lockdown_active: bool,
    pub asymptomatic_entries: f64,
    pub mild_entries: f64,
    pub severe_entries: f64,
    pub symptomatic_recoveries: f64,
}

impl TrajectoryRow {
    pub const COLUMNS: [&'static str; 30] = [
        "day",
        "s_g",
        "s_h",
        "a_g",
        "a_h",
        "im_g",
        "im_h",
        "ic_g",
        "ic_h",
        "r_g",
        "r_h",
        "deaths",
        "theta",
        "lambda_g",
        "lambda_h",
        "h_g",
        "h_b",
        "alpha_m",
        "alpha_c",
        "kappa",
        "h_max",
        "l_norm",
        "labor",
        "output",
        "output_gap",
        "lockdown_active",
        "asymptomatic_entries",
        "mild_entries",
        "severe_entries",
        "symptomatic_recoveries",
    ];

    pub fn mild(&self) -> f64 {
        self.im_g + self.im_h
    }

    pub fn severe(&self) -> f64 {
        self.ic_g + self.ic_h
    }

    pub fn asymptomatic(&self) -> f64 {
        self.a_g + self.a_h
    }

    pub fn recovered(&self) -> f64 {
        self.r_g + self.r_h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub rows: Vec<TrajectoryRow>,
    pub population: f64,
    pub y_bar: f64,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectoryRow> {
        self.rows.last()
    }

    pub fn at(&self, day: u32) -> Option<&TrajectoryRow> {
        self.rows.get(day as usize).filter(|r| r.day == day)
    }

    /// New asymptomatic entries during each step; one fewer entry than rows.
    pub fn daily_new_infections(&self) -> Vec<f64> {
        self.rows
            .windows(2)
            .map(|w| w[1].asymptomatic_entries - w[0].asymptomatic_entries)
            .collect()
    }

    /// `(start, end)` day pairs of each lockdown episode. `end` is the first
    /// open day, or `None` if the episode runs to the end.
    pub fn lockdown_episodes(&self) -> Vec<(u32, Option<u32>)> {
        let mut episodes = Vec::new();
        let mut start = None;
        for r in &self.rows {
            match (start, r.lockdown_active) {
                (None, true) => start = Some(r.day),
                (Some(s), false) => {
                    episodes.push((s, Some(r.day)));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            episodes.push((s, None));
        }
        episodes
    }
}

/// Controls in force on one day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayControls {
    pub theta: f64,
    pub lockdown_active: bool,
    pub snapshot: StressSnapshot,
    pub rates: DailyRates,
}

/// Stepwise simulation of one scenario. Owns its state and controller memory.
#[derive(Debug, Clone)]
pub struct Simulation<'a> {
    cfg: &'a ScenarioConfig,
    state: CompartmentState,
    ctrl: ControllerState,
}

impl<'a> Simulation<'a> {
    pub fn new(cfg: &'a ScenarioConfig) -> Self {
        Self {
            cfg,
            state: cfg.initial.state(),
            ctrl: ControllerState::default(),
        }
    }

    pub fn state(&self) -> &CompartmentState {
        &self.state
    }

    /// Stress, then the controller, then lockdown-keyed rates and treatment
    /// probabilities. Advances controller memory.
    pub fn controls(&mut self) -> Result<DayControls, ModelError> {
        let cfg = self.cfg;
        let delta_h = cfg.disease.delta_h;
        // kappa, h_max and l_norm do not depend on the lockdown flag
        let probe = stress(&self.state, &cfg.capacity, self.ctrl.theta_prev < 1.0, delta_h);
        let (theta, ctrl) = next_theta(&probe, &cfg.policy, self.ctrl)?;
        self.ctrl = ctrl;
        let lockdown_active = theta < 1.0;
        let snapshot = stress(&self.state, &cfg.capacity, lockdown_active, delta_h);
        let (lambda_g, lambda_h) = effective_lambdas(&cfg.disease, theta, self.state.day);
        let cp = &cfg.capacity;
        let rates = DailyRates {
            lambda_g,
            lambda_h,
            lambda0: cfg.disease.lambda0.select(lockdown_active),
            lambda1: cfg.disease.lambda1.select(lockdown_active),
            alpha_m: alpha_m(snapshot.h_g, cp.lambda_m, cp.epsilon_sat),
            alpha_c: alpha_c(snapshot.h_g, snapshot.h_b, cp.lambda_c, cp.lambda_b, cp.epsilon_sat),
        };
        Ok(DayControls {
            theta,
            lockdown_active,
            snapshot,
            rates,
        })
    }

    /// Record the current day under `c`, including labour and output.
    pub fn observe(&self, c: &DayControls) -> TrajectoryRow {
        let s = &self.state;
        let ep = &self.cfg.economy;
        let labor = labor_force(s, c.theta, ep, self.cfg.disease.return_delays());
        let y = output(labor, ep);
        TrajectoryRow {
            day: s.day,
            s_g: s.general.susceptible,
            s_h: s.health.susceptible,
            a_g: s.general.asymptomatic,
            a_h: s.health.asymptomatic,
            im_g: s.general.mild,
            im_h: s.health.mild,
            ic_g: s.general.severe,
            ic_h: s.health.severe,
            r_g: s.general.recovered,
            r_h: s.health.recovered,
            deaths: s.deaths,
            theta: c.theta,
            lambda_g: c.rates.lambda_g,
            lambda_h: c.rates.lambda_h,
            h_g: c.snapshot.h_g,
            h_b: c.snapshot.h_b,
            alpha_m: c.rates.alpha_m,
            alpha_c: c.rates.alpha_c,
            kappa: c.snapshot.kappa,
            h_max: c.snapshot.h_max,
            l_norm: c.snapshot.l_norm,
            labor,
            output: y,
            output_gap: output_gap(y, ep),
            lockdown_active: c.lockdown_active,
            asymptomatic_entries: s.cumulative.asymptomatic_entries,
            mild_entries: s.cumulative.mild_entries,
            severe_entries: s.cumulative.severe_entries,
            symptomatic_recoveries: s.cumulative.symptomatic_recoveries,
        }
    }

    pub fn step(&mut self, c: &DayControls) -> Result<(), ModelError> {
        step_disease(&mut self.state, &self.cfg.disease, &c.rates).map(|_| ())
    }
}

/// Simulate `cfg.run_days` days. Row `t` holds the stocks at the start of day
/// `t` together with the controls and output in force that day.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Trajectory, SimError> {
    let mut sim = Simulation::new(cfg);
    let mut rows = Vec::with_capacity(cfg.run_days as usize + 1);
    loop {
        let day = sim.state.day;
        let annotate = |source| SimError { day, source };
        let controls = sim.controls().map_err(annotate)?;
        rows.push(sim.observe(&controls));
        if day >= cfg.run_days {
            break;
        }
        sim.step(&controls).map_err(annotate)?;
    }
    Ok(Trajectory {
        rows,
        population: cfg.disease.population,
        y_bar: cfg.economy.y_bar,
    })
}
