//! Compartment stocks and the daily transition equations.
//!
//! Every compartment is tagged by population of origin (general or health
//! worker) and both tags run through identical transition coefficients.
//! Stocks are continuous; there is no rounding to whole persons.

use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, ModelError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Population {
    General,
    Health,
}

/// A parameter that takes one value with no lockdown in force and another
/// while a lockdown is active.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LockdownPair {
    pub open: f64,
    pub lockdown: f64,
}

impl LockdownPair {
    pub const fn new(open: f64, lockdown: f64) -> Self {
        Self { open, lockdown }
    }

    pub fn select(&self, lockdown_active: bool) -> f64 {
        if lockdown_active {
            self.lockdown
        } else {
            self.open
        }
    }
}

/// Lags, in days, before a recovered person returns to work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReturnDelays {
    pub general: u32,
    pub health: u32,
}

/// Rates, probabilities, delays and the mutation event of the disease model.
///
/// `delta_a`, `delta_m` and `delta_i` are accepted for completeness but no
/// equation reads them: the depletion rates `beta0`, `beta1` and `gamma1` are
/// given directly. Note that the default `beta0 = 0.01` is not `1 / delta_a`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiseaseParams {
    pub beta0: f64,
    pub beta1: f64,
    pub gamma1: f64,
    pub alpha0: f64,
    pub alpha1: f64,
    pub alpha22: f64,
    pub alpha3: f64,
    pub alpha42: f64,
    /// Mixing rate of the general population.
    pub cm_g: f64,
    /// Infection rate of the general population.
    pub ci_g: f64,
    /// Base transmission rate among health workers (the c_m * c_i product).
    pub cm_h_ci_h: f64,
    pub nu: f64,
    /// Share of asymptomatic people in contact with health workers.
    pub lambda0: LockdownPair,
    /// Share of treated mild patients in contact with health workers.
    pub lambda1: LockdownPair,
    pub delta_g: u32,
    pub delta_h: u32,
    pub delta_a: u32,
    pub delta_m: u32,
    pub delta_i: u32,
    pub mutation_day: u32,
    pub lambda_g_post: f64,
    pub lambda_h_post: f64,
    /// Total population. Derived from the initial stocks, never read from
    /// configuration.
    #[serde(skip)]
    pub population: f64,
}

impl Default for DiseaseParams {
    fn default() -> Self {
        Self {
            beta0: 0.01,
            beta1: 0.13,
            gamma1: 0.06,
            alpha0: 0.4,
            alpha1: 0.1,
            alpha22: 0.3,
            alpha3: 0.01,
            alpha42: 0.1,
            cm_g: 0.02,
            ci_g: 6.0,
            cm_h_ci_h: 0.08,
            nu: 0.2,
            lambda0: LockdownPair::new(0.7, 0.2),
            lambda1: LockdownPair::new(0.6, 0.5),
            delta_g: 14,
            delta_h: 14,
            delta_a: 3,
            delta_m: 5,
            delta_i: 14,
            mutation_day: 450,
            lambda_g_post: 0.168,
            lambda_h_post: 0.1,
            population: 884e6 + 0.76e6 + 1000.0,
        }
    }
}

impl DiseaseParams {
    pub fn return_delays(&self) -> ReturnDelays {
        ReturnDelays {
            general: self.delta_g,
            health: self.delta_h,
        }
    }

    /// Pre-mutation base transmission rate of the general population.
    pub fn lambda_g_pre(&self) -> f64 {
        self.cm_g * self.ci_g
    }

    pub fn validate(&self, prefix: &str) -> Result<(), ConfigError> {
        let key = |name: &str| format!("{prefix}.{name}");
        for (name, v) in [
            ("beta0", self.beta0),
            ("beta1", self.beta1),
            ("gamma1", self.gamma1),
            ("cm_h_ci_h", self.cm_h_ci_h),
            ("lambda_g_post", self.lambda_g_post),
            ("lambda_h_post", self.lambda_h_post),
        ] {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ConfigError::invalid(key(name), format!("rate {v} must lie in (0, 1]")));
            }
        }
        for (name, v) in [
            ("alpha0", self.alpha0),
            ("alpha1", self.alpha1),
            ("alpha22", self.alpha22),
            ("alpha3", self.alpha3),
            ("alpha42", self.alpha42),
            ("lambda0.open", self.lambda0.open),
            ("lambda0.lockdown", self.lambda0.lockdown),
            ("lambda1.open", self.lambda1.open),
            ("lambda1.lockdown", self.lambda1.lockdown),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::invalid(
                    key(name),
                    format!("probability {v} must lie in [0, 1]"),
                ));
            }
        }
        for (name, v) in [("cm_g", self.cm_g), ("ci_g", self.ci_g)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::invalid(key(name), format!("{v} must be positive")));
            }
        }
        let pre = self.lambda_g_pre();
        if pre > 1.0 {
            return Err(ConfigError::invalid(
                key("ci_g"),
                format!("cm_g * ci_g = {pre} must not exceed 1"),
            ));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(ConfigError::invalid(key("nu"), format!("{} must be >= 0", self.nu)));
        }
        Ok(())
    }
}

/// One population's chain of compartments.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    pub susceptible: f64,
    pub asymptomatic: f64,
    pub mild: f64,
    pub severe: f64,
    pub recovered: f64,
}

impl Chain {
    fn total(&self) -> f64 {
        self.susceptible + self.asymptomatic + self.mild + self.severe + self.recovered
    }
}

/// Running totals of flows, used for the quarterly summaries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CumulativeFlows {
    /// Everyone who has ever entered an asymptomatic compartment, seeds included.
    pub asymptomatic_entries: f64,
    pub mild_entries: f64,
    pub severe_entries: f64,
    /// Recoveries out of the mild and severe compartments.
    pub symptomatic_recoveries: f64,
}

/// All epidemic stocks on one day.
#[derive(Debug, Clone, PartialEq)]
pub struct CompartmentState {
    pub day: u32,
    pub general: Chain,
    pub health: Chain,
    pub deaths: f64,
    pub cumulative: CumulativeFlows,
    // recovered stock at the start of each day, index = day
    recovered_general: Vec<f64>,
    recovered_health: Vec<f64>,
}

impl CompartmentState {
    /// Day-zero state with the given susceptible and asymptomatic seeds.
    pub fn seeded(s_g: f64, s_h: f64, a_g: f64, a_h: f64) -> Self {
        Self {
            day: 0,
            general: Chain {
                susceptible: s_g,
                asymptomatic: a_g,
                ..Chain::default()
            },
            health: Chain {
                susceptible: s_h,
                asymptomatic: a_h,
                ..Chain::default()
            },
            deaths: 0.0,
            cumulative: CumulativeFlows {
                asymptomatic_entries: a_g + a_h,
                ..CumulativeFlows::default()
            },
            recovered_general: vec![0.0],
            recovered_health: vec![0.0],
        }
    }

    pub fn chain(&self, tag: Population) -> &Chain {
        match tag {
            Population::General => &self.general,
            Population::Health => &self.health,
        }
    }

    pub fn total(&self) -> f64 {
        self.general.total() + self.health.total() + self.deaths
    }

    pub fn asymptomatic(&self) -> f64 {
        self.general.asymptomatic + self.health.asymptomatic
    }

    pub fn mild(&self) -> f64 {
        self.general.mild + self.health.mild
    }

    pub fn severe(&self) -> f64 {
        self.general.severe + self.health.severe
    }

    pub fn recovered(&self) -> f64 {
        self.general.recovered + self.health.recovered
    }

    pub fn susceptible(&self) -> f64 {
        self.general.susceptible + self.health.susceptible
    }

    fn history(&self, tag: Population) -> &[f64] {
        match tag {
            Population::General => &self.recovered_general,
            Population::Health => &self.recovered_health,
        }
    }
}

/// `(sum of all stocks) - population`.
pub fn conservation_check(state: &CompartmentState, population: f64) -> f64 {
    state.total() - population
}

/// Recovered stock of `tag` as it stood `delta` days ago; zero before the
/// history reaches back that far.
pub fn delayed_recovered(state: &CompartmentState, tag: Population, delta: u32) -> f64 {
    if delta == 0 {
        return state.chain(tag).recovered;
    }
    match state.day.checked_sub(delta) {
        Some(lagged) => state.history(tag).get(lagged as usize).copied().unwrap_or(0.0),
        None => 0.0,
    }
}

/// Time-varying inputs to one transition step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DailyRates {
    pub lambda_g: f64,
    pub lambda_h: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub alpha_m: f64,
    pub alpha_c: f64,
}

/// Share of mild-compartment outflow that recovers.
pub fn mild_recovery_coefficient(alpha_m: f64, p: &DiseaseParams) -> f64 {
    alpha_m * (1.0 - p.alpha22) + (1.0 - alpha_m) * (1.0 - p.alpha1)
}

/// Share of mild-compartment outflow that becomes severe.
pub fn mild_progression_coefficient(alpha_m: f64, p: &DiseaseParams) -> f64 {
    1.0 - mild_recovery_coefficient(alpha_m, p)
}

/// Share of severe-compartment outflow that recovers.
pub fn severe_recovery_coefficient(alpha_c: f64, p: &DiseaseParams) -> f64 {
    alpha_c * (1.0 - p.alpha42) + (1.0 - alpha_c) * (1.0 - p.alpha3)
}

/// Share of severe-compartment outflow that dies.
pub fn severe_death_coefficient(alpha_c: f64, p: &DiseaseParams) -> f64 {
    1.0 - severe_recovery_coefficient(alpha_c, p)
}

/// Flows realised during one step, summed over both populations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DayFlows {
    pub new_infections_general: f64,
    pub new_infections_health: f64,
    pub new_mild: f64,
    pub new_severe: f64,
    pub new_recoveries: f64,
    pub new_deaths: f64,
}

#[derive(Debug, Clone, Copy)]
struct ChainFlows {
    infected: f64,
    to_mild: f64,
    asymptomatic_out: f64,
    mild_out: f64,
    to_severe: f64,
    severe_out: f64,
    recoveries: f64,
    symptomatic_recoveries: f64,
    deaths: f64,
}

fn chain_flows(chain: &Chain, infected: f64, p: &DiseaseParams, mild_rec: f64, severe_rec: f64) -> ChainFlows {
    let asymptomatic_out = p.beta0 * chain.asymptomatic;
    let to_mild = p.alpha0 * asymptomatic_out;
    let asymptomatic_rec = asymptomatic_out - to_mild;

    let mild_out = p.beta1 * chain.mild;
    let mild_recovered = mild_rec * mild_out;
    let to_severe = mild_out - mild_recovered;

    let severe_out = p.gamma1 * chain.severe;
    let severe_recovered = severe_rec * severe_out;
    let deaths = severe_out - severe_recovered;

    ChainFlows {
        infected,
        to_mild,
        asymptomatic_out,
        mild_out,
        to_severe,
        severe_out,
        recoveries: asymptomatic_rec + mild_recovered + severe_recovered,
        symptomatic_recoveries: mild_recovered + severe_recovered,
        deaths,
    }
}

fn apply(chain: &Chain, f: &ChainFlows) -> Chain {
    Chain {
        susceptible: chain.susceptible - f.infected,
        asymptomatic: chain.asymptomatic + f.infected - f.asymptomatic_out,
        mild: chain.mild + f.to_mild - f.mild_out,
        severe: chain.severe + f.to_severe - f.severe_out,
        recovered: chain.recovered + f.recoveries,
    }
}

fn check_inputs(r: &DailyRates) -> Result<(), ModelError> {
    for (name, value) in [
        ("lambda_g", r.lambda_g),
        ("lambda_h", r.lambda_h),
        ("lambda0", r.lambda0),
        ("lambda1", r.lambda1),
        ("alpha_m", r.alpha_m),
        ("alpha_c", r.alpha_c),
    ] {
        if !value.is_finite() {
            return Err(ModelError::NonFinite { name, value });
        }
    }
    for (name, value) in [
        ("lambda0", r.lambda0),
        ("lambda1", r.lambda1),
        ("alpha_m", r.alpha_m),
        ("alpha_c", r.alpha_c),
    ] {
        if !(0.0..=1.0).contains(&value) {
            return Err(ModelError::ProbabilityRange { name, value });
        }
    }
    Ok(())
}

fn check_non_negative(general: &Chain, health: &Chain) -> Result<(), ModelError> {
    let stocks = [
        ("S_g", general.susceptible),
        ("A_g", general.asymptomatic),
        ("Im_g", general.mild),
        ("Ic_g", general.severe),
        ("R_g", general.recovered),
        ("S_h", health.susceptible),
        ("A_h", health.asymptomatic),
        ("Im_h", health.mild),
        ("Ic_h", health.severe),
        ("R_h", health.recovered),
    ];
    match stocks.into_iter().find(|(_, v)| !(*v >= 0.0)) {
        Some((compartment, value)) => Err(ModelError::NegativeStock { compartment, value }),
        None => Ok(()),
    }
}

/// Advance `state` by one day.
///
/// General infections come only from asymptomatic contact; health workers are
/// also exposed to severe and (a share of) mild patients. On error the state
/// is left untouched.
pub fn step_disease(
    state: &mut CompartmentState,
    p: &DiseaseParams,
    rates: &DailyRates,
) -> Result<DayFlows, ModelError> {
    check_inputs(rates)?;
    let n = p.population;
    let a = state.asymptomatic();
    let im = state.mild();
    let ic = state.severe();

    let infected_g = rates.lambda_g * state.general.susceptible * a / n;
    let exposure_h = rates.lambda0 * a + ic + rates.lambda1 * im;
    let infected_h = rates.lambda_h * state.health.susceptible * exposure_h / n;

    let mild_rec = mild_recovery_coefficient(rates.alpha_m, p);
    let severe_rec = severe_recovery_coefficient(rates.alpha_c, p);
    let fg = chain_flows(&state.general, infected_g, p, mild_rec, severe_rec);
    let fh = chain_flows(&state.health, infected_h, p, mild_rec, severe_rec);

    let general = apply(&state.general, &fg);
    let health = apply(&state.health, &fh);
    check_non_negative(&general, &health)?;

    let flows = DayFlows {
        new_infections_general: infected_g,
        new_infections_health: infected_h,
        new_mild: fg.to_mild + fh.to_mild,
        new_severe: fg.to_severe + fh.to_severe,
        new_recoveries: fg.recoveries + fh.recoveries,
        new_deaths: fg.deaths + fh.deaths,
    };

    state.general = general;
    state.health = health;
    state.deaths += flows.new_deaths;
    let c = &mut state.cumulative;
    c.asymptomatic_entries += infected_g + infected_h;
    c.mild_entries += flows.new_mild;
    c.severe_entries += flows.new_severe;
    c.symptomatic_recoveries += fg.symptomatic_recoveries + fh.symptomatic_recoveries;
    state.day += 1;
    state.recovered_general.push(general.recovered);
    state.recovered_health.push(health.recovered);
    Ok(flows)
}
