//! Independent re-derivations of model quantities, checked against the
//! library.

use proptest::prelude::*;

use macro_sird::{
    alpha_c, alpha_m, output, run_scenario, DiseaseParams, EconomyParams, PolicyRegime, ScenarioConfig, Trajectory,
};

/// Aggregate stocks with both populations pooled past the susceptible stage.
#[derive(Debug, Clone, Copy)]
struct Pooled {
    s_g: f64,
    s_h: f64,
    a: f64,
    im: f64,
    ic: f64,
    r: f64,
    d: f64,
}

impl Pooled {
    fn from_row(r: &macro_sird::TrajectoryRow) -> Self {
        Self {
            s_g: r.s_g,
            s_h: r.s_h,
            a: r.a_g + r.a_h,
            im: r.im_g + r.im_h,
            ic: r.ic_g + r.ic_h,
            r: r.r_g + r.r_h,
            d: r.deaths,
        }
    }

    /// The transition equations written out literally, with every branch
    /// probability spelled out instead of taken as a complement.
    #[allow(clippy::too_many_arguments)]
    fn step(self, p: &DiseaseParams, n: f64, lg: f64, lh: f64, l0: f64, l1: f64, am: f64, ac: f64) -> Self {
        let inf_g = lg * self.s_g * self.a / n;
        let inf_h = lh * self.s_h * (l0 * self.a + self.ic + l1 * self.im) / n;
        let progress = am * p.alpha22 + (1.0 - am) * p.alpha1;
        let die = ac * p.alpha42 + (1.0 - ac) * p.alpha3;
        Self {
            s_g: self.s_g - inf_g,
            s_h: self.s_h - inf_h,
            a: self.a + inf_g + inf_h - p.beta0 * self.a,
            im: self.im + p.alpha0 * p.beta0 * self.a - p.beta1 * self.im,
            ic: self.ic + progress * p.beta1 * self.im - p.gamma1 * self.ic,
            r: self.r
                + (1.0 - p.alpha0) * p.beta0 * self.a
                + (1.0 - progress) * p.beta1 * self.im
                + (1.0 - die) * p.gamma1 * self.ic,
            d: self.d + die * p.gamma1 * self.ic,
        }
    }

    fn fields(&self) -> [f64; 7] {
        [self.s_g, self.s_h, self.a, self.im, self.ic, self.r, self.d]
    }
}

fn replay_matches(traj: &Trajectory, p: &DiseaseParams) {
    let n = traj.population;
    let mut oracle = Pooled::from_row(&traj.rows[0]);
    for w in traj.rows.windows(2) {
        let today = &w[0];
        let locked = today.lockdown_active;
        let pick = |open: f64, lock: f64| if locked { lock } else { open };
        oracle = oracle.step(
            p,
            n,
            today.lambda_g,
            today.lambda_h,
            pick(p.lambda0.open, p.lambda0.lockdown),
            pick(p.lambda1.open, p.lambda1.lockdown),
            today.alpha_m,
            today.alpha_c,
        );
        let got = Pooled::from_row(&w[1]).fields();
        for (i, (o, g)) in oracle.fields().iter().zip(got).enumerate() {
            assert!(
                (o - g).abs() <= 1e-9 * n,
                "day {} field {i}: oracle {o} vs model {g}",
                w[1].day
            );
        }
    }
}

#[test]
fn pooled_replay_matches_every_regime() {
    for policy in [
        PolicyRegime::none(),
        PolicyRegime::hard(0.5),
        PolicyRegime::soft(0.3, 2.0),
    ] {
        let mut cfg = ScenarioConfig {
            policy,
            ..ScenarioConfig::default()
        };
        cfg.finalize().unwrap();
        let traj = run_scenario(&cfg).unwrap();
        replay_matches(&traj, &cfg.disease);
    }
}

#[test]
fn first_day_new_infections() {
    let traj = run_scenario(&ScenarioConfig::default()).unwrap();
    let n = 884e6 + 0.76e6 + 1000.0;
    let general = 0.02 * 6.0 * 884e6 * 1000.0 / n;
    let health = 0.08 * 0.76e6 * 0.7 * 1000.0 / n;
    let got = traj.rows[1].asymptomatic_entries - traj.rows[0].asymptomatic_entries;
    assert!((got - general - health).abs() < 1e-9, "{got} vs {}", general + health);
    assert!((general - 119.9).abs() < 0.05);
}

#[test]
fn day_zero_labour_and_output() {
    let traj = run_scenario(&ScenarioConfig::default()).unwrap();
    let r = &traj.rows[0];
    assert_eq!(r.labor, 884e6 + 1000.0 + 3.0 * 0.76e6);
    assert_eq!(r.output, 2.7e12);
}

fn literal_alpha_m(h: f64, lam: f64, eps: f64) -> f64 {
    if h >= 1.0 {
        return 1.0;
    }
    let h = h.min(1.0 - eps);
    1.0 - lam.exp() * (-lam / (1.0 - h)).exp()
}

fn literal_alpha_c(g: f64, b: f64, lc: f64, lb: f64, eps: f64) -> f64 {
    if g >= 1.0 || b >= 1.0 {
        return 1.0;
    }
    let (g, b) = (g.min(1.0 - eps), b.min(1.0 - eps));
    1.0 - lc.max(lb).exp() * (-(lc / (1.0 - g)).max(lb / (1.0 - b))).exp()
}

proptest! {
    #[test]
    fn untreated_probabilities_match_literal_form(g in 0.0..1.2f64, b in 0.0..1.2f64, lam in 0.1..4.0f64) {
        let eps = 1e-9;
        prop_assert!((alpha_m(g, lam, eps) - literal_alpha_m(g, lam, eps)).abs() < 1e-9);
        prop_assert!((alpha_c(g, b, lam, 2.0, eps) - literal_alpha_c(g, b, lam, 2.0, eps)).abs() < 1e-9);
    }

    #[test]
    fn output_matches_cobb_douglas(share in 0.05..0.95f64, ratio in 0.0..2.0f64) {
        let ep = EconomyParams { alpha_share: share, l_bar: 1e8, ..EconomyParams::default() };
        let literal = ep.y_bar * (ratio * 1e8).powf(share) / 1e8f64.powf(share);
        prop_assert!((output(ratio * 1e8, &ep) - literal).abs() <= 1e-9 * ep.y_bar);
    }
}
