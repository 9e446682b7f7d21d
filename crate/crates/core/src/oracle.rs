//! Brute-force verifiers built only from the production function.
//!
//! Labor allocations come from numerically solving the wage indifference
//! condition, optima from exhaustive grids, and the risk-dominance cutoff
//! from quadrature. Nothing here uses a closed-form reaction function or
//! locus, so agreement with the analytic solvers is a genuine check.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decentralized::{classify_equilibria, EquilibriumReport};
use crate::economy::{marginal_products, output_per_land, Environment};
use crate::error::{ModelError, Result};
use crate::numeric::{adaptive_simpson, bisect_log, bracket_and_bisect_log};
use crate::planner::Regime;

/// Distance from a corner at which corner payoffs are evaluated as limits.
const CORNER: f64 = 1e-12;

/// Enclosed and customary labor shares equating the enclosed-sector wage
/// with what an entrant earns in the commons: a `1 - mu` share of the
/// average product plus a `mu` share of the marginal product.
///
/// The smaller share is solved for directly so it keeps full precision
/// near either corner.
pub fn indifferent_split(env: &Environment, t: f64) -> (f64, f64) {
    let t = t.clamp(CORNER, 1.0 - CORNER);
    let mu = env.regulation;
    let gap = |enclosed_labor: f64, customary_labor: f64| {
        let enclosed = marginal_products(env, env.tfp_gain, t, enclosed_labor).map(|m| m.labor);
        let commons = marginal_products(env, 1.0, 1.0 - t, customary_labor)
            .map(|m| (1.0 - mu) * m.average_labor + mu * m.labor);
        match (enclosed, commons) {
            (Ok(e), Ok(c)) => e - c,
            _ => f64::NAN,
        }
    };
    let (lo, hi) = (1e-300, 1.0 - 1e-16);
    if t <= 0.5 {
        let l =
            bisect_log(|l| gap(l, 1.0 - l), lo, hi).expect("wages cross inside the unit interval");
        (l, 1.0 - l)
    } else {
        let lc = bisect_log(|lc| -gap(1.0 - lc, lc), lo, hi)
            .expect("wages cross inside the unit interval");
        (1.0 - lc, lc)
    }
}

pub fn indifferent_labor(env: &Environment, t: f64) -> f64 {
    indifferent_split(env, t).0
}

/// Net gain from enclosing when the aggregate enclosure rate is `t`.
pub fn entry_payoff(env: &Environment, t: f64) -> f64 {
    let t = t.clamp(CORNER, 1.0 - CORNER);
    let (le, lc) = indifferent_split(env, t);
    let enclosed = marginal_products(env, env.tfp_gain, t, le).expect("interior allocation");
    let commons = marginal_products(env, 1.0, 1.0 - t, lc).expect("interior allocation");
    enclosed.land - env.compensation * commons.land - env.enclosure_cost
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateOrder {
    Sequential,
    Random(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentSimConfig {
    pub n_agents: usize,
    pub max_rounds: usize,
    pub initial_enclosed_fraction: f64,
    pub update_order: UpdateOrder,
}

impl Default for AgentSimConfig {
    fn default() -> Self {
        Self::new(200)
    }
}

impl AgentSimConfig {
    pub fn new(n_agents: usize) -> Self {
        Self {
            n_agents,
            max_rounds: 10 * n_agents,
            initial_enclosed_fraction: 0.0,
            update_order: UpdateOrder::Sequential,
        }
    }

    pub fn starting_at(mut self, fraction: f64) -> Self {
        self.initial_enclosed_fraction = fraction;
        self
    }

    pub fn with_order(mut self, order: UpdateOrder) -> Self {
        self.update_order = order;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n_agents < 2 {
            return Err(ModelError::InvalidParameter {
                field: "n_agents",
                value: self.n_agents as f64,
                reason: "need at least two agents",
            });
        }
        if !(0.0..=1.0).contains(&self.initial_enclosed_fraction) {
            return Err(ModelError::InvalidParameter {
                field: "initial_enclosed_fraction",
                value: self.initial_enclosed_fraction,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub converged: bool,
    pub rounds_used: usize,
    pub final_t_e: f64,
    pub seed: Option<u64>,
    /// No agent gains from a unilateral switch at the final profile.
    pub is_nash: bool,
    pub analytic_t_e: Option<f64>,
    pub discrepancy: f64,
    pub matches_analytic: bool,
}

/// Entry payoffs `g(k / N)` for `k = 0..=N`.
fn payoff_table(env: &Environment, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|k| entry_payoff(env, k as f64 / n as f64))
        .collect()
}

fn is_nash(choices: &[bool], table: &[f64]) -> bool {
    let enclosed = choices.iter().filter(|&&c| c).count();
    choices.iter().all(|&c| {
        if c {
            table[enclosed] >= 0.0
        } else {
            table[enclosed + 1] <= 0.0
        }
    })
}

/// Agents own equal parcels and, one at a time, enclose iff the payoff at
/// the aggregate including their own parcel is strictly positive. The
/// resting point is compared with [`classify_equilibria`].
pub fn best_response_dynamics(env: &Environment, cfg: &AgentSimConfig) -> Result<OracleReport> {
    best_response_dynamics_against(env, cfg, &classify_equilibria(env))
}

/// As [`best_response_dynamics`], compared against a supplied analytic report.
pub fn best_response_dynamics_against(
    env: &Environment,
    cfg: &AgentSimConfig,
    analytic: &EquilibriumReport,
) -> Result<OracleReport> {
    env.validate()?;
    cfg.validate()?;
    let n = cfg.n_agents;
    let table = payoff_table(env, n);
    let initial = (cfg.initial_enclosed_fraction * n as f64).round() as usize;
    let mut choices: Vec<bool> = (0..n).map(|i| i < initial).collect();
    let mut enclosed = initial;
    let mut order: Vec<usize> = (0..n).collect();
    let (mut rng, seed) = match cfg.update_order {
        UpdateOrder::Sequential => (None, None),
        UpdateOrder::Random(seed) => (Some(ChaCha8Rng::seed_from_u64(seed)), Some(seed)),
    };

    let mut converged = false;
    let mut rounds_used = 0;
    while rounds_used < cfg.max_rounds {
        rounds_used += 1;
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut changed = false;
        for &i in &order {
            let others = enclosed - usize::from(choices[i]);
            let wants = table[others + 1] > 0.0;
            if wants != choices[i] {
                choices[i] = wants;
                enclosed = others + usize::from(wants);
                changed = true;
            }
        }
        if !changed {
            converged = true;
            break;
        }
    }

    let final_t_e = enclosed as f64 / n as f64;
    let (analytic, discrepancy, matches) = match analytic.regime {
        Regime::Partial(t) => {
            let d = (final_t_e - t).abs();
            (Some(t), d, d <= 1.0 / n as f64)
        }
        Regime::Full => (Some(1.0), 1.0 - final_t_e, final_t_e == 1.0),
        Regime::NoEnclosure => (Some(0.0), final_t_e, final_t_e == 0.0),
        Regime::Multiple => {
            let d = final_t_e.min(1.0 - final_t_e);
            (None, d, d == 0.0)
        }
    };
    Ok(OracleReport {
        converged,
        rounds_used,
        final_t_e,
        seed,
        is_nash: converged && is_nash(&choices, &table),
        analytic_t_e: analytic,
        discrepancy,
        matches_analytic: converged && matches,
    })
}

/// Where dynamics started one agent either side of the interior rest point end up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstabilityReport {
    pub interior_root: f64,
    pub from_below: f64,
    pub from_above: f64,
}

impl InstabilityReport {
    pub fn escapes(&self) -> bool {
        self.from_below == 0.0 && self.from_above == 1.0
    }
}

pub fn interior_instability(env: &Environment, n_agents: usize) -> Result<InstabilityReport> {
    let root = classify_equilibria(env)
        .unstable_root
        .ok_or(ModelError::ThresholdUndefined {
            locus: "interior_equilibrium",
            reason: "requires the multiple-equilibria region",
        })?;
    let n = n_agents as f64;
    let k = (root * n).floor();
    let below = best_response_dynamics(
        env,
        &AgentSimConfig::new(n_agents).starting_at(((k - 1.0) / n).max(0.0)),
    )?;
    let above = best_response_dynamics(
        env,
        &AgentSimConfig::new(n_agents).starting_at(((k + 2.0) / n).min(1.0)),
    )?;
    Ok(InstabilityReport {
        interior_root: root,
        from_below: below.final_t_e,
        from_above: above.final_t_e,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    FirstBest,
    SecondBest,
    Monopoly,
}

fn grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|k| (k as f64 * step).min(1.0)).collect()
}

fn net_output(env: &Environment, t: f64, l: f64) -> f64 {
    output_per_land(env, env.tfp_gain, t, l) + output_per_land(env, 1.0, 1.0 - t, 1.0 - l)
        - env.enclosure_cost * t
}

fn first_max(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    points.fold((f64::NAN, f64::NEG_INFINITY), |best, p| {
        if p.1 > best.1 {
            p
        } else {
            best
        }
    })
}

/// Exhaustive scan of `t_e` in multiples of `step`. The first-best scan
/// also grids the enclosed labor share instead of using any labor rule.
pub fn grid_search_optimum(
    objective: Objective,
    env: &Environment,
    step: f64,
) -> Result<(f64, f64)> {
    if !(step > 0.0 && step <= 0.01) {
        return Err(ModelError::InvalidParameter {
            field: "step",
            value: step,
            reason: "must lie in (0, 0.01]",
        });
    }
    let ts = grid(step);
    let open = env.open_access();
    let best = match objective {
        Objective::FirstBest => {
            let ls = &ts;
            let per_t: Vec<(f64, f64)> = ts
                .par_iter()
                .map(|&t| {
                    let value = ls
                        .iter()
                        .map(|&l| net_output(env, t, l))
                        .fold(f64::NEG_INFINITY, f64::max);
                    (t, value)
                })
                .collect();
            first_max(per_t.into_iter())
        }
        Objective::SecondBest => {
            let values: Vec<(f64, f64)> = ts
                .par_iter()
                .map(|&t| {
                    let l = if t == 0.0 {
                        0.0
                    } else if t == 1.0 {
                        1.0
                    } else {
                        indifferent_labor(&open, t)
                    };
                    (t, net_output(&open, t, l))
                })
                .collect();
            first_max(values.into_iter())
        }
        Objective::Monopoly => {
            let values: Vec<(f64, f64)> = ts
                .par_iter()
                .map(|&t| {
                    let profit = if t == 0.0 {
                        0.0
                    } else {
                        (entry_payoff(&open, t)) * t
                    };
                    (t, profit)
                })
                .collect();
            first_max(values.into_iter())
        }
    };
    Ok(best)
}

/// Uniform-belief expected entry payoff, by adaptive quadrature.
pub fn expected_payoff(env: &Environment) -> Result<f64> {
    adaptive_simpson(|t| entry_payoff(env, t), 0.0, 1.0, 1e-10)
}

/// Density at which the expected entry payoff vanishes.
pub fn integral_root_cutoff(env: &Environment) -> Result<f64> {
    if env.composite().lambda_regulated >= 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "global_games",
            reason: "requires low-TFP gains (strategic complements)",
        });
    }
    let f = |lbar: f64| expected_payoff(&env.with_density(lbar)).unwrap_or(f64::NAN);
    bracket_and_bisect_log(f, 1.0, 1e-6, 1e6)
}

/// Density at which the entry payoff at aggregate `t` vanishes.
pub fn payoff_root_density(env: &Environment, t: f64) -> Result<f64> {
    bracket_and_bisect_log(
        |lbar| entry_payoff(&env.with_density(lbar), t),
        1.0,
        1e-6,
        1e6,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decentralized::{
        decentralized_thresholds, entry_gain, global_games_cutoff, labor_reaction, Selection,
    };
    use crate::monopoly::monopoly_solve;
    use crate::numeric::relative_gap;
    use crate::planner::{first_best_solve, second_best_solve};

    fn env(theta: f64, lbar: f64) -> Environment {
        Environment::benchmark(theta, lbar)
    }

    #[test]
    fn numeric_labor_matches_reaction() {
        for &(theta, mu) in &[(2.0, 0.0), (1.2, 0.0), (2.0, 0.5), (0.8, 1.0)] {
            let e = env(theta, 1.0).with_regulation(mu);
            for t in [0.01, 0.3, 0.5, 0.99] {
                assert!((indifferent_labor(&e, t) - labor_reaction(&e, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn payoff_matches_entry_gain() {
        let e = env(1.7, 2.3).with_regulation(0.3).with_compensation(0.6);
        for t in [0.1, 0.5, 0.9] {
            assert!((entry_payoff(&e, t) - entry_gain(&e, t)).abs() < 1e-10);
        }
    }

    #[test]
    fn substitutes_converge_to_interior() {
        let e = env(2.0, 1.0);
        for init in [0.0, 0.25, 0.5, 1.0] {
            for order in [UpdateOrder::Sequential, UpdateOrder::Random(11)] {
                let cfg = AgentSimConfig::new(200).starting_at(init).with_order(order);
                let r = best_response_dynamics(&e, &cfg).unwrap();
                assert!(r.converged && r.is_nash && r.matches_analytic, "{r:?}");
                assert!(r.discrepancy <= 1.0 / 200.0);
            }
        }
    }

    #[test]
    fn complements_corners_absorb() {
        let e = env(1.2, 6.0);
        let from_none = best_response_dynamics(&e, &AgentSimConfig::new(200)).unwrap();
        let from_all =
            best_response_dynamics(&e, &AgentSimConfig::new(200).starting_at(1.0)).unwrap();
        assert_eq!(from_none.final_t_e, 0.0);
        assert_eq!(from_all.final_t_e, 1.0);
        assert!(from_none.is_nash && from_all.is_nash);
        assert_eq!(from_none.rounds_used, 1);
    }

    #[test]
    fn dominance_region_forces_full() {
        let e = env(1.2, 1.0);
        let above = decentralized_thresholds(&e).unwrap().start * 1.05;
        for init in [0.0, 0.5, 1.0] {
            let cfg = AgentSimConfig::new(200)
                .starting_at(init)
                .with_order(UpdateOrder::Random(3));
            let r = best_response_dynamics(&e.with_density(above), &cfg).unwrap();
            assert_eq!(r.final_t_e, 1.0);
            assert!(r.matches_analytic);
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let e = env(2.0, 1.3);
        let cfg = AgentSimConfig::new(300)
            .starting_at(0.9)
            .with_order(UpdateOrder::Random(7));
        let a = best_response_dynamics(&e, &cfg).unwrap();
        let b = best_response_dynamics(&e, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn rejects_tiny_populations() {
        assert!(best_response_dynamics(&env(2.0, 1.0), &AgentSimConfig::new(1)).is_err());
    }

    #[test]
    fn interior_rest_point_is_unstable() {
        let r = interior_instability(&env(1.2, 6.0), 200).unwrap();
        assert!(r.escapes(), "{r:?}");
        assert!(interior_instability(&env(2.0, 1.0), 200).is_err());
    }

    #[test]
    fn grid_search_matches_solvers() {
        let step = 1e-3;
        let e = env(2.0, 1.0);
        let (t, _) = grid_search_optimum(Objective::FirstBest, &e, step).unwrap();
        assert!((t - first_best_solve(&e).enclosed_land).abs() <= 2.0 * step);
        let (t, _) = grid_search_optimum(Objective::SecondBest, &e, step).unwrap();
        assert!((t - second_best_solve(&e).enclosed_land).abs() <= 2.0 * step);
        let m = env(2.0, 3.0);
        let (t, v) = grid_search_optimum(Objective::Monopoly, &m, step).unwrap();
        let sol = monopoly_solve(&m);
        assert!((t - sol.enclosed_land).abs() <= 2.0 * step);
        assert!(v <= sol.profit + 1e-12);
    }

    #[test]
    fn free_enclosure_is_total() {
        for theta in [1.2, 2.0] {
            let e = env(theta, 1.0).with_cost(0.0);
            for obj in [
                Objective::FirstBest,
                Objective::SecondBest,
                Objective::Monopoly,
            ] {
                assert_eq!(
                    grid_search_optimum(obj, &e, 0.01).unwrap().0,
                    1.0,
                    "{obj:?} theta={theta}"
                );
            }
        }
    }

    #[test]
    fn integral_cutoff_matches_closed_form() {
        let e = env(1.2, 1.0);
        let numeric = integral_root_cutoff(&e).unwrap();
        assert!(relative_gap(numeric, global_games_cutoff(&e).unwrap()) < 1e-6);
        // frozen from an independent quadrature and Brent solve
        assert!(relative_gap(numeric, 5.662_952_377_641_729) < 1e-8);
        let doubled = e.with_cost(2.0).with_tfp(2.0);
        assert!(relative_gap(integral_root_cutoff(&doubled).unwrap(), numeric) < 1e-8);
        assert!(integral_root_cutoff(&env(2.0, 1.0)).is_err());

        let general = e.with_regulation(0.2).with_compensation(0.3);
        assert!(
            relative_gap(
                integral_root_cutoff(&general).unwrap(),
                global_games_cutoff(&general).unwrap()
            ) < 1e-6
        );
    }

    #[test]
    fn cutoff_meets_decentralized_locus_at_threshold() {
        let e = env(1.5 - 1e-6, 1.0);
        let cutoff = integral_root_cutoff(&e).unwrap();
        let loci = decentralized_thresholds(&e).unwrap();
        assert!(relative_gap(cutoff, loci.full) < 1e-5);
        assert!(relative_gap(cutoff, loci.start) < 1e-5);
    }

    #[test]
    fn payoff_roots_match_loci() {
        let e = env(2.0, 1.0);
        let loci = decentralized_thresholds(&e).unwrap();
        assert!(relative_gap(payoff_root_density(&e, 0.0).unwrap(), loci.start) < 1e-6);
        assert!(relative_gap(payoff_root_density(&e, 1.0).unwrap(), loci.full) < 1e-6);
    }

    #[test]
    fn selection_matches_expected_payoff_sign() {
        for lbar in [4.0, 5.5, 5.8, 7.0, 10.0] {
            let e = env(1.2, lbar);
            let report = classify_equilibria(&e);
            if report.regime == Regime::Multiple {
                let full = expected_payoff(&e).unwrap() >= 0.0;
                assert_eq!(report.selected == Selection::Full, full);
            }
        }
    }
}
