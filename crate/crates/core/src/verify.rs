//! Fixed battery comparing the analytic solvers with the brute-force oracles.

use serde::{Deserialize, Serialize};

use crate::decentralized::{classify_equilibria, decentralized_thresholds, global_games_cutoff};
use crate::economy::Environment;
use crate::error::Result;
use crate::monopoly::monopoly_solve;
use crate::numeric::relative_gap;
use crate::oracle::{
    best_response_dynamics_against, grid_search_optimum, integral_root_cutoff,
    interior_instability, payoff_root_density, AgentSimConfig, Objective, UpdateOrder,
};
use crate::planner::{first_best_solve, second_best_solve, Regime};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub agents: usize,
    /// Multiplier applied to the enclosed rental rate seen by the analytic
    /// side only. Anything other than 1 should make the battery fail.
    pub rent_scale: f64,
    pub grid_step: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            agents: 200,
            rent_scale: 1.0,
            grid_step: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub discrepancy: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

/// Economy as seen by the analytic solvers. Dividing cost and
/// compensation by `k` leaves every entry-gain sign as if the rental rate
/// were multiplied by `k`.
fn analytic_view(env: &Environment, k: f64) -> Environment {
    env.with_cost(env.enclosure_cost / k)
        .with_compensation(env.compensation / k)
}

struct Battery {
    cfg: VerifyConfig,
    checks: Vec<CheckResult>,
}

impl Battery {
    fn record(&mut self, name: impl Into<String>, discrepancy: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            name: name.into(),
            passed: discrepancy <= tolerance,
            discrepancy,
            tolerance,
        });
    }

    fn flag(&mut self, name: impl Into<String>, ok: bool) {
        self.record(name, if ok { 0.0 } else { 1.0 }, 0.0);
    }

    fn analytic(&self, env: &Environment) -> Environment {
        analytic_view(env, self.cfg.rent_scale)
    }

    fn dynamics(&mut self, label: &str, env: Environment, init: f64) -> Result<f64> {
        let sim = AgentSimConfig::new(self.cfg.agents)
            .starting_at(init)
            .with_order(UpdateOrder::Random(self.cfg.seed));
        let analytic = classify_equilibria(&self.analytic(&env));
        let report = best_response_dynamics_against(&env, &sim, &analytic)?;
        let tolerance = match analytic.regime {
            Regime::Partial(_) => 1.0 / self.cfg.agents as f64,
            _ => 0.0,
        };
        let discrepancy = if report.converged && report.is_nash {
            report.discrepancy
        } else {
            f64::INFINITY
        };
        self.record(format!("{label} from t_e = {init}"), discrepancy, tolerance);
        Ok(report.final_t_e)
    }
}

pub fn run_battery(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut b = Battery {
        cfg: *cfg,
        checks: Vec::new(),
    };

    let substitutes = Environment::benchmark(2.0, 1.0);
    for init in [0.0, 0.5, 1.0] {
        b.dynamics(
            "best response, substitutes (theta 2, lbar 1)",
            substitutes,
            init,
        )?;
    }
    let regulated = Environment::benchmark(1.4, 2.0)
        .with_regulation(0.5)
        .with_compensation(0.3);
    for init in [0.0, 1.0] {
        b.dynamics(
            "best response, regulated (theta 1.4, mu 0.5, tau 0.3)",
            regulated,
            init,
        )?;
    }
    let multiple = Environment::benchmark(1.2, 6.0);
    let from_none = b.dynamics(
        "best response, complements (theta 1.2, lbar 6)",
        multiple,
        0.0,
    )?;
    let from_all = b.dynamics(
        "best response, complements (theta 1.2, lbar 6)",
        multiple,
        1.0,
    )?;
    b.flag(
        "both corners absorbing",
        from_none == 0.0 && from_all == 1.0,
    );
    let dominance = Environment::benchmark(1.2, 15.0);
    for init in [0.0, 0.5] {
        b.dynamics(
            "best response, dominance region (theta 1.2, lbar 15)",
            dominance,
            init,
        )?;
    }
    let escape = interior_instability(&multiple, cfg.agents)?;
    b.flag("interior rest point unstable", escape.escapes());

    let step = cfg.grid_step;
    let planner_point = Environment::benchmark(2.0, 1.0);
    let (t, _) = grid_search_optimum(Objective::FirstBest, &planner_point, step)?;
    let analytic = first_best_solve(&b.analytic(&planner_point)).enclosed_land;
    b.record(
        "grid search, first best (theta 2, lbar 1)",
        (t - analytic).abs(),
        2.0 * step,
    );
    let (t, _) = grid_search_optimum(Objective::SecondBest, &planner_point, step)?;
    let analytic = second_best_solve(&b.analytic(&planner_point)).enclosed_land;
    b.record(
        "grid search, second best (theta 2, lbar 1)",
        (t - analytic).abs(),
        2.0 * step,
    );
    let monopoly_point = Environment::benchmark(2.0, 3.0);
    let (t, _) = grid_search_optimum(Objective::Monopoly, &monopoly_point, step)?;
    let analytic = monopoly_solve(&b.analytic(&monopoly_point)).enclosed_land;
    b.record(
        "grid search, monopoly (theta 2, lbar 3)",
        (t - analytic).abs(),
        2.0 * step,
    );

    for env in [
        Environment::benchmark(1.2, 1.0),
        Environment::benchmark(1.1, 1.0)
            .with_regulation(0.2)
            .with_compensation(0.3),
    ] {
        let numeric = integral_root_cutoff(&env)?;
        let closed = global_games_cutoff(&b.analytic(&env))?;
        b.record(
            format!(
                "risk-dominance cutoff (theta {}, mu {}, tau {})",
                env.tfp_gain, env.regulation, env.compensation
            ),
            relative_gap(numeric, closed),
            1e-6,
        );
    }

    let loci_point = Environment::benchmark(2.0, 1.0);
    let loci = decentralized_thresholds(&b.analytic(&loci_point))?;
    let start = payoff_root_density(&loci_point, 0.0)?;
    let full = payoff_root_density(&loci_point, 1.0)?;
    b.record(
        "entry locus at t_e = 0 (theta 2)",
        relative_gap(start, loci.start),
        1e-6,
    );
    b.record(
        "entry locus at t_e = 1 (theta 2)",
        relative_gap(full, loci.full),
        1e-6,
    );

    let all_passed = b.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        config: *cfg,
        checks: b.checks,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_battery_passes() {
        let report = run_battery(&VerifyConfig::default()).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{c:?}");
        }
        assert!(report.all_passed);
    }

    #[test]
    fn perturbed_rent_is_caught() {
        let cfg = VerifyConfig {
            rent_scale: 1.01,
            ..VerifyConfig::default()
        };
        let report = run_battery(&cfg).unwrap();
        assert!(!report.all_passed);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.starts_with("risk-dominance") && !c.passed));
    }

    #[test]
    fn seeded_battery_repeats() {
        let cfg = VerifyConfig {
            seed: 7,
            agents: 500,
            ..VerifyConfig::default()
        };
        assert_eq!(run_battery(&cfg).unwrap(), run_battery(&cfg).unwrap());
    }
}
