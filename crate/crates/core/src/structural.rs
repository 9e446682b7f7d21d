//! Three-sector economy: enclosed and customary agriculture plus a
//! manufacturing sector with its own capital stock, selling at a world price.
//!
//! Labor moves freely across all three sectors, so the manufacturing wage,
//! the enclosed-sector marginal product and the customary average product
//! are equalized. The commons is unregulated and uncompensated throughout.

use serde::{Deserialize, Serialize};

use crate::decentralized::{
    classify_by_sign, strategic_nature, EquilibriumReport, Selection, Slope,
};
use crate::economy::Environment;
use crate::error::{ModelError, Result};
use crate::numeric::{adaptive_simpson, bisect_log};
use crate::planner::Regime;

/// Technology of the manufacturing sector, `A_m K^(1-beta) L^beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ManufacturingParams {
    /// World price of manufactures relative to the farm good.
    #[serde(rename = "p")]
    pub price: f64,
    #[serde(rename = "beta")]
    pub labor_share: f64,
    #[serde(rename = "a_m")]
    pub tfp: f64,
    /// Capital stock per unit of total labor.
    #[serde(rename = "k_bar")]
    pub capital_per_worker: f64,
}

impl Default for ManufacturingParams {
    fn default() -> Self {
        Self {
            price: 1.0,
            labor_share: 0.5,
            tfp: 1.0,
            capital_per_worker: 1.0,
        }
    }
}

impl ManufacturingParams {
    pub fn with_price(mut self, price: f64) -> Self {
        self.price = price;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("p", self.price, self.price > 0.0),
            (
                "beta",
                self.labor_share,
                self.labor_share > 0.0 && self.labor_share < 1.0,
            ),
            ("a_m", self.tfp, self.tfp > 0.0),
            (
                "k_bar",
                self.capital_per_worker,
                self.capital_per_worker > 0.0,
            ),
        ];
        for (field, value, ok) in checks {
            if !(ok && value.is_finite()) {
                return Err(ModelError::InvalidParameter {
                    field,
                    value,
                    reason: "must be strictly positive (beta inside (0, 1))",
                });
            }
        }
        Ok(())
    }

    /// Value of the marginal product of manufacturing labor.
    pub fn wage(&self, manufacturing_labor: f64) -> f64 {
        let beta = self.labor_share;
        self.price
            * beta
            * self.tfp
            * (self.capital_per_worker / manufacturing_labor).powf(1.0 - beta)
    }
}

/// Labor shares, common wage and output values per unit land.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSectorAllocation {
    pub enclosed_land: f64,
    pub enclosed_labor: f64,
    pub customary_labor: f64,
    pub manufacturing_labor: f64,
    pub wage: f64,
    pub output_enclosed: f64,
    pub output_customary: f64,
    /// Valued at the world price.
    pub output_manufacturing: f64,
}

const LABOR_FLOOR: f64 = 1e-300;
const LABOR_CEILING: f64 = 1.0 - 1e-12;

fn spread(env: &Environment, t: f64) -> f64 {
    1.0 + (env.composite().lambda_open - 1.0) * t
}

/// Farm wage once farm labor `1 - l_m` is split along the reaction
/// function: `A lbar^(alpha-1) (D / (1 - l_m))^(1 - alpha)`.
fn farm_wage(env: &Environment, t: f64, manufacturing_labor: f64) -> f64 {
    let alpha = env.labor_share;
    env.tfp
        * env.density.powf(alpha - 1.0)
        * (spread(env, t) / (1.0 - manufacturing_labor)).powf(1.0 - alpha)
}

/// Manufacturing labor clearing the wage gap. The manufacturing wage falls
/// and the farm wage rises in `l_m`, so the gap has a single root. Valid on
/// the closed interval: at `t = 1` it is the limit as the commons empties.
fn manufacturing_labor(env: &Environment, mfg: &ManufacturingParams, t: f64) -> Result<f64> {
    let gap = |lm: f64| mfg.wage(lm) - farm_wage(env, t, lm);
    if gap(LABOR_FLOOR) <= 0.0 {
        // below the smallest representable share: manufacturing is shut down
        return Ok(0.0);
    }
    bisect_log(gap, LABOR_FLOOR, LABOR_CEILING)
}

pub fn three_sector_equilibrium(
    env: &Environment,
    mfg: &ManufacturingParams,
    t: f64,
) -> Result<ThreeSectorAllocation> {
    mfg.validate()?;
    if !(0.0..1.0).contains(&t) {
        return Err(ModelError::Degenerate {
            t,
            l: f64::NAN,
            reason: "the customary sector must be nonempty",
        });
    }
    let env = env.open_access();
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_open;
    let lm = manufacturing_labor(&env, mfg, t)?;
    let farm = 1.0 - lm;
    let le = lambda * t / spread(&env, t) * farm;
    let lc = farm - le;
    let base = env.potential_output();
    let beta = mfg.labor_share;
    Ok(ThreeSectorAllocation {
        enclosed_land: t,
        enclosed_labor: le,
        customary_labor: lc,
        manufacturing_labor: lm,
        wage: farm_wage(&env, t, lm),
        output_enclosed: env.tfp_gain * base * t.powf(1.0 - alpha) * le.powf(alpha),
        output_customary: base * (1.0 - t).powf(1.0 - alpha) * lc.powf(alpha),
        output_manufacturing: mfg.price
            * mfg.tfp
            * mfg.capital_per_worker.powf(1.0 - beta)
            * lm.powf(beta)
            * env.density,
    })
}

/// `theta (1 - alpha) A lbar^alpha (Lambda_0 (1 - l_m) / D)^alpha`, the
/// enclosed-land marginal product; finite at `t = 0`.
fn return_given_labor(env: &Environment, t: f64, lm: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_open;
    env.tfp_gain
        * (1.0 - alpha)
        * env.potential_output()
        * (lambda * (1.0 - lm) / spread(env, t)).powf(alpha)
}

pub fn enclosure_return_three_sector(
    env: &Environment,
    mfg: &ManufacturingParams,
    t: f64,
) -> Result<f64> {
    let alloc = three_sector_equilibrium(env, mfg, t)?;
    Ok(return_given_labor(
        &env.open_access(),
        t,
        alloc.manufacturing_labor,
    ))
}

/// Equilibrium enclosure when enclosers compare the three-sector rental
/// rate to the enclosure cost. The corner `t = 1` is evaluated as a limit.
pub fn classify_three_sector(
    env: &Environment,
    mfg: &ManufacturingParams,
) -> Result<EquilibriumReport> {
    mfg.validate()?;
    let env = env.open_access();
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_open;
    // evaluated eagerly so bracket failures surface as errors
    manufacturing_labor(&env, mfg, 0.0)?;
    manufacturing_labor(&env, mfg, 1.0)?;
    let gain = |t: f64| {
        let lm = manufacturing_labor(&env, mfg, t).unwrap_or(f64::NAN);
        return_given_labor(&env, t, lm) - env.enclosure_cost
    };
    let slope = if lambda > 1.0 {
        Slope::Decreasing
    } else if lambda < 1.0 {
        Slope::Increasing
    } else {
        Slope::Flat
    };
    let (regime, unstable_root) = classify_by_sign(gain, slope, 1.0);
    let selected = if regime == Regime::Multiple {
        match adaptive_simpson(gain, 0.0, 1.0, 1e-10) {
            Ok(v) if v >= 0.0 => Selection::Full,
            Ok(_) => Selection::NoEnclosure,
            Err(_) => Selection::Unresolved,
        }
    } else {
        Selection::NotApplicable
    };
    let outcome = match (regime, selected) {
        (Regime::Multiple, Selection::Full) => 1.0,
        (Regime::Multiple, _) => 0.0,
        (r, _) => r.enclosure().unwrap_or(0.0),
    };
    let lm = manufacturing_labor(&env, mfg, outcome)?;
    let wage = farm_wage(&env, outcome, lm);
    let customary_rent =
        (1.0 - alpha) * env.potential_output() * ((1.0 - lm) / spread(&env, outcome)).powf(alpha);
    Ok(EquilibriumReport {
        regime,
        strategic_nature: strategic_nature(&env),
        t_e_star: regime.enclosure(),
        unstable_root,
        selected,
        outcome,
        wage,
        rent_enclosed: return_given_labor(&env, outcome, lm),
        rent_customary: customary_rent,
        labor_income: wage * env.density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decentralized::{classify_equilibria, labor_reaction, rental_rate};
    use crate::economy::marginal_products;
    use crate::numeric::bisect;

    fn env(theta: f64, lbar: f64) -> Environment {
        Environment::benchmark(theta, lbar)
    }

    fn tiny() -> ManufacturingParams {
        ManufacturingParams::default().with_price(1e-12)
    }

    #[test]
    fn vanishing_price_recovers_two_sector() {
        for theta in [0.9, 1.5, 2.0, 3.0] {
            let e = env(theta, 2.0);
            for t in [0.0, 0.3, 0.7, 0.95] {
                let a = three_sector_equilibrium(&e, &tiny(), t).unwrap();
                assert!(a.manufacturing_labor < 1e-20);
                assert!((a.enclosed_labor - labor_reaction(&e, t)).abs() < 1e-10);
                let r = enclosure_return_three_sector(&e, &tiny(), t).unwrap();
                assert!((r - rental_rate(&e, t)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn vanishing_price_reproduces_reports() {
        for i in 0..12 {
            for j in 0..12 {
                let theta = 0.6 + 0.2 * i as f64;
                let lbar = 0.1 * 1.6f64.powi(j);
                let e = env(theta, lbar);
                let two = classify_equilibria(&e);
                let three = classify_three_sector(&e, &tiny()).unwrap();
                assert_eq!(
                    two.regime.kind(),
                    three.regime.kind(),
                    "theta={theta} lbar={lbar}"
                );
                assert_eq!(two.selected, three.selected);
                if let (Some(a), Some(b)) = (two.t_e_star, three.t_e_star) {
                    assert!((a - b).abs() < 1e-8);
                }
                assert!((two.wage - three.wage).abs() < 1e-8 * two.wage);
                assert!((two.rent_enclosed - three.rent_enclosed).abs() < 1e-8 * two.rent_enclosed);
                assert!((two.rent_customary - three.rent_customary).abs() < 1e-8);
                assert!((two.labor_income - three.labor_income).abs() < 1e-8 * two.labor_income);
            }
        }
    }

    #[test]
    fn no_enclosure_solves_single_equation() {
        let e = env(2.0, 1.5);
        let mfg = ManufacturingParams::default();
        let a = three_sector_equilibrium(&e, &mfg, 0.0).unwrap();
        assert_eq!(a.enclosed_labor, 0.0);
        let alpha = e.labor_share;
        // customary average product with all farm labor on all land
        let oracle = bisect(
            |lm: f64| {
                0.5 * (1.0 / lm).sqrt()
                    - (1.5f64).powf(alpha - 1.0) * (1.0 / (1.0 - lm)).powf(1.0 - alpha)
            },
            1e-9,
            1.0 - 1e-9,
        )
        .unwrap();
        assert!((a.manufacturing_labor - oracle).abs() < 1e-10);
    }

    #[test]
    fn wages_equalize() {
        let mfg = ManufacturingParams::default();
        for theta in [0.8, 1.6, 2.5] {
            let e = env(theta, 1.2);
            for t in [0.1, 0.5, 0.9] {
                let a = three_sector_equilibrium(&e, &mfg, t).unwrap();
                let enclosed = marginal_products(&e, theta, t, a.enclosed_labor).unwrap();
                let commons = marginal_products(&e, 1.0, 1.0 - t, a.customary_labor).unwrap();
                assert!((mfg.wage(a.manufacturing_labor) - a.wage).abs() < 1e-10);
                assert!((enclosed.labor - a.wage).abs() < 1e-10);
                assert!((commons.average_labor - a.wage).abs() < 1e-10);
                assert!(commons.average_labor > commons.labor);
                assert!(a.enclosed_labor + a.manufacturing_labor < 1.0);
            }
        }
    }

    #[test]
    fn price_pulls_labor_into_manufacturing() {
        let e = env(2.0, 1.0);
        let mut prev: Option<(f64, f64, f64)> = None;
        for k in 0..30 {
            let p = 0.05 * 1.25f64.powi(k);
            let mfg = ManufacturingParams::default().with_price(p);
            let a = three_sector_equilibrium(&e, &mfg, 0.4).unwrap();
            let r = enclosure_return_three_sector(&e, &mfg, 0.4).unwrap();
            if let Some((lm, w, rp)) = prev {
                assert!(a.manufacturing_labor > lm);
                assert!(a.wage > w);
                assert!(r < rp);
            }
            prev = Some((a.manufacturing_labor, a.wage, r));
        }
    }

    #[test]
    fn return_is_continuous() {
        let e = env(2.0, 1.0);
        let mfg = ManufacturingParams::default();
        // step small enough that the largest slope moves r by under 1e-6
        let n = 2_000_000;
        let mut last = enclosure_return_three_sector(&e, &mfg, 0.0).unwrap();
        for k in 1..=n {
            let r = enclosure_return_three_sector(&e, &mfg, 0.99 * k as f64 / n as f64).unwrap();
            assert!((r - last).abs() < 1e-6);
            last = r;
        }
    }

    #[test]
    fn domain_errors() {
        let e = env(2.0, 1.0);
        assert!(matches!(
            three_sector_equilibrium(&e, &ManufacturingParams::default(), 1.0),
            Err(ModelError::Degenerate { .. })
        ));
        let bad = ManufacturingParams::default().with_price(-1.0);
        assert!(matches!(
            three_sector_equilibrium(&e, &bad, 0.5),
            Err(ModelError::InvalidParameter { field: "p", .. })
        ));
    }
}
