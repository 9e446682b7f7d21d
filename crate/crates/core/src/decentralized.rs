//! Decentralized enclosure: labor reaction, factor returns and Nash
//! equilibrium classification of the aggregative enclosure game.
//!
//! All functions here honor the environment's regulation (`mu`) and
//! compensation (`tau`) parameters unless documented otherwise. With
//! `mu = tau = 0` they reduce to the open-access benchmark.

use serde::{Deserialize, Serialize};

use crate::economy::Environment;
use crate::error::{ModelError, Result};
use crate::numeric::bisect;
use crate::planner::{reaction, Regime};

/// Labor share drawn into enclosed land at enclosure rate `t`.
pub fn labor_reaction(env: &Environment, t: f64) -> f64 {
    reaction(env.composite().lambda_regulated, t)
}

fn spread(lambda: f64, t: f64) -> f64 {
    1.0 + (lambda - 1.0) * t
}

/// Marginal product of enclosed land along the labor reaction function.
pub fn rental_rate(env: &Environment, t: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    env.tfp_gain * (1.0 - alpha) * env.potential_output() * (lambda / spread(lambda, t)).powf(alpha)
}

/// Analytic `dr/dt`.
pub fn rental_rate_slope(env: &Environment, t: f64) -> f64 {
    let lambda = env.composite().lambda_regulated;
    -env.labor_share * (lambda - 1.0) / spread(lambda, t) * rental_rate(env, t)
}

/// Implied land rent inside the unenclosed sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CustomaryRent {
    pub value: f64,
    /// Set when `t = 1`: the sector is empty and `value` is the limit.
    pub is_limit: bool,
}

pub fn customary_rent(env: &Environment, t: f64) -> CustomaryRent {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    CustomaryRent {
        value: (1.0 - alpha) * env.potential_output() * spread(lambda, t).powf(-alpha),
        is_limit: t >= 1.0,
    }
}

/// Net private gain from enclosing one more unit of land:
/// `r(t) - tau * r_c(t) - c`.
pub fn entry_gain(env: &Environment, t: f64) -> f64 {
    rental_rate(env, t) - env.compensation * customary_rent(env, t).value - env.enclosure_cost
}

/// `theta * Lambda^alpha - tau`, the sign-carrying factor of the entry gain.
fn gain_factor(env: &Environment) -> f64 {
    let lambda = env.composite().lambda_regulated;
    env.tfp_gain * lambda.powf(env.labor_share) - env.compensation
}

/// `int_0^1 (1 + (Lambda - 1) t)^(-alpha) dt`.
fn mean_spread_power(lambda: f64, alpha: f64) -> f64 {
    if (lambda - 1.0).abs() < 1e-9 {
        // second-order expansion around lambda = 1
        let e = lambda - 1.0;
        return 1.0 - alpha * e / 2.0 + alpha * (alpha + 1.0) * e * e / 6.0;
    }
    (lambda.powf(1.0 - alpha) - 1.0) / ((1.0 - alpha) * (lambda - 1.0))
}

/// Expected entry gain under a uniform belief over the aggregate enclosure rate.
pub fn expected_entry_gain(env: &Environment) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    (1.0 - alpha) * env.potential_output() * gain_factor(env) * mean_spread_power(lambda, alpha)
        - env.enclosure_cost
}

/// Equilibrium wage per worker at enclosure rate `t`.
pub fn wage(env: &Environment, t: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    env.tfp_gain
        * alpha
        * env.tfp
        * env.density.powf(alpha - 1.0)
        * (spread(lambda, t) / lambda).powf(1.0 - alpha)
}

/// Total labor earnings per unit land.
pub fn labor_income(env: &Environment, t: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    alpha * env.tfp_gain * env.potential_output() * (spread(lambda, t) / lambda).powf(1.0 - alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategicNature {
    Substitutes,
    Complements,
    KnifeEdge,
}

pub fn strategic_nature(env: &Environment) -> StrategicNature {
    let threshold = env.composite().high_tfp_threshold_regulated;
    if env.tfp_gain > threshold {
        StrategicNature::Substitutes
    } else if env.tfp_gain < threshold {
        StrategicNature::Complements
    } else {
        StrategicNature::KnifeEdge
    }
}

/// Equilibrium picked by risk dominance when both corners are equilibria.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    NotApplicable,
    NoEnclosure,
    Full,
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumReport {
    pub regime: Regime,
    pub strategic_nature: StrategicNature,
    /// Unique equilibrium enclosure share; `None` when multiple.
    pub t_e_star: Option<f64>,
    /// Interior rest point between the two corners in the multiple case.
    pub unstable_root: Option<f64>,
    pub selected: Selection,
    /// Enclosure share at which factor returns are reported (the selected
    /// corner when multiple).
    pub outcome: f64,
    pub wage: f64,
    pub rent_enclosed: f64,
    pub rent_customary: f64,
    pub labor_income: f64,
}

/// Direction of a monotone entry-gain function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slope {
    Decreasing,
    Increasing,
    Flat,
}

/// Corner and interior logic shared by every aggregative entry game with a
/// monotone entry gain `g` on `[0, upper]`.
pub(crate) fn classify_by_sign<G>(g: G, slope: Slope, upper: f64) -> (Regime, Option<f64>)
where
    G: Fn(f64) -> f64,
{
    let g0 = g(0.0);
    let g1 = g(upper);
    match slope {
        Slope::Flat => {
            if g0 >= 0.0 {
                (Regime::Full, None)
            } else {
                (Regime::NoEnclosure, None)
            }
        }
        Slope::Decreasing => {
            if g0 <= 0.0 {
                (Regime::NoEnclosure, None)
            } else if g1 >= 0.0 {
                (Regime::Full, None)
            } else {
                let t = bisect(&g, 0.0, upper).expect("g changes sign on the bracket");
                (Regime::Partial(t), None)
            }
        }
        Slope::Increasing => {
            if g0 >= 0.0 {
                (Regime::Full, None)
            } else if g1 < 0.0 {
                (Regime::NoEnclosure, None)
            } else {
                let root = bisect(&g, 0.0, upper).ok();
                (Regime::Multiple, root)
            }
        }
    }
}

fn gain_slope(env: &Environment) -> Slope {
    let lambda = env.composite().lambda_regulated;
    let s = gain_factor(env) * (lambda - 1.0);
    if s > 0.0 {
        Slope::Decreasing
    } else if s < 0.0 {
        Slope::Increasing
    } else {
        Slope::Flat
    }
}

pub fn classify_equilibria(env: &Environment) -> EquilibriumReport {
    let (regime, unstable_root) = classify_by_sign(|t| entry_gain(env, t), gain_slope(env), 1.0);
    let selected = match regime {
        Regime::Multiple => select_by_risk_dominance(env),
        _ => Selection::NotApplicable,
    };
    let outcome = match (regime, selected) {
        (Regime::Multiple, Selection::Full) => 1.0,
        (Regime::Multiple, _) => 0.0,
        (r, _) => r.enclosure().unwrap_or(0.0),
    };
    EquilibriumReport {
        regime,
        strategic_nature: strategic_nature(env),
        t_e_star: regime.enclosure(),
        unstable_root,
        selected,
        outcome,
        wage: wage(env, outcome),
        rent_enclosed: rental_rate(env, outcome),
        rent_customary: customary_rent(env, outcome).value,
        labor_income: labor_income(env, outcome),
    }
}

fn select_by_risk_dominance(env: &Environment) -> Selection {
    match global_games_cutoff(env) {
        Ok(cutoff) if env.density >= cutoff => Selection::Full,
        Ok(_) => Selection::NoEnclosure,
        Err(_) => Selection::Unresolved,
    }
}

/// Densities where entry starts to pay at `t = 0` and still pays at `t = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecentralizedLoci {
    pub start: f64,
    pub full: f64,
}

/// Density at which a fully enclosed economy just covers the enclosure
/// cost without compensation: `[c / (theta A (1 - alpha))]^(1/alpha)`.
///
/// Also the second-best completion locus and the monopolist's low-TFP locus.
pub(crate) fn full_enclosure_density(env: &Environment) -> f64 {
    let alpha = env.labor_share;
    (env.cost_ratio() / (env.tfp_gain * (1.0 - alpha))).powf(1.0 / alpha)
}

/// Both loci solve `g = 0` at a corner. The entry gain is linear in
/// `A lbar^alpha`, so each has a closed form for any `mu` and `tau`.
pub fn decentralized_thresholds(env: &Environment) -> Result<DecentralizedLoci> {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    if env.compensation == 0.0 {
        let full = full_enclosure_density(env);
        return Ok(DecentralizedLoci {
            start: full / lambda,
            full,
        });
    }
    let factor = gain_factor(env);
    if factor <= 0.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "decentralized",
            reason: "compensation exceeds the enclosed rent at every density",
        });
    }
    let start = (env.cost_ratio() / ((1.0 - alpha) * factor)).powf(1.0 / alpha);
    let full = (env.cost_ratio() * lambda.powf(alpha) / ((1.0 - alpha) * factor)).powf(1.0 / alpha);
    Ok(DecentralizedLoci { start, full })
}

/// Density above which full enclosure is risk dominant (complements case).
pub fn global_games_cutoff(env: &Environment) -> Result<f64> {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_regulated;
    if lambda >= 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "global_games",
            reason: "requires low-TFP gains (strategic complements)",
        });
    }
    if env.regulation == 0.0 && env.compensation == 0.0 {
        let ratio = if 1.0 - lambda < 1e-9 {
            1.0 / (1.0 - alpha)
        } else {
            (1.0 - lambda) / (lambda.powf(alpha) - lambda)
        };
        return Ok((env.cost_ratio() / env.tfp_gain * ratio).powf(1.0 / alpha));
    }
    let factor = gain_factor(env);
    if factor <= 0.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "global_games",
            reason: "compensation exceeds the enclosed rent at every density",
        });
    }
    let inner = env.cost_ratio() / ((1.0 - alpha) * factor * mean_spread_power(lambda, alpha));
    Ok(inner.powf(1.0 / alpha))
}

/// The marginal social value of enclosure split into what the encloser
/// sees and the two effects it ignores.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExternalityDecomposition {
    pub net_private: f64,
    pub external_cost: f64,
    pub external_benefit: f64,
}

impl ExternalityDecomposition {
    pub fn total(&self) -> f64 {
        self.net_private + self.external_cost + self.external_benefit
    }
}

/// Evaluated for an unregulated commons without compensation.
pub fn externality_decomposition(env: &Environment, t: f64) -> Result<ExternalityDecomposition> {
    if !(t > 0.0 && t < 1.0) {
        return Err(ModelError::Degenerate {
            t,
            l: f64::NAN,
            reason: "externality decomposition needs an interior enclosure rate",
        });
    }
    let alpha = env.labor_share;
    let base = env.potential_output();
    let lambda = env.composite().lambda_open;
    let l = reaction(lambda, t);
    let d = spread(lambda, t);
    let land_e = (1.0 - alpha) * base * (l / t).powf(alpha);
    let land_c = (1.0 - alpha) * base * ((1.0 - l) / (1.0 - t)).powf(alpha);
    let labor_e = alpha * base * (t / l).powf(1.0 - alpha);
    let labor_c = alpha * base * ((1.0 - t) / (1.0 - l)).powf(1.0 - alpha);
    let dl_dt = lambda / (d * d);
    Ok(ExternalityDecomposition {
        net_private: env.tfp_gain * land_e - env.enclosure_cost,
        external_cost: -land_c,
        external_benefit: (env.tfp_gain * labor_e - labor_c) * dl_dt,
    })
}
