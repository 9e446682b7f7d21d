//! A single encloser holding rights over all unenclosed land.
//!
//! The syndicate internalizes how its own enclosure moves the market
//! rental rate. Unenclosed land stays under free access with no
//! compensation, so every function here evaluates the open-access economy.

use serde::{Deserialize, Serialize};

use crate::decentralized::{full_enclosure_density, rental_rate, rental_rate_slope};
use crate::economy::Environment;
use crate::error::{ModelError, Result};
use crate::numeric::bisect;
use crate::planner::Regime;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonopolySolution {
    pub regime: Regime,
    pub enclosed_land: f64,
    /// Rents net of enclosure cost per unit land at the optimum.
    pub profit: f64,
}

/// `(r(t) - c) t`.
pub fn monopoly_profit(env: &Environment, t: f64) -> f64 {
    let env = env.open_access();
    (rental_rate(&env, t) - env.enclosure_cost) * t
}

pub fn monopoly_profit_slope(env: &Environment, t: f64) -> f64 {
    let env = env.open_access();
    rental_rate(&env, t) + rental_rate_slope(&env, t) * t - env.enclosure_cost
}

pub fn monopoly_solve(env: &Environment) -> MonopolySolution {
    let open = env.open_access();
    let lambda = open.composite().lambda_open;
    let regime = if lambda <= 1.0 {
        // convex profit: only the corners can be optimal
        if monopoly_profit(&open, 1.0) > 0.0 {
            Regime::Full
        } else {
            Regime::NoEnclosure
        }
    } else if monopoly_profit_slope(&open, 0.0) <= 0.0 {
        Regime::NoEnclosure
    } else if monopoly_profit_slope(&open, 1.0) >= 0.0 {
        Regime::Full
    } else {
        let t = bisect(|t| monopoly_profit_slope(&open, t), 0.0, 1.0)
            .expect("concave profit has a sign change in its slope");
        Regime::Partial(t)
    };
    let regime = guard_against_corners(&open, regime);
    let t = regime.enclosure().unwrap_or(0.0);
    MonopolySolution {
        regime,
        enclosed_land: t,
        profit: monopoly_profit(&open, t),
    }
}

fn guard_against_corners(env: &Environment, regime: Regime) -> Regime {
    let Regime::Partial(t) = regime else {
        return regime;
    };
    let interior = monopoly_profit(env, t);
    let full = monopoly_profit(env, 1.0);
    if full > interior {
        Regime::Full
    } else if interior < 0.0 {
        Regime::NoEnclosure
    } else {
        regime
    }
}

/// Densities bounding the monopolist's enclosure regions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonopolyThresholds {
    /// Low-TFP switch from no enclosure to full enclosure.
    pub low_tfp_full: Option<f64>,
    /// High-TFP start of enclosure.
    pub start: Option<f64>,
    /// High-TFP completion of enclosure.
    pub full: Option<f64>,
    /// Completion locus as printed in the source derivation; kept for
    /// comparison only, it does not solve `pi'(1) = 0`.
    pub full_printed: Option<f64>,
}

fn lambda_open(env: &Environment) -> f64 {
    env.composite().lambda_open
}

pub fn monopoly_low_tfp_locus(env: &Environment) -> Result<f64> {
    if lambda_open(env) > 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "monopoly_low_tfp",
            reason: "requires low-TFP gains",
        });
    }
    Ok(full_enclosure_density(env))
}

fn require_high_tfp(env: &Environment, locus: &'static str) -> Result<f64> {
    let lambda = lambda_open(env);
    if lambda < 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus,
            reason: "requires high-TFP gains",
        });
    }
    Ok(lambda)
}

pub fn monopoly_start_locus(env: &Environment) -> Result<f64> {
    let lambda = require_high_tfp(env, "monopoly_start")?;
    Ok(full_enclosure_density(env) / lambda)
}

/// Solves `pi'(1) = 0`: `A lbar^alpha = c Lambda / (theta (1 - alpha) (Lambda (1 - alpha) + alpha))`.
pub fn monopoly_full_locus(env: &Environment) -> Result<f64> {
    let lambda = require_high_tfp(env, "monopoly_full")?;
    let alpha = env.labor_share;
    let scaled = env.cost_ratio() * lambda
        / (env.tfp_gain * (1.0 - alpha) * (lambda * (1.0 - alpha) + alpha));
    Ok(scaled.powf(1.0 / alpha))
}

fn printed_full_locus(env: &Environment) -> Result<f64> {
    let lambda = require_high_tfp(env, "monopoly_full")?;
    let alpha = env.labor_share;
    let scaled =
        alpha * env.cost_ratio() / (1.0 - alpha) * lambda / (lambda * (1.0 - alpha) + alpha);
    Ok(scaled.powf(1.0 / alpha))
}

pub fn monopoly_thresholds(env: &Environment) -> MonopolyThresholds {
    MonopolyThresholds {
        low_tfp_full: monopoly_low_tfp_locus(env).ok(),
        start: monopoly_start_locus(env).ok(),
        full: monopoly_full_locus(env).ok(),
        full_printed: printed_full_locus(env).ok(),
    }
}
