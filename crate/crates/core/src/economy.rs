//! Environment, composite parameters and Cobb-Douglas primitives.
//!
//! Land and labor enter only as shares of the economy-wide endowments, so
//! every quantity here is expressed per unit of total land and depends on
//! the endowments only through population density `lbar = L / T`.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::numeric::pow;

/// Labor share used by every figure preset.
pub const DEFAULT_LABOR_SHARE: f64 = 2.0 / 3.0;

/// Parameters describing one economy.
///
/// Serialized with the conventional short keys (`a`, `theta`, `lbar`,
/// `alpha`, `c`, `mu`, `tau`) used by configuration files and reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    /// Baseline total factor productivity.
    #[serde(rename = "a")]
    pub tfp: f64,
    /// Productivity multiplier unlocked by enclosure.
    #[serde(rename = "theta")]
    pub tfp_gain: f64,
    /// Population density, labor per unit land.
    #[serde(rename = "lbar")]
    pub density: f64,
    /// Output elasticity of labor.
    #[serde(rename = "alpha")]
    pub labor_share: f64,
    /// Cost of enclosing one unit of land, in output units.
    #[serde(rename = "c")]
    pub enclosure_cost: f64,
    /// Degree of access regulation in the unenclosed sector, in `[0, 1]`.
    #[serde(rename = "mu")]
    pub regulation: f64,
    /// Share of customary rent owed to displaced users, in `[0, 1]`.
    #[serde(rename = "tau")]
    pub compensation: f64,
}

impl Default for Environment {
    fn default() -> Self {
        Self {
            tfp: 1.0,
            tfp_gain: 2.0,
            density: 1.0,
            labor_share: DEFAULT_LABOR_SHARE,
            enclosure_cost: 1.0,
            regulation: 0.0,
            compensation: 0.0,
        }
    }
}

impl Environment {
    /// Figure defaults (`alpha = 2/3`, `c = A = 1`, open access, no
    /// compensation) at the given productivity gain and density.
    pub fn benchmark(tfp_gain: f64, density: f64) -> Self {
        Self {
            tfp_gain,
            density,
            ..Self::default()
        }
    }

    pub fn with_labor_share(mut self, alpha: f64) -> Self {
        self.labor_share = alpha;
        self
    }

    pub fn with_cost(mut self, c: f64) -> Self {
        self.enclosure_cost = c;
        self
    }

    pub fn with_tfp(mut self, a: f64) -> Self {
        self.tfp = a;
        self
    }

    pub fn with_regulation(mut self, mu: f64) -> Self {
        self.regulation = mu;
        self
    }

    pub fn with_compensation(mut self, tau: f64) -> Self {
        self.compensation = tau;
        self
    }

    pub fn with_density(mut self, density: f64) -> Self {
        self.density = density;
        self
    }

    pub fn with_tfp_gain(mut self, theta: f64) -> Self {
        self.tfp_gain = theta;
        self
    }

    /// Same economy with an unregulated commons and no compensation.
    pub fn open_access(&self) -> Self {
        Self {
            regulation: 0.0,
            compensation: 0.0,
            ..*self
        }
    }

    /// Multiplies baseline TFP and enclosure cost by `k`.
    pub fn rescaled(&self, k: f64) -> Self {
        Self {
            tfp: self.tfp * k,
            enclosure_cost: self.enclosure_cost * k,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        check(
            "alpha",
            self.labor_share,
            self.labor_share > 0.0 && self.labor_share < 1.0,
            "must lie strictly inside (0, 1)",
        )?;
        check(
            "theta",
            self.tfp_gain,
            self.tfp_gain > 0.0,
            "must be strictly positive",
        )?;
        check("a", self.tfp, self.tfp > 0.0, "must be strictly positive")?;
        check(
            "lbar",
            self.density,
            self.density > 0.0,
            "must be strictly positive",
        )?;
        check(
            "c",
            self.enclosure_cost,
            self.enclosure_cost >= 0.0,
            "must be non-negative",
        )?;
        check(
            "mu",
            self.regulation,
            (0.0..=1.0).contains(&self.regulation),
            "must lie in [0, 1]",
        )?;
        check(
            "tau",
            self.compensation,
            (0.0..=1.0).contains(&self.compensation),
            "must lie in [0, 1]",
        )
    }

    /// `A lbar^alpha`: output per unit land with nothing enclosed.
    pub fn potential_output(&self) -> f64 {
        self.tfp * self.density.powf(self.labor_share)
    }

    /// `c / A`, the only way cost and baseline TFP enter any locus.
    pub fn cost_ratio(&self) -> f64 {
        self.enclosure_cost / self.tfp
    }

    pub fn composite(&self) -> CompositeParams {
        CompositeParams::from_parts(self.tfp_gain, self.labor_share, self.regulation)
    }
}

fn check(field: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ModelError::InvalidParameter {
            field,
            value,
            reason,
        })
    }
}

/// Labor-allocation slopes and TFP thresholds derived from an environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompositeParams {
    /// Slope of the open-access labor reaction function, `(alpha theta)^(1/(1-alpha))`.
    pub lambda_open: f64,
    /// Slope of the efficient labor allocation, `theta^(1/(1-alpha))`.
    pub lambda_efficient: f64,
    /// Slope of the reaction function under access regulation `mu`.
    pub lambda_regulated: f64,
    /// Gain above which enclosure decisions are substitutes, `1/alpha`.
    pub high_tfp_threshold: f64,
    /// The same threshold under access regulation `mu`.
    pub high_tfp_threshold_regulated: f64,
}

impl CompositeParams {
    pub fn new(env: &Environment) -> Result<Self> {
        check(
            "alpha",
            env.labor_share,
            env.labor_share > 0.0 && env.labor_share < 1.0,
            "must lie strictly inside (0, 1)",
        )?;
        check(
            "theta",
            env.tfp_gain,
            env.tfp_gain > 0.0,
            "must be strictly positive",
        )?;
        Ok(env.composite())
    }

    fn from_parts(theta: f64, alpha: f64, mu: f64) -> Self {
        let inv = 1.0 / (1.0 - alpha);
        Self {
            lambda_open: pow(alpha * theta, inv),
            lambda_efficient: pow(theta, inv),
            lambda_regulated: regulated_lambda(theta, alpha, mu),
            high_tfp_threshold: 1.0 / alpha,
            high_tfp_threshold_regulated: 1.0 / alpha - mu * (1.0 - alpha) / alpha,
        }
    }
}

/// Reaction-function slope when a share `mu` of possession rents is
/// capturable on entry and exit.
pub fn regulated_lambda(theta: f64, alpha: f64, mu: f64) -> f64 {
    pow(
        alpha * theta / (1.0 - mu * (1.0 - alpha)),
        1.0 / (1.0 - alpha),
    )
}

/// Land and labor shares across sectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    pub enclosed_land: f64,
    pub enclosed_labor: f64,
    /// Zero in the two-sector economy.
    pub manufacturing_labor: f64,
}

impl Allocation {
    pub fn two_sector(enclosed_land: f64, enclosed_labor: f64) -> Self {
        Self {
            enclosed_land,
            enclosed_labor,
            manufacturing_labor: 0.0,
        }
    }

    pub fn customary_labor(&self) -> f64 {
        1.0 - self.enclosed_labor - self.manufacturing_labor
    }

    pub fn customary_land(&self) -> f64 {
        1.0 - self.enclosed_land
    }
}

/// `multiplier * A * lbar^alpha * t^(1-alpha) * l^alpha`.
///
/// Output of a sector holding land share `t` and labor share `l`, per unit
/// of total land.
pub fn output_per_land(env: &Environment, multiplier: f64, t: f64, l: f64) -> f64 {
    if t <= 0.0 || l <= 0.0 {
        return 0.0;
    }
    let alpha = env.labor_share;
    multiplier * env.potential_output() * t.powf(1.0 - alpha) * l.powf(alpha)
}

/// Factor returns of one sector. Labor returns are per worker; the land
/// return is per unit land.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginalProducts {
    pub land: f64,
    pub labor: f64,
    pub average_labor: f64,
}

impl MarginalProducts {
    /// `AP_L - MP_L - MP_T * T/L`; zero up to rounding by Euler's theorem.
    pub fn euler_residual(&self, t: f64, l: f64, density: f64) -> f64 {
        self.average_labor - self.labor - self.land * t / (l * density)
    }
}

pub fn marginal_products(
    env: &Environment,
    multiplier: f64,
    t: f64,
    l: f64,
) -> Result<MarginalProducts> {
    if t <= 0.0 || l <= 0.0 {
        return Err(ModelError::Degenerate {
            t,
            l,
            reason: "marginal products are unbounded with an empty factor",
        });
    }
    let alpha = env.labor_share;
    let per_worker = multiplier * env.tfp * env.density.powf(alpha - 1.0);
    let average_labor = per_worker * (t / l).powf(1.0 - alpha);
    Ok(MarginalProducts {
        land: (1.0 - alpha) * multiplier * env.potential_output() * (l / t).powf(alpha),
        labor: alpha * average_labor,
        average_labor,
    })
}
