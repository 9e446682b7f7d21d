//! Run configuration: a flat `key = value` file overridden by flags.

use std::collections::BTreeMap;
use std::path::Path;

use clap::Args;
use enclosure_core::{Environment, ManufacturingParams};

use crate::Failure;

/// Economy parameters shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct EnvFlags {
    /// Productivity gain from enclosure
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Population density (labor per unit land)
    #[arg(long, global = true)]
    pub lbar: Option<f64>,
    /// Labor share of output
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Enclosure cost per unit land
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Baseline TFP
    #[arg(long, global = true)]
    pub a: Option<f64>,
    /// Commons regulation in [0, 1]
    #[arg(long, global = true)]
    pub mu: Option<f64>,
    /// Compensation share in [0, 1]
    #[arg(long, global = true)]
    pub tau: Option<f64>,
    /// World price of manufactures (enables the three-sector report)
    #[arg(long, global = true)]
    pub price: Option<f64>,
    /// Manufacturing labor share
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Manufacturing TFP
    #[arg(long = "a-m", global = true)]
    pub a_m: Option<f64>,
    /// Manufacturing capital per worker
    #[arg(long = "k-bar", global = true)]
    pub k_bar: Option<f64>,
}

const KNOWN_KEYS: [&str; 13] = [
    "theta", "lbar", "alpha", "c", "a", "mu", "tau", "p", "beta", "a_m", "k_bar", "seed", "agents",
];

/// Values read from a configuration file.
#[derive(Debug, Clone, Default)]
pub struct FileConfig {
    values: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::io(format!("reading {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, Failure> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Failure::validation(format!("config line {}: expected key = value", n + 1))
            })?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(Failure::validation(format!(
                    "config line {}: unknown key `{key}`",
                    n + 1
                )));
            }
            let value: f64 = value.trim().parse().map_err(|_| {
                Failure::validation(format!("config line {}: `{key}` is not a number", n + 1))
            })?;
            values.insert(key.to_string(), value);
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }
}

/// Resolved configuration for one invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub env: Environment,
    pub manufacturing: Option<ManufacturingParams>,
    file: FileConfig,
}

impl RunConfig {
    pub fn resolve(file: FileConfig, flags: &EnvFlags) -> Self {
        let pick = |flag: Option<f64>, key: &str| flag.or_else(|| file.get(key));
        let mut env = Environment::default();
        let fields: [(&mut f64, Option<f64>, &str); 7] = [
            (&mut env.tfp_gain, flags.theta, "theta"),
            (&mut env.density, flags.lbar, "lbar"),
            (&mut env.labor_share, flags.alpha, "alpha"),
            (&mut env.enclosure_cost, flags.c, "c"),
            (&mut env.tfp, flags.a, "a"),
            (&mut env.regulation, flags.mu, "mu"),
            (&mut env.compensation, flags.tau, "tau"),
        ];
        for (slot, flag, key) in fields {
            if let Some(v) = pick(flag, key) {
                *slot = v;
            }
        }
        let mfg_values = [
            pick(flags.price, "p"),
            pick(flags.beta, "beta"),
            pick(flags.a_m, "a_m"),
            pick(flags.k_bar, "k_bar"),
        ];
        let manufacturing = mfg_values.iter().any(Option::is_some).then(|| {
            let d = ManufacturingParams::default();
            ManufacturingParams {
                price: mfg_values[0].unwrap_or(d.price),
                labor_share: mfg_values[1].unwrap_or(d.labor_share),
                tfp: mfg_values[2].unwrap_or(d.tfp),
                capital_per_worker: mfg_values[3].unwrap_or(d.capital_per_worker),
            }
        });
        Self {
            env,
            manufacturing,
            file,
        }
    }

    pub fn validate(&self) -> Result<(), Failure> {
        self.env.validate().map_err(Failure::from)?;
        if let Some(m) = &self.manufacturing {
            m.validate().map_err(Failure::from)?;
        }
        Ok(())
    }

    pub fn file_value(&self, key: &str) -> Option<f64> {
        self.file.get(key)
    }

    /// Overrides the economy fields of `base` with any value set on the
    /// command line or in the file.
    pub fn overlay(&self, base: Environment, flags: &EnvFlags) -> Environment {
        let pick = |flag: Option<f64>, key: &str| flag.or_else(|| self.file.get(key));
        Environment {
            tfp_gain: pick(flags.theta, "theta").unwrap_or(base.tfp_gain),
            density: pick(flags.lbar, "lbar").unwrap_or(base.density),
            labor_share: pick(flags.alpha, "alpha").unwrap_or(base.labor_share),
            enclosure_cost: pick(flags.c, "c").unwrap_or(base.enclosure_cost),
            tfp: pick(flags.a, "a").unwrap_or(base.tfp),
            regulation: pick(flags.mu, "mu").unwrap_or(base.regulation),
            compensation: pick(flags.tau, "tau").unwrap_or(base.compensation),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file =
            FileConfig::parse("theta = 1.2\nlbar=6 # dense\n\n# comment\nmu = 0.5\n").unwrap();
        let flags = EnvFlags {
            theta: Some(2.0),
            ..EnvFlags::default()
        };
        let cfg = RunConfig::resolve(file, &flags);
        assert_eq!(cfg.env.tfp_gain, 2.0);
        assert_eq!(cfg.env.density, 6.0);
        assert_eq!(cfg.env.regulation, 0.5);
        assert_eq!(cfg.env.labor_share, 2.0 / 3.0);
        assert!(cfg.manufacturing.is_none());
    }

    #[test]
    fn manufacturing_enabled_by_any_key() {
        let file = FileConfig::parse("p = 0.3").unwrap();
        let cfg = RunConfig::resolve(file, &EnvFlags::default());
        let m = cfg.manufacturing.unwrap();
        assert_eq!(m.price, 0.3);
        assert_eq!(m.labor_share, 0.5);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(FileConfig::parse("theta 2").is_err());
        assert!(FileConfig::parse("gamma = 2").is_err());
        assert!(FileConfig::parse("theta = two").is_err());
    }
}
