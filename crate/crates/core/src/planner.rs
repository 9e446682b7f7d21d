//! First-best and second-best enclosure planners.
//!
//! The first-best planner picks both the enclosure rate and the labor
//! split; the second-best planner picks only the enclosure rate and must
//! accept the open-access labor reaction of the decentralized economy.

use serde::{Deserialize, Serialize};

use crate::economy::Environment;
use crate::error::{ModelError, Result};
use crate::numeric::bisect;

/// Outcome classification of a solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    NoEnclosure,
    /// Interior enclosure share.
    Partial(f64),
    Full,
    /// Both corner equilibria exist (decentralized complements case only).
    Multiple,
}

/// [`Regime`] without the interior share, for comparisons and tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeKind {
    NoEnclosure,
    Partial,
    Full,
    Multiple,
}

impl RegimeKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeKind::NoEnclosure => "none",
            RegimeKind::Partial => "partial",
            RegimeKind::Full => "full",
            RegimeKind::Multiple => "multiple",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(RegimeKind::NoEnclosure),
            "partial" => Some(RegimeKind::Partial),
            "full" => Some(RegimeKind::Full),
            "multiple" => Some(RegimeKind::Multiple),
            _ => None,
        }
    }
}

impl std::fmt::Display for RegimeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Regime {
    pub fn kind(&self) -> RegimeKind {
        match self {
            Regime::NoEnclosure => RegimeKind::NoEnclosure,
            Regime::Partial(_) => RegimeKind::Partial,
            Regime::Full => RegimeKind::Full,
            Regime::Multiple => RegimeKind::Multiple,
        }
    }

    /// Enclosure share, if the regime pins one down.
    pub fn enclosure(&self) -> Option<f64> {
        match *self {
            Regime::NoEnclosure => Some(0.0),
            Regime::Partial(t) => Some(t),
            Regime::Full => Some(1.0),
            Regime::Multiple => None,
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Partial(t) => write!(f, "partial (t_e = {t:.6})"),
            other => f.write_str(other.kind().as_str()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlannerSolution {
    pub regime: Regime,
    pub enclosed_land: f64,
    pub enclosed_labor: f64,
    /// Output net of enclosure cost, per unit land.
    pub net_output: f64,
}

/// Efficient labor share on enclosed land: marginal products equalized.
pub fn first_best_labor(env: &Environment, t: f64) -> f64 {
    reaction(env.composite().lambda_efficient, t)
}

pub(crate) fn reaction(lambda: f64, t: f64) -> f64 {
    lambda * t / (1.0 + (lambda - 1.0) * t)
}

/// Output per unit land when labor is split efficiently at enclosure rate `t`.
pub fn z1(env: &Environment, t: f64) -> f64 {
    let lambda = env.composite().lambda_efficient;
    (1.0 + (lambda - 1.0) * t).powf(1.0 - env.labor_share) * env.potential_output()
}

pub fn z1_slope(env: &Environment, t: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_efficient;
    (1.0 - alpha)
        * (lambda - 1.0)
        * (1.0 + (lambda - 1.0) * t).powf(-alpha)
        * env.potential_output()
}

pub fn first_best_solve(env: &Environment) -> PlannerSolution {
    let c = env.enclosure_cost;
    let lambda = env.composite().lambda_efficient;
    let solution = |t: f64| PlannerSolution {
        regime: regime_at(t),
        enclosed_land: t,
        enclosed_labor: first_best_labor(env, t),
        net_output: z1(env, t) - c * t,
    };
    if lambda <= 1.0 || z1_slope(env, 0.0) <= c {
        return solution(0.0);
    }
    if z1_slope(env, 1.0) >= c {
        return solution(1.0);
    }
    // z1'(t) = c is a single power relation in 1 + (lambda - 1) t.
    let alpha = env.labor_share;
    let bracket_term =
        ((1.0 - alpha) * (lambda - 1.0) * env.potential_output() / c).powf(1.0 / alpha);
    let guess = ((bracket_term - 1.0) / (lambda - 1.0)).clamp(0.0, 1.0);
    let f = |t: f64| z1_slope(env, t) - c;
    let width = 1e-6;
    let (lo, hi) = ((guess - width).max(0.0), (guess + width).min(1.0));
    let t = bisect(f, lo, hi)
        .or_else(|_| bisect(f, 0.0, 1.0))
        .unwrap_or(guess);
    PlannerSolution {
        regime: Regime::Partial(t),
        ..solution(t)
    }
}

fn regime_at(t: f64) -> Regime {
    if t <= 0.0 {
        Regime::NoEnclosure
    } else if t >= 1.0 {
        Regime::Full
    } else {
        Regime::Partial(t)
    }
}

/// Densities where the first-best planner starts and completes enclosure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstBestLoci {
    pub start: f64,
    pub full: f64,
}

pub fn first_best_thresholds(env: &Environment) -> Result<FirstBestLoci> {
    let lambda = env.composite().lambda_efficient;
    if env.tfp_gain <= 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "first_best",
            reason: "theta <= 1: the planner never encloses",
        });
    }
    let alpha = env.labor_share;
    let start = (env.cost_ratio() / ((1.0 - alpha) * (lambda - 1.0))).powf(1.0 / alpha);
    Ok(FirstBestLoci {
        start,
        full: lambda * start,
    })
}

/// Output per unit land when labor follows the open-access reaction function.
///
/// Always evaluated for an unregulated commons, whatever `env.regulation` says.
pub fn z0(env: &Environment, t: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_open;
    let numerator = env.tfp_gain * lambda.powf(alpha) * t + (1.0 - t);
    numerator / (1.0 + (lambda - 1.0) * t).powf(alpha) * env.potential_output()
}

/// Analytic derivative of [`z0`].
pub fn z0_slope(env: &Environment, t: f64) -> f64 {
    let alpha = env.labor_share;
    let lambda = env.composite().lambda_open;
    let gain = env.tfp_gain * lambda.powf(alpha);
    let d = 1.0 + (lambda - 1.0) * t;
    let numerator = gain * t + (1.0 - t);
    ((gain - 1.0) / d.powf(alpha) - alpha * (lambda - 1.0) * numerator / d.powf(alpha + 1.0))
        * env.potential_output()
}

pub fn second_best_solve(env: &Environment) -> PlannerSolution {
    let c = env.enclosure_cost;
    let lambda = env.composite().lambda_open;
    let solution = |t: f64| PlannerSolution {
        regime: regime_at(t),
        enclosed_land: t,
        enclosed_labor: reaction(lambda, t),
        net_output: z0(env, t) - c * t,
    };
    if env.tfp_gain <= 1.0 {
        return solution(0.0);
    }
    if lambda <= 1.0 {
        // convex objective: compare corners
        return if z0(env, 1.0) - c >= z0(env, 0.0) {
            solution(1.0)
        } else {
            solution(0.0)
        };
    }
    if z0_slope(env, 0.0) <= c {
        return solution(0.0);
    }
    if z0_slope(env, 1.0) >= c {
        return solution(1.0);
    }
    let t = bisect(|t| z0_slope(env, t) - c, 0.0, 1.0)
        .expect("z0' - c changes sign on [0, 1] in the interior case");
    PlannerSolution {
        regime: Regime::Partial(t),
        ..solution(t)
    }
}

/// Second-best loci. Each is `None` where the defining condition does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondBestLoci {
    /// Low-TFP corner comparison `z0(1) - c = z0(0)`.
    pub endpoint: Option<f64>,
    /// High-TFP start of enclosure, `z0'(0) = c`.
    pub start: Option<f64>,
    /// High-TFP completion, `z0'(1) = c`.
    pub full: Option<f64>,
}

pub fn second_best_endpoint_locus(env: &Environment) -> Result<f64> {
    if env.tfp_gain <= 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus: "second_best_endpoint",
            reason: "theta <= 1: full enclosure never beats no enclosure",
        });
    }
    Ok((env.cost_ratio() / (env.tfp_gain - 1.0)).powf(1.0 / env.labor_share))
}

pub fn second_best_start_locus(env: &Environment) -> Result<f64> {
    let alpha = env.labor_share;
    let lambda = high_tfp_lambda(env, "second_best_start")?;
    let inner = env.cost_ratio() * alpha / ((lambda * (1.0 + alpha) - alpha) * (1.0 - alpha));
    Ok(inner.powf(1.0 / alpha))
}

pub fn second_best_full_locus(env: &Environment) -> Result<f64> {
    high_tfp_lambda(env, "second_best_full")?;
    let alpha = env.labor_share;
    Ok((env.cost_ratio() / (env.tfp_gain * (1.0 - alpha))).powf(1.0 / alpha))
}

fn high_tfp_lambda(env: &Environment, locus: &'static str) -> Result<f64> {
    let lambda = env.composite().lambda_open;
    if lambda <= 1.0 {
        return Err(ModelError::ThresholdUndefined {
            locus,
            reason: "requires high-TFP gains (theta > 1/alpha)",
        });
    }
    Ok(lambda)
}

pub fn second_best_thresholds(env: &Environment) -> SecondBestLoci {
    SecondBestLoci {
        endpoint: second_best_endpoint_locus(env).ok(),
        start: second_best_start_locus(env).ok(),
        full: second_best_full_locus(env).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::output_per_land;
    use crate::numeric::{bisect_log, central_difference, relative_gap};
    use proptest::prelude::*;

    /// Direct two-sector output for any labor split.
    fn two_sector(env: &Environment, t: f64, l: f64) -> f64 {
        output_per_land(env, env.tfp_gain, t, l) + output_per_land(env, 1.0, 1.0 - t, 1.0 - l)
    }

    /// Solves `theta (t/l)^(1-a) = ((1-t)/(1-l))^(1-a)` for `l` numerically.
    fn mpl_equalizing_labor(theta: f64, alpha: f64, t: f64) -> f64 {
        bisect(
            |l| theta * (t / l).powf(1.0 - alpha) - ((1.0 - t) / (1.0 - l)).powf(1.0 - alpha),
            1e-12,
            1.0 - 1e-12,
        )
        .unwrap()
    }

    #[test]
    fn first_best_labor_examples() {
        let env = Environment::benchmark(2.0, 1.0);
        assert_eq!(first_best_labor(&env, 0.0), 0.0);
        assert!((first_best_labor(&env, 1.0) - 1.0).abs() < 1e-15);
        let oracle = mpl_equalizing_labor(2.0, 2.0 / 3.0, 0.5);
        assert!((oracle - 4.0 / 4.5).abs() < 1e-12);
        assert!((first_best_labor(&env, 0.5) - oracle).abs() < 1e-12);
        let flat = Environment::benchmark(1.0, 1.0);
        for t in [0.1, 0.37, 0.9] {
            assert!((first_best_labor(&flat, t) - t).abs() < 1e-15);
        }
    }

    #[test]
    fn z1_examples() {
        let env = Environment::benchmark(2.0, 1.0);
        assert!((z1(&env, 0.0) - env.potential_output()).abs() < 1e-15);
        assert!((z1(&env, 1.0) - 2.0).abs() < 1e-12);
        assert!((two_sector(&env, 1.0, 1.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn first_best_regimes() {
        let none = first_best_solve(&Environment::benchmark(2.0, 0.1));
        assert_eq!(none.regime, Regime::NoEnclosure);
        let full = first_best_solve(&Environment::benchmark(2.0, 3.0));
        assert_eq!(full.regime, Regime::Full);

        let env = Environment::benchmark(2.0, 1.0);
        let partial = first_best_solve(&env);
        let t = partial.regime.enclosure().unwrap();
        assert_eq!(partial.regime.kind(), RegimeKind::Partial);
        assert!((z1_slope(&env, t) - 1.0).abs() < 1e-10);

        // brute-force grid over t with the efficient labor split
        let step = 1e-5;
        let (mut best_t, mut best_v) = (0.0, f64::NEG_INFINITY);
        for i in 0..=100_000 {
            let tt = i as f64 * step;
            let v = z1(&env, tt) - tt;
            if v > best_v {
                best_v = v;
                best_t = tt;
            }
        }
        assert!((best_t - t).abs() < 1e-4);
    }

    #[test]
    fn first_best_never_encloses_without_gain() {
        for theta in [0.3, 0.9, 1.0] {
            let s = first_best_solve(&Environment::benchmark(theta, 100.0).with_cost(0.0));
            assert_eq!(s.regime, Regime::NoEnclosure);
        }
        assert!(first_best_thresholds(&Environment::benchmark(1.0, 1.0)).is_err());
    }

    #[test]
    fn first_best_loci_match_root_finding() {
        let env = Environment::benchmark(2.0, 1.0);
        let loci = first_best_thresholds(&env).unwrap();
        let start = bisect_log(|l| z1_slope(&env.with_density(l), 0.0) - 1.0, 1e-6, 1e6).unwrap();
        let full = bisect_log(|l| z1_slope(&env.with_density(l), 1.0) - 1.0, 1e-6, 1e6).unwrap();
        assert!(relative_gap(loci.start, start) < 1e-10);
        assert!(relative_gap(loci.full, full) < 1e-10);
        assert!((loci.start - (3.0f64 / 7.0).powf(1.5)).abs() < 1e-12);
        assert!((loci.full - (12.0f64 / 7.0).powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn first_best_regime_flips_at_loci() {
        for theta in [1.1, 1.5, 2.0, 3.5] {
            let env = Environment::benchmark(theta, 1.0);
            let loci = first_best_thresholds(&env).unwrap();
            let below = first_best_solve(&env.with_density(loci.start * (1.0 - 1e-8)));
            let above = first_best_solve(&env.with_density(loci.start * (1.0 + 1e-8)));
            assert_eq!(below.regime, Regime::NoEnclosure);
            assert_eq!(above.regime.kind(), RegimeKind::Partial);
            let below = first_best_solve(&env.with_density(loci.full * (1.0 - 1e-8)));
            let above = first_best_solve(&env.with_density(loci.full * (1.0 + 1e-8)));
            assert_eq!(below.regime.kind(), RegimeKind::Partial);
            assert_eq!(above.regime, Regime::Full);
        }
    }

    #[test]
    fn z0_examples() {
        let env = Environment::benchmark(2.0, 1.0);
        assert!((z0(&env, 0.0) - 1.0).abs() < 1e-15);
        assert!((z0(&env, 1.0) - 2.0).abs() < 1e-12);
        assert!(z1(&env, 0.5) - z0(&env, 0.5) > 0.0);
        // compositional: output at (t, reaction(t))
        let lambda = env.composite().lambda_open;
        for t in [0.1, 0.5, 0.77] {
            let direct = two_sector(&env, t, reaction(lambda, t));
            assert!((direct - z0(&env, t)).abs() < 1e-12);
        }
    }

    #[test]
    fn z0_slope_matches_finite_difference() {
        for theta in [0.7, 1.2, 1.5, 2.0, 4.0] {
            let env = Environment::benchmark(theta, 2.3);
            for t in [0.05, 0.3, 0.5, 0.8, 0.95] {
                let fd = central_difference(|x| z0(&env, x), t, 1e-6);
                assert!(
                    relative_gap(fd, z0_slope(&env, t)) < 1e-5,
                    "theta={theta} t={t}"
                );
            }
        }
    }

    #[test]
    fn second_best_examples() {
        assert_eq!(
            second_best_solve(&Environment::benchmark(1.2, 12.0)).regime,
            Regime::Full
        );
        assert_eq!(
            second_best_solve(&Environment::benchmark(1.2, 10.0)).regime,
            Regime::NoEnclosure
        );
        let env = Environment::benchmark(2.0, 1.0);
        let s = second_best_solve(&env);
        let t = s.regime.enclosure().unwrap();
        assert_eq!(s.regime.kind(), RegimeKind::Partial);
        assert!((z0_slope(&env, t) - 1.0).abs() < 1e-10);

        let step = 1e-5;
        let (mut best_t, mut best_v) = (0.0, f64::NEG_INFINITY);
        for i in 0..=100_000 {
            let tt = i as f64 * step;
            let v = z0(&env, tt) - tt;
            if v > best_v {
                best_v = v;
                best_t = tt;
            }
        }
        assert!((best_t - t).abs() < 1e-4);
    }

    #[test]
    fn second_best_loci_match_root_finding() {
        let low = Environment::benchmark(1.2, 1.0);
        let ls = second_best_endpoint_locus(&low).unwrap();
        let oracle = bisect_log(
            |l| {
                let e = low.with_density(l);
                z0(&e, 1.0) - 1.0 - z0(&e, 0.0)
            },
            1e-6,
            1e6,
        )
        .unwrap();
        assert!(relative_gap(ls, oracle) < 1e-10);
        assert!((ls - 5f64.powf(1.5)).abs() < 1e-10);

        let high = Environment::benchmark(2.0, 1.0);
        let s0 = second_best_start_locus(&high).unwrap();
        let s1 = second_best_full_locus(&high).unwrap();
        let o0 = bisect_log(|l| z0_slope(&high.with_density(l), 0.0) - 1.0, 1e-6, 1e6).unwrap();
        let o1 = bisect_log(|l| z0_slope(&high.with_density(l), 1.0) - 1.0, 1e-6, 1e6).unwrap();
        assert!(relative_gap(s0, o0) < 1e-10);
        assert!(relative_gap(s1, o1) < 1e-10);
        assert!((s1 - 1.5f64.powf(1.5)).abs() < 1e-12);
        // frozen from an independent Brent solve of z0'(0) = c
        assert!((s0 - 0.475_280_577_280_514).abs() < 1e-9);
    }

    #[test]
    fn second_best_loci_domains() {
        assert!(second_best_endpoint_locus(&Environment::benchmark(0.9, 1.0)).is_err());
        assert!(second_best_start_locus(&Environment::benchmark(1.4, 1.0)).is_err());
        assert!(second_best_full_locus(&Environment::benchmark(1.5, 1.0)).is_err());
        let loci = second_best_thresholds(&Environment::benchmark(2.0, 1.0));
        assert!(loci.start.is_some() && loci.full.is_some() && loci.endpoint.is_some());
    }

    #[test]
    fn low_tfp_second_best_optimum_is_a_corner() {
        // very low gains make z0 concave near t = 0, but only where it falls
        for i in 0..60 {
            let theta = 0.05 + i as f64 * 0.024;
            for j in 0..30 {
                let lbar = 0.01 * 1.37f64.powi(j);
                let env = Environment::benchmark(theta, lbar);
                let net = |t: f64| z0(&env, t) - t;
                let corner = net(0.0).max(net(1.0));
                let interior = (1..2000)
                    .map(|k| net(k as f64 / 2000.0))
                    .fold(f64::MIN, f64::max);
                assert!(interior <= corner + 1e-12, "theta={theta} lbar={lbar}");
            }
        }
    }

    #[test]
    fn second_best_sandwiched_by_first_best() {
        for i in 0..40 {
            let theta = 1.55 + i as f64 * 0.06;
            let env = Environment::benchmark(theta, 1.0);
            let fb = first_best_thresholds(&env).unwrap();
            let s0 = second_best_start_locus(&env).unwrap();
            let s1 = second_best_full_locus(&env).unwrap();
            assert!(fb.start <= s0 && s1 <= fb.full, "theta={theta}");
        }
    }

    proptest! {
        #[test]
        fn efficient_labor_augments(theta in 1.01f64..5.0, alpha in 0.1f64..0.9, t in 0.01f64..0.99) {
            let env = Environment::benchmark(theta, 1.0).with_labor_share(alpha);
            prop_assert!(first_best_labor(&env, t) > t);
            let open = reaction(env.composite().lambda_open, t);
            prop_assert!(open < first_best_labor(&env, t));
        }

        #[test]
        fn objective_curvature(theta in 0.3f64..5.0, t in 0.02f64..0.98) {
            let env = Environment::benchmark(theta, 1.7);
            let h = 1e-3;
            let d2 = |f: &dyn Fn(f64) -> f64| f(t + h) - 2.0 * f(t) + f(t - h);
            let lambda0 = env.composite().lambda_open;
            if theta > 1.0 {
                prop_assert!(d2(&|x| z1(&env, x)) <= 1e-12);
            }
            if (1.0..1.49).contains(&theta) {
                prop_assert!(d2(&|x| z0(&env, x)) >= -1e-12);
            } else if lambda0 > 1.01 {
                prop_assert!(d2(&|x| z0(&env, x)) <= 1e-12);
            }
        }

        #[test]
        fn z0_below_z1(theta in 0.3f64..5.0, t in 0.0f64..1.0) {
            let env = Environment::benchmark(theta, 1.3);
            prop_assert!(z0(&env, t) <= z1(&env, t) * (1.0 + 1e-12));
        }
    }
}
