//! Regime maps over a grid of productivity gains and population densities.

mod export;

pub use export::{format_sig9, round_sig9, write_csv, write_json, write_svg, CSV_FIXED_COLUMNS};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decentralized::{
    classify_equilibria, decentralized_thresholds, global_games_cutoff, labor_reaction, Selection,
};
use crate::economy::{output_per_land, Environment};
use crate::error::{ModelError, Result};
use crate::monopoly::{
    monopoly_full_locus, monopoly_low_tfp_locus, monopoly_solve, monopoly_start_locus,
    monopoly_thresholds,
};
use crate::planner::{
    first_best_solve, first_best_thresholds, second_best_endpoint_locus, second_best_full_locus,
    second_best_solve, second_best_start_locus, z0, Regime,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    FirstBest,
    SecondBest,
    Decentralized,
    Monopoly,
}

impl Solver {
    pub const ALL: [Solver; 4] = [
        Solver::FirstBest,
        Solver::SecondBest,
        Solver::Decentralized,
        Solver::Monopoly,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Solver::FirstBest => "first_best",
            Solver::SecondBest => "second_best",
            Solver::Decentralized => "decentralized",
            Solver::Monopoly => "monopoly",
        }
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(ModelError::InvalidSweep(format!(
                "{name}: steps must be at least 2"
            )));
        }
        if !(self.min > 0.0 && self.max > self.min && self.max.is_finite()) {
            return Err(ModelError::InvalidSweep(format!(
                "{name}: need 0 < min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }

    fn linear(&self) -> Vec<f64> {
        let n = self.steps - 1;
        (0..=n)
            .map(|i| self.min + (self.max - self.min) * i as f64 / n as f64)
            .collect()
    }

    fn logarithmic(&self) -> Vec<f64> {
        let (lo, hi) = (self.min.ln(), self.max.ln());
        let n = self.steps - 1;
        (0..=n)
            .map(|i| (lo + (hi - lo) * i as f64 / n as f64).exp())
            .collect()
    }
}

/// A rectangular sweep: `theta` spaced linearly, `lbar` logarithmically.
/// The `theta` and `lbar` fields of `fixed` are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub theta: AxisRange,
    pub lbar: AxisRange,
    #[serde(default)]
    pub fixed: Environment,
    pub solvers: Vec<Solver>,
}

impl SweepSpec {
    pub fn new(theta: AxisRange, lbar: AxisRange, solvers: &[Solver]) -> Self {
        Self {
            theta,
            lbar,
            fixed: Environment::default(),
            solvers: solvers.to_vec(),
        }
    }

    pub fn with_fixed(mut self, fixed: Environment) -> Self {
        self.fixed = fixed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.theta.validate("theta")?;
        self.lbar.validate("lbar")?;
        if self.solvers.is_empty() {
            return Err(ModelError::InvalidSweep("no solvers requested".into()));
        }
        self.fixed
            .with_tfp_gain(self.theta.min)
            .with_density(self.lbar.min)
            .validate()
    }

    /// Requested solvers in canonical order without duplicates.
    pub fn solver_set(&self) -> Vec<Solver> {
        let mut s = self.solvers.clone();
        s.sort();
        s.dedup();
        s
    }
}

/// How a decentralized outcome compares with the second-best optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inefficiency {
    Efficient,
    Excessive,
    Insufficient,
    /// No enclosure although the second best encloses.
    CoordinationFailure,
}

impl Inefficiency {
    pub fn as_str(&self) -> &'static str {
        match self {
            Inefficiency::Efficient => "efficient",
            Inefficiency::Excessive => "excessive",
            Inefficiency::Insufficient => "insufficient",
            Inefficiency::CoordinationFailure => "coordination_failure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub solver: Solver,
    pub regime: Regime,
    /// Enclosure share realized (the selected corner when multiple).
    pub t_e: f64,
    /// Net output per unit land at `t_e` under the solver's labor rule.
    pub welfare: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub theta: f64,
    pub lbar: f64,
    pub outcomes: Vec<SolverOutcome>,
    pub decentralized_selected: Option<Selection>,
    /// Second-best minus decentralized net output.
    pub welfare_gap: Option<f64>,
    pub inefficiency: Option<Inefficiency>,
    pub error: Option<String>,
}

impl CellResult {
    pub fn outcome(&self, solver: Solver) -> Option<&SolverOutcome> {
        self.outcomes.iter().find(|o| o.solver == solver)
    }
}

fn net_output(env: &Environment, t: f64, enclosed_labor: f64) -> f64 {
    output_per_land(env, env.tfp_gain, t, enclosed_labor)
        + output_per_land(env, 1.0, 1.0 - t, 1.0 - enclosed_labor)
        - env.enclosure_cost * t
}

const SAME_ENCLOSURE: f64 = 1e-9;

fn inefficiency(decentralized: f64, second_best: f64) -> Inefficiency {
    if (decentralized - second_best).abs() <= SAME_ENCLOSURE {
        Inefficiency::Efficient
    } else if decentralized > second_best {
        Inefficiency::Excessive
    } else if decentralized == 0.0 {
        Inefficiency::CoordinationFailure
    } else {
        Inefficiency::Insufficient
    }
}

/// Runs each requested solver at one economy.
pub fn classify_point(env: &Environment, solvers: &[Solver]) -> Result<CellResult> {
    env.validate()?;
    let mut outcomes = Vec::with_capacity(solvers.len());
    let mut selected = None;
    for &solver in solvers {
        let outcome = match solver {
            Solver::FirstBest => {
                let s = first_best_solve(env);
                SolverOutcome {
                    solver,
                    regime: s.regime,
                    t_e: s.enclosed_land,
                    welfare: s.net_output,
                }
            }
            Solver::SecondBest => {
                let s = second_best_solve(env);
                SolverOutcome {
                    solver,
                    regime: s.regime,
                    t_e: s.enclosed_land,
                    welfare: s.net_output,
                }
            }
            Solver::Decentralized => {
                let r = classify_equilibria(env);
                if r.regime == Regime::Multiple {
                    selected = Some(r.selected);
                }
                SolverOutcome {
                    solver,
                    regime: r.regime,
                    t_e: r.outcome,
                    welfare: net_output(env, r.outcome, labor_reaction(env, r.outcome)),
                }
            }
            Solver::Monopoly => {
                let s = monopoly_solve(env);
                SolverOutcome {
                    solver,
                    regime: s.regime,
                    t_e: s.enclosed_land,
                    welfare: z0(env, s.enclosed_land) - env.enclosure_cost * s.enclosed_land,
                }
            }
        };
        outcomes.push(outcome);
    }
    let find = |s: Solver| outcomes.iter().find(|o| o.solver == s).copied();
    let (welfare_gap, ineff) = match (find(Solver::SecondBest), find(Solver::Decentralized)) {
        (Some(sb), Some(dec)) => (
            Some(sb.welfare - dec.welfare),
            Some(inefficiency(dec.t_e, sb.t_e)),
        ),
        _ => (None, None),
    };
    Ok(CellResult {
        theta: env.tfp_gain,
        lbar: env.density,
        outcomes,
        decentralized_selected: selected,
        welfare_gap,
        inefficiency: ineff,
        error: None,
    })
}

/// A locus traced over the theta grid, split where it is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocusPolyline {
    pub name: String,
    /// Runs of `[theta, lbar]` points.
    pub segments: Vec<Vec<[f64; 2]>>,
}

impl LocusPolyline {
    /// Locus value at a grid theta, if defined there.
    pub fn value_at(&self, theta: f64) -> Option<f64> {
        self.segments
            .iter()
            .flatten()
            .find(|p| p[0] == theta)
            .map(|p| p[1])
    }
}

type LocusFn = fn(&Environment) -> Result<f64>;

fn first_best_start(env: &Environment) -> Result<f64> {
    first_best_thresholds(env).map(|l| l.start)
}
fn first_best_full(env: &Environment) -> Result<f64> {
    first_best_thresholds(env).map(|l| l.full)
}
fn decentralized_start(env: &Environment) -> Result<f64> {
    decentralized_thresholds(env).map(|l| l.start)
}
fn decentralized_full(env: &Environment) -> Result<f64> {
    decentralized_thresholds(env).map(|l| l.full)
}

fn loci_for(solver: Solver) -> &'static [(&'static str, LocusFn)] {
    match solver {
        Solver::FirstBest => &[
            ("first_best_start", first_best_start),
            ("first_best_full", first_best_full),
        ],
        Solver::SecondBest => &[
            ("second_best_endpoint", second_best_endpoint_locus),
            ("second_best_start", second_best_start_locus),
            ("second_best_full", second_best_full_locus),
        ],
        Solver::Decentralized => &[
            ("decentralized_start", decentralized_start),
            ("decentralized_full", decentralized_full),
            ("global_games", global_games_cutoff),
        ],
        Solver::Monopoly => &[
            ("monopoly_low_tfp", monopoly_low_tfp_locus),
            ("monopoly_start", monopoly_start_locus),
            ("monopoly_full", monopoly_full_locus),
        ],
    }
}

fn trace(name: &str, locus: LocusFn, fixed: &Environment, thetas: &[f64]) -> LocusPolyline {
    let mut segments: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut run: Vec<[f64; 2]> = Vec::new();
    for &theta in thetas {
        match locus(&fixed.with_tfp_gain(theta)) {
            Ok(l) if l.is_finite() => run.push([theta, l]),
            _ => {
                if !run.is_empty() {
                    segments.push(std::mem::take(&mut run));
                }
            }
        }
    }
    if !run.is_empty() {
        segments.push(run);
    }
    LocusPolyline {
        name: name.to_string(),
        segments,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub spec: SweepSpec,
    pub thetas: Vec<f64>,
    pub lbars: Vec<f64>,
    /// Row-major: the cell for `(thetas[i], lbars[j])` is at `i * lbars.len() + j`.
    pub cells: Vec<CellResult>,
    pub loci: Vec<LocusPolyline>,
}

impl SweepGrid {
    pub fn cell(&self, i: usize, j: usize) -> &CellResult {
        &self.cells[i * self.lbars.len() + j]
    }

    pub fn locus(&self, name: &str) -> Option<&LocusPolyline> {
        self.loci.iter().find(|l| l.name == name)
    }
}

/// Evaluates every cell in parallel; assembly order is fixed.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepGrid> {
    spec.validate()?;
    let solvers = spec.solver_set();
    let thetas = spec.theta.linear();
    let lbars = spec.lbar.logarithmic();
    let n_l = lbars.len();
    let cells: Vec<CellResult> = (0..thetas.len() * n_l)
        .into_par_iter()
        .map(|k| {
            let (theta, lbar) = (thetas[k / n_l], lbars[k % n_l]);
            let env = spec.fixed.with_tfp_gain(theta).with_density(lbar);
            classify_point(&env, &solvers).unwrap_or_else(|e| CellResult {
                theta,
                lbar,
                outcomes: Vec::new(),
                decentralized_selected: None,
                welfare_gap: None,
                inefficiency: None,
                error: Some(e.to_string()),
            })
        })
        .collect();
    let loci = solvers
        .iter()
        .flat_map(|&s| loci_for(s).iter())
        .map(|&(name, f)| trace(name, f, &spec.fixed, &thetas))
        .collect();
    Ok(SweepGrid {
        spec: spec.clone(),
        thetas,
        lbars,
        cells,
        loci,
    })
}

/// One row of the locus table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub key: String,
    pub description: String,
    pub value: Option<f64>,
    /// Why the locus is undefined here.
    pub note: Option<String>,
}

/// Every density locus at one `(theta, alpha, c/A, mu, tau)`.
pub fn threshold_table(env: &Environment) -> Vec<ThresholdRow> {
    let mut rows = Vec::new();
    let mut push = |key: &str, description: &str, value: Result<f64>| {
        let (value, note) = match value {
            Ok(v) => (Some(v), None),
            Err(e) => (None, Some(e.to_string())),
        };
        rows.push(ThresholdRow {
            key: key.to_string(),
            description: description.to_string(),
            value,
            note,
        });
    };
    push(
        "first_best_start",
        "first best begins enclosing",
        first_best_start(env),
    );
    push(
        "first_best_full",
        "first best fully encloses",
        first_best_full(env),
    );
    push(
        "decentralized_start",
        "entry pays with no land enclosed",
        decentralized_start(env),
    );
    push(
        "decentralized_full",
        "entry pays with all land enclosed",
        decentralized_full(env),
    );
    push(
        "second_best_start",
        "second best begins enclosing",
        second_best_start_locus(env),
    );
    push(
        "second_best_full",
        "second best fully encloses",
        second_best_full_locus(env),
    );
    push(
        "second_best_endpoint",
        "second best prefers full to none",
        second_best_endpoint_locus(env),
    );
    push(
        "global_games",
        "full enclosure risk dominant",
        global_games_cutoff(env),
    );
    push(
        "monopoly_low_tfp",
        "monopolist fully encloses (low gains)",
        monopoly_low_tfp_locus(env),
    );
    push(
        "monopoly_start",
        "monopolist begins enclosing",
        monopoly_start_locus(env),
    );
    push(
        "monopoly_full",
        "monopolist fully encloses (high gains)",
        monopoly_full_locus(env),
    );
    let printed = monopoly_thresholds(env)
        .full_printed
        .ok_or(ModelError::ThresholdUndefined {
            locus: "monopoly_full",
            reason: "requires high-TFP gains",
        });
    push(
        "monopoly_full_printed",
        "printed completion formula (diagnostic)",
        printed,
    );
    rows
}

/// Default figure window.
pub const FIGURE_THETA: (f64, f64) = (0.5, 3.0);
pub const FIGURE_LBAR: (f64, f64) = (0.05, 50.0);
pub const FIGURE_RESOLUTION: usize = 200;

/// What fills the cells of a region map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorBy {
    Solver(Solver),
    Inefficiency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigurePreset {
    pub name: String,
    pub title: String,
    pub spec: SweepSpec,
    pub color_by: ColorBy,
}

/// Sweep presets for figures 1 to 7. Figure 7 has panels `a` to `d`
/// for `(mu, tau)` in `(0,0), (1,0), (0,1), (1,1)`; with no panel all
/// four are returned.
pub fn figure_presets(
    figure: u32,
    panel: Option<char>,
    resolution: usize,
) -> Result<Vec<FigurePreset>> {
    use Solver::*;
    let theta = AxisRange::new(FIGURE_THETA.0, FIGURE_THETA.1, resolution);
    let lbar = AxisRange::new(FIGURE_LBAR.0, FIGURE_LBAR.1, resolution);
    let make =
        |name: String, title: &str, solvers: &[Solver], color_by: ColorBy, fixed: Environment| {
            FigurePreset {
                name,
                title: title.to_string(),
                spec: SweepSpec::new(theta, lbar, solvers).with_fixed(fixed),
                color_by,
            }
        };
    let base = Environment::default();
    if panel.is_some() && figure != 7 {
        return Err(ModelError::InvalidSweep(format!(
            "figure {figure} has no panels"
        )));
    }
    let presets = match figure {
        1 => vec![make(
            "figure1".into(),
            "Socially efficient enclosure",
            &[FirstBest],
            ColorBy::Solver(FirstBest),
            base,
        )],
        2 => vec![make(
            "figure2".into(),
            "Decentralized enclosure equilibria",
            &[Decentralized],
            ColorBy::Solver(Decentralized),
            base,
        )],
        3 => vec![make(
            "figure3".into(),
            "Optimal and decentralized enclosure compared",
            &[FirstBest, Decentralized],
            ColorBy::Solver(Decentralized),
            base,
        )],
        4 => vec![make(
            "figure4".into(),
            "First-best and second-best enclosure",
            &[FirstBest, SecondBest],
            ColorBy::Solver(SecondBest),
            base,
        )],
        5 => vec![make(
            "figure5".into(),
            "Monopolistic versus competitive and optimal enclosure",
            &[FirstBest, Decentralized, Monopoly],
            ColorBy::Solver(Monopoly),
            base,
        )],
        6 => vec![make(
            "figure6".into(),
            "Decentralized and second-best outcomes compared",
            &[SecondBest, Decentralized],
            ColorBy::Inefficiency,
            base,
        )],
        7 => {
            let panels = [
                ('a', 0.0, 0.0),
                ('b', 1.0, 0.0),
                ('c', 0.0, 1.0),
                ('d', 1.0, 1.0),
            ];
            if let Some(p) = panel {
                if !panels.iter().any(|&(q, _, _)| q == p) {
                    return Err(ModelError::InvalidSweep(format!(
                        "figure 7 has panels a-d, not {p}"
                    )));
                }
            }
            panels
                .iter()
                .filter(|&&(p, _, _)| panel.is_none_or(|want| want == p))
                .map(|&(p, mu, tau)| {
                    make(
                        format!("figure7{p}"),
                        &format!("Policy regime mu = {mu}, tau = {tau}"),
                        &[FirstBest, Decentralized],
                        ColorBy::Solver(Decentralized),
                        base.with_regulation(mu).with_compensation(tau),
                    )
                })
                .collect()
        }
        _ => {
            return Err(ModelError::InvalidSweep(format!(
                "no figure {figure}; choose 1-7"
            )))
        }
    };
    Ok(presets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planner::RegimeKind;

    fn small(solvers: &[Solver]) -> SweepSpec {
        SweepSpec::new(
            AxisRange::new(0.8, 3.0, 40),
            AxisRange::new(0.05, 20.0, 40),
            solvers,
        )
    }

    #[test]
    fn excessive_enclosure_cell() {
        let cell = classify_point(
            &Environment::benchmark(1.2, 6.5),
            &[Solver::SecondBest, Solver::Decentralized],
        )
        .unwrap();
        assert_eq!(cell.outcome(Solver::Decentralized).unwrap().t_e, 1.0);
        assert_eq!(
            cell.outcome(Solver::SecondBest).unwrap().regime,
            Regime::NoEnclosure
        );
        assert_eq!(cell.inefficiency, Some(Inefficiency::Excessive));
        assert_eq!(cell.decentralized_selected, Some(Selection::Full));
        assert!(cell.welfare_gap.unwrap() > 0.0);
    }

    #[test]
    fn coordination_failure_cell() {
        let cell = classify_point(
            &Environment::benchmark(2.0, 0.6),
            &[Solver::SecondBest, Solver::Decentralized],
        )
        .unwrap();
        assert_eq!(
            cell.outcome(Solver::SecondBest).unwrap().regime.kind(),
            RegimeKind::Partial
        );
        assert_eq!(
            cell.outcome(Solver::Decentralized).unwrap().regime,
            Regime::NoEnclosure
        );
        assert_eq!(cell.inefficiency, Some(Inefficiency::CoordinationFailure));
    }

    #[test]
    fn smallest_sweep() {
        let spec = SweepSpec::new(
            AxisRange::new(1.0, 2.0, 2),
            AxisRange::new(0.5, 5.0, 2),
            &Solver::ALL,
        );
        let grid = run_sweep(&spec).unwrap();
        assert_eq!(grid.cells.len(), 4);
        assert!(grid
            .cells
            .iter()
            .all(|c| c.outcomes.len() == 4 && c.error.is_none()));
        assert_eq!(grid.cell(1, 0).theta, 2.0);
        assert!((grid.cell(1, 1).lbar - 5.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = SweepSpec::new(
            AxisRange::new(1.0, 2.0, 1),
            AxisRange::new(0.5, 5.0, 2),
            &Solver::ALL,
        );
        assert!(matches!(run_sweep(&bad), Err(ModelError::InvalidSweep(_))));
        let bad = SweepSpec::new(
            AxisRange::new(1.0, 2.0, 3),
            AxisRange::new(0.0, 5.0, 2),
            &Solver::ALL,
        );
        assert!(run_sweep(&bad).is_err());
        let bad = SweepSpec::new(
            AxisRange::new(1.0, 2.0, 3),
            AxisRange::new(0.5, 5.0, 2),
            &[],
        );
        assert!(run_sweep(&bad).is_err());
    }

    #[test]
    fn loci_cross_at_high_tfp_threshold() {
        let spec = SweepSpec::new(
            AxisRange::new(0.8, 3.0, 100),
            AxisRange::new(0.05, 20.0, 100),
            &[Solver::Decentralized],
        );
        let grid = run_sweep(&spec).unwrap();
        let start = grid.locus("decentralized_start").unwrap();
        let full = grid.locus("decentralized_full").unwrap();
        let cell = grid.thetas[1] - grid.thetas[0];
        let mut crossing = None;
        for w in grid.thetas.windows(2) {
            let d0 = start.value_at(w[0]).unwrap() - full.value_at(w[0]).unwrap();
            let d1 = start.value_at(w[1]).unwrap() - full.value_at(w[1]).unwrap();
            if d0.signum() != d1.signum() {
                crossing = Some(0.5 * (w[0] + w[1]));
            }
        }
        assert!((crossing.unwrap() - 1.5).abs() <= cell);
    }

    #[test]
    fn sweep_is_deterministic_and_scale_free() {
        let spec = small(&Solver::ALL);
        let a = run_sweep(&spec).unwrap();
        assert_eq!(a, run_sweep(&spec).unwrap());
        let scaled = spec.clone().with_fixed(spec.fixed.rescaled(2.0));
        let b = run_sweep(&scaled).unwrap();
        for (x, y) in a.cells.iter().zip(&b.cells) {
            for (ox, oy) in x.outcomes.iter().zip(&y.outcomes) {
                assert_eq!(ox.regime.kind(), oy.regime.kind());
            }
        }
    }

    #[test]
    fn planner_labels_monotone_in_density() {
        let grid = run_sweep(&small(&[Solver::FirstBest, Solver::SecondBest])).unwrap();
        let rank = |k: RegimeKind| match k {
            RegimeKind::NoEnclosure => 0,
            RegimeKind::Partial => 1,
            RegimeKind::Full => 2,
            RegimeKind::Multiple => unreachable!(),
        };
        for i in 0..grid.thetas.len() {
            for solver in [Solver::FirstBest, Solver::SecondBest] {
                let ranks: Vec<_> = (0..grid.lbars.len())
                    .map(|j| rank(grid.cell(i, j).outcome(solver).unwrap().regime.kind()))
                    .collect();
                assert!(
                    ranks.windows(2).all(|w| w[0] <= w[1]),
                    "{solver:?} theta={}",
                    grid.thetas[i]
                );
            }
        }
    }

    #[test]
    fn welfare_gap_nonnegative_without_regulation() {
        let grid = run_sweep(&small(&[Solver::SecondBest, Solver::Decentralized])).unwrap();
        for c in &grid.cells {
            assert!(c.welfare_gap.unwrap() >= -1e-12, "{c:?}");
            if c.inefficiency == Some(Inefficiency::Efficient) {
                assert!(c.welfare_gap.unwrap().abs() < 1e-9);
            }
        }
    }

    #[test]
    fn decentralized_completion_matches_second_best_locus() {
        let grid = run_sweep(&small(&[Solver::SecondBest, Solver::Decentralized])).unwrap();
        for (i, &theta) in grid.thetas.iter().enumerate() {
            if theta <= 1.5 {
                continue;
            }
            let locus = second_best_full_locus(&Environment::benchmark(theta, 1.0)).unwrap();
            for (j, &lbar) in grid.lbars.iter().enumerate() {
                let c = grid.cell(i, j);
                let dec_full = c.outcome(Solver::Decentralized).unwrap().regime == Regime::Full;
                let sb_full = c.outcome(Solver::SecondBest).unwrap().regime == Regime::Full;
                assert_eq!(dec_full, lbar >= locus);
                assert_eq!(sb_full, lbar >= locus);
            }
        }
    }

    #[test]
    fn regulated_and_compensated_commons_is_first_best() {
        let spec = small(&[Solver::FirstBest, Solver::Decentralized]).with_fixed(
            Environment::default()
                .with_regulation(1.0)
                .with_compensation(1.0),
        );
        let grid = run_sweep(&spec).unwrap();
        for c in &grid.cells {
            let fb = c.outcome(Solver::FirstBest).unwrap();
            let dec = c.outcome(Solver::Decentralized).unwrap();
            assert_eq!(fb.regime.kind(), dec.regime.kind());
        }
    }

    #[test]
    fn threshold_table_rows() {
        let rows = threshold_table(&Environment::benchmark(2.0, 1.0));
        let get = |k: &str| rows.iter().find(|r| r.key == k).unwrap();
        assert!(get("global_games").value.is_none());
        assert!(get("global_games").note.is_some());
        assert_eq!(
            get("second_best_full").value,
            get("decentralized_full").value
        );
        let low = threshold_table(&Environment::benchmark(1.2, 1.0));
        let gg = low
            .iter()
            .find(|r| r.key == "global_games")
            .unwrap()
            .value
            .unwrap();
        assert!((gg - 5.663).abs() < 1e-3);
    }

    #[test]
    fn figure_presets_resolve() {
        for n in 1..=6 {
            assert_eq!(figure_presets(n, None, 10).unwrap().len(), 1);
        }
        assert_eq!(figure_presets(7, None, 10).unwrap().len(), 4);
        let d = figure_presets(7, Some('d'), 10).unwrap();
        assert_eq!(d[0].spec.fixed.regulation, 1.0);
        assert_eq!(d[0].spec.fixed.compensation, 1.0);
        assert!(figure_presets(8, None, 10).is_err());
        assert!(figure_presets(7, Some('e'), 10).is_err());
        assert!(figure_presets(2, Some('a'), 10).is_err());
    }
}
