//! Single-economy report assembled by `solve`.

use std::fmt::Write as _;

use enclosure_core::decentralized::{
    externality_decomposition, labor_reaction, ExternalityDecomposition,
};
use enclosure_core::economy::{marginal_products, MarginalProducts};
use enclosure_core::structural::{
    classify_three_sector, three_sector_equilibrium, ThreeSectorAllocation,
};
use enclosure_core::{
    classify_equilibria, first_best_solve, monopoly_solve, second_best_solve, CompositeParams,
    Environment, EquilibriumReport, ManufacturingParams, MonopolySolution, PlannerSolution, Regime,
};
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct FactorReturns {
    pub enclosed_land: f64,
    pub enclosed_labor: f64,
    pub enclosed: Option<MarginalProducts>,
    pub customary: Option<MarginalProducts>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThreeSectorReport {
    pub params: ManufacturingParams,
    pub equilibrium: Option<EquilibriumReport>,
    pub allocation: Option<ThreeSectorAllocation>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub environment: Environment,
    pub composite: CompositeParams,
    pub first_best: PlannerSolution,
    pub second_best: PlannerSolution,
    pub decentralized: EquilibriumReport,
    pub monopoly: MonopolySolution,
    pub factor_returns: FactorReturns,
    pub externality: Option<ExternalityDecomposition>,
    /// Why the externality split is absent.
    pub externality_note: Option<String>,
    pub three_sector: Option<ThreeSectorReport>,
}

pub fn build(env: &Environment, mfg: Option<&ManufacturingParams>) -> SolveReport {
    let decentralized = classify_equilibria(env);
    let t = decentralized.outcome;
    let l = labor_reaction(env, t);
    let factor_returns = FactorReturns {
        enclosed_land: t,
        enclosed_labor: l,
        enclosed: marginal_products(env, env.tfp_gain, t, l).ok(),
        customary: marginal_products(env, 1.0, 1.0 - t, 1.0 - l).ok(),
    };
    let (externality, externality_note) = match decentralized.regime {
        Regime::Partial(t) => match externality_decomposition(env, t) {
            Ok(x) => (Some(x), None),
            Err(e) => (None, Some(e.to_string())),
        },
        _ => (None, Some("equilibrium is a corner".to_string())),
    };
    let three_sector = mfg.map(|m| {
        let mut error = None;
        let equilibrium = classify_three_sector(env, m)
            .map_err(|e| error = Some(e.to_string()))
            .ok();
        let allocation = equilibrium.and_then(|eq| {
            three_sector_equilibrium(env, m, eq.outcome)
                .map_err(|e| error = Some(e.to_string()))
                .ok()
        });
        ThreeSectorReport {
            params: *m,
            equilibrium,
            allocation,
            error,
        }
    });
    SolveReport {
        environment: *env,
        composite: env.composite(),
        first_best: first_best_solve(env),
        second_best: second_best_solve(env),
        decentralized,
        monopoly: monopoly_solve(env),
        factor_returns,
        externality,
        externality_note,
        three_sector,
    }
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

fn planner_lines(out: &mut String, name: &str, s: &PlannerSolution) {
    let _ = writeln!(out, "{name}");
    let _ = writeln!(out, "  regime          {}", s.regime);
    let _ = writeln!(out, "  enclosed land   {:.6}", s.enclosed_land);
    let _ = writeln!(out, "  enclosed labor  {:.6}", s.enclosed_labor);
    let _ = writeln!(out, "  net output      {:.6}", s.net_output);
}

fn returns_line(out: &mut String, name: &str, mp: &Option<MarginalProducts>) {
    match mp {
        Some(m) => {
            let _ = writeln!(
                out,
                "  {name:<10} MP_T {:.6}  MP_L {:.6}  AP_L {:.6}",
                m.land, m.labor, m.average_labor
            );
        }
        None => {
            let _ = writeln!(out, "  {name:<10} n/a (sector empty)");
        }
    }
}

pub fn render_text(r: &SolveReport) -> String {
    let mut out = String::new();
    let e = &r.environment;
    let _ = writeln!(out, "environment");
    let _ = writeln!(
        out,
        "  theta {}  lbar {}  alpha {:.6}  c {}  A {}  mu {}  tau {}",
        e.tfp_gain, e.density, e.labor_share, e.enclosure_cost, e.tfp, e.regulation, e.compensation
    );
    let c = &r.composite;
    let _ = writeln!(out, "composite");
    let _ = writeln!(out, "  Lambda_0        {:.6}", c.lambda_open);
    let _ = writeln!(out, "  Lambda_1        {:.6}", c.lambda_efficient);
    let _ = writeln!(out, "  Lambda_mu       {:.6}", c.lambda_regulated);
    let _ = writeln!(out, "  theta_H         {:.6}", c.high_tfp_threshold);
    let _ = writeln!(
        out,
        "  theta_H(mu)     {:.6}",
        c.high_tfp_threshold_regulated
    );
    planner_lines(&mut out, "first best", &r.first_best);
    planner_lines(&mut out, "second best", &r.second_best);

    let d = &r.decentralized;
    let _ = writeln!(out, "decentralized");
    let _ = writeln!(out, "  regime          {}", d.regime);
    let _ = writeln!(out, "  interaction     {:?}", d.strategic_nature);
    let _ = writeln!(out, "  t_e*            {}", opt(d.t_e_star));
    let _ = writeln!(out, "  unstable root   {}", opt(d.unstable_root));
    let _ = writeln!(out, "  selected        {:?}", d.selected);
    let _ = writeln!(out, "  outcome t_e     {:.6}", d.outcome);
    let _ = writeln!(out, "  wage            {:.6}", d.wage);
    let _ = writeln!(out, "  rent enclosed   {:.6}", d.rent_enclosed);
    let _ = writeln!(out, "  rent customary  {:.6}", d.rent_customary);
    let _ = writeln!(out, "  labor income    {:.6}", d.labor_income);

    let m = &r.monopoly;
    let _ = writeln!(out, "monopoly");
    let _ = writeln!(out, "  regime          {}", m.regime);
    let _ = writeln!(out, "  enclosed land   {:.6}", m.enclosed_land);
    let _ = writeln!(out, "  profit          {:.6}", m.profit);

    let f = &r.factor_returns;
    let _ = writeln!(
        out,
        "factor returns at t_e = {:.6}, l_e = {:.6}",
        f.enclosed_land, f.enclosed_labor
    );
    returns_line(&mut out, "enclosed", &f.enclosed);
    returns_line(&mut out, "customary", &f.customary);

    let _ = writeln!(out, "externality");
    match (&r.externality, &r.externality_note) {
        (Some(x), _) => {
            let _ = writeln!(out, "  net private     {:.6}", x.net_private);
            let _ = writeln!(out, "  external cost   {:.6}", x.external_cost);
            let _ = writeln!(out, "  external benefit {:.6}", x.external_benefit);
            let _ = writeln!(out, "  total           {:.6}", x.total());
        }
        (None, note) => {
            let _ = writeln!(out, "  n/a ({})", note.as_deref().unwrap_or("undefined"));
        }
    }

    if let Some(ts) = &r.three_sector {
        let p = &ts.params;
        let _ = writeln!(
            out,
            "three sector (p {}  beta {}  A_m {}  k_bar {})",
            p.price, p.labor_share, p.tfp, p.capital_per_worker
        );
        if let Some(eq) = &ts.equilibrium {
            let _ = writeln!(out, "  regime          {}", eq.regime);
            let _ = writeln!(out, "  selected        {:?}", eq.selected);
            let _ = writeln!(out, "  outcome t_e     {:.6}", eq.outcome);
        }
        if let Some(a) = &ts.allocation {
            let _ = writeln!(out, "  enclosed labor  {:.6}", a.enclosed_labor);
            let _ = writeln!(out, "  customary labor {:.6}", a.customary_labor);
            let _ = writeln!(out, "  manuf. labor    {:.6}", a.manufacturing_labor);
            let _ = writeln!(out, "  wage            {:.6}", a.wage);
        }
        if let Some(err) = &ts.error {
            let _ = writeln!(out, "  error: {err}");
        }
    }
    out
}
