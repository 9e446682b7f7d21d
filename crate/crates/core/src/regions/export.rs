use std::io::Write;

use serde_json::Value;

use super::{ColorBy, Inefficiency, SweepGrid};
use crate::error::Result;
use crate::planner::RegimeKind;

/// Leading columns of every sweep CSV. Each requested solver then adds
/// `<solver>_label`, `<solver>_t_e` and `<solver>_welfare` (solvers in the
/// order first_best, second_best, decentralized, monopoly), followed by
/// `decentralized_selected`, `welfare_gap`, `inefficiency` and `error`.
pub const CSV_FIXED_COLUMNS: [&str; 2] = ["theta", "lbar"];

/// Rounds to 9 significant digits.
pub fn round_sig9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

/// Shortest decimal form of `x` rounded to 9 significant digits.
pub fn format_sig9(x: f64) -> String {
    format!("{}", round_sig9(x))
}

fn opt_str(x: Option<f64>) -> String {
    x.map(format_sig9).unwrap_or_default()
}

pub fn write_csv<W: Write>(grid: &SweepGrid, out: W) -> Result<()> {
    let solvers = grid.spec.solver_set();
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = CSV_FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    for s in &solvers {
        for suffix in ["label", "t_e", "welfare"] {
            header.push(format!("{}_{suffix}", s.as_str()));
        }
    }
    header.extend(
        [
            "decentralized_selected",
            "welfare_gap",
            "inefficiency",
            "error",
        ]
        .map(String::from),
    );
    w.write_record(&header)?;
    for cell in &grid.cells {
        let mut row = vec![format_sig9(cell.theta), format_sig9(cell.lbar)];
        for s in &solvers {
            match cell.outcome(*s) {
                Some(o) => {
                    row.push(o.regime.kind().as_str().to_string());
                    row.push(format_sig9(o.t_e));
                    row.push(format_sig9(o.welfare));
                }
                None => row.extend([String::new(), String::new(), String::new()]),
            }
        }
        row.push(
            cell.decentralized_selected
                .map(|s| {
                    serde_json::to_value(s)
                        .ok()
                        .and_then(|v| v.as_str().map(String::from))
                        .unwrap_or_default()
                })
                .unwrap_or_default(),
        );
        row.push(opt_str(cell.welfare_gap));
        row.push(
            cell.inefficiency
                .map(|i| i.as_str().to_string())
                .unwrap_or_default(),
        );
        row.push(cell.error.clone().unwrap_or_default());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if let Some(x) = n.as_f64().filter(|_| n.is_f64()) {
                if let Some(r) = serde_json::Number::from_f64(round_sig9(x)) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Pretty JSON of the whole grid with floats rounded to 9 significant digits.
pub fn write_json<W: Write>(grid: &SweepGrid, mut out: W) -> Result<()> {
    let mut value = serde_json::to_value(grid)?;
    round_numbers(&mut value);
    serde_json::to_writer_pretty(&mut out, &value)?;
    out.write_all(b"\n")?;
    Ok(())
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 190.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;

const LOCUS_COLORS: [&str; 6] = [
    "#111111", "#c51b7d", "#1a9850", "#d95f02", "#7570b3", "#e6ab02",
];

fn regime_fill(kind: RegimeKind) -> &'static str {
    match kind {
        RegimeKind::NoEnclosure => "#f0f0f0",
        RegimeKind::Partial => "#9ecae1",
        RegimeKind::Full => "#3182bd",
        RegimeKind::Multiple => "#fdae6b",
    }
}

fn inefficiency_fill(i: Inefficiency) -> &'static str {
    match i {
        Inefficiency::Efficient => "#f0f0f0",
        Inefficiency::Excessive => "#de2d26",
        Inefficiency::Insufficient => "#6baed6",
        Inefficiency::CoordinationFailure => "#08519c",
    }
}

/// Flat-filled region map on `(theta, ln lbar)` axes with loci overlaid.
pub fn write_svg<W: Write>(
    grid: &SweepGrid,
    color_by: ColorBy,
    title: &str,
    mut out: W,
) -> Result<()> {
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let (t0, t1) = (grid.spec.theta.min, grid.spec.theta.max);
    let (y0, y1) = (grid.spec.lbar.min.ln(), grid.spec.lbar.max.ln());
    let nt = grid.thetas.len();
    let nl = grid.lbars.len();
    let cw = plot_w / nt as f64;
    let ch = plot_h / nl as f64;
    let x_of = |theta: f64| LEFT + (theta - t0) / (t1 - t0) * (plot_w - cw) + cw / 2.0;
    let y_of = |lbar: f64| TOP + plot_h - ch / 2.0 - (lbar.ln() - y0) / (y1 - y0) * (plot_h - ch);

    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )?;
    writeln!(out, r#"<title>{}</title>"#, escape(title))?;
    writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    )?;
    writeln!(
        out,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}"/></clipPath></defs>"#
    )?;
    writeln!(out, r#"<g shape-rendering="crispEdges">"#)?;
    for i in 0..nt {
        for j in 0..nl {
            let cell = grid.cell(i, j);
            let fill = match color_by {
                _ if cell.error.is_some() => "#000000",
                ColorBy::Solver(s) => cell
                    .outcome(s)
                    .map(|o| regime_fill(o.regime.kind()))
                    .unwrap_or("#ffffff"),
                ColorBy::Inefficiency => cell
                    .inefficiency
                    .map(inefficiency_fill)
                    .unwrap_or("#ffffff"),
            };
            let x = LEFT + i as f64 * cw;
            let y = TOP + plot_h - (j + 1) as f64 * ch;
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                x,
                y,
                cw + 0.05,
                ch + 0.05
            )?;
        }
    }
    writeln!(out, "</g>")?;

    writeln!(
        out,
        r#"<g clip-path="url(#plot)" fill="none" stroke-width="1.6">"#
    )?;
    for (k, locus) in grid.loci.iter().enumerate() {
        let color = LOCUS_COLORS[k % LOCUS_COLORS.len()];
        for seg in &locus.segments {
            let pts: Vec<String> = seg
                .iter()
                .map(|p| format!("{:.2},{:.2}", x_of(p[0]), y_of(p[1])))
                .collect();
            writeln!(
                out,
                r#"<polyline stroke="{color}" points="{}"><title>{}</title></polyline>"#,
                pts.join(" "),
                locus.name
            )?;
        }
    }
    writeln!(out, "</g>")?;

    writeln!(
        out,
        r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##
    )?;
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + plot_w / 2.0,
        escape(title)
    )?;
    for k in 0..=5 {
        let theta = t0 + (t1 - t0) * k as f64 / 5.0;
        let x = LEFT + cw / 2.0 + (plot_w - cw) * k as f64 / 5.0;
        writeln!(
            out,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + plot_h + 18.0,
            format_sig9(round_to(theta, 3))
        )?;
    }
    for k in 0..=5 {
        let ln_l = y0 + (y1 - y0) * k as f64 / 5.0;
        let y = TOP + plot_h - ch / 2.0 - (plot_h - ch) * k as f64 / 5.0;
        writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            LEFT - 6.0,
            format_sig9(round_to(ln_l, 2))
        )?;
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">theta</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 20.0
    )?;
    writeln!(
        out,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">ln lbar</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    )?;

    let legend_x = WIDTH - RIGHT + 16.0;
    let mut y = TOP + 6.0;
    let fills: Vec<(&str, &str)> = match color_by {
        ColorBy::Solver(_) => [
            RegimeKind::NoEnclosure,
            RegimeKind::Partial,
            RegimeKind::Full,
            RegimeKind::Multiple,
        ]
        .iter()
        .map(|k| (k.as_str(), regime_fill(*k)))
        .collect(),
        ColorBy::Inefficiency => [
            Inefficiency::Efficient,
            Inefficiency::Excessive,
            Inefficiency::Insufficient,
            Inefficiency::CoordinationFailure,
        ]
        .iter()
        .map(|i| (i.as_str(), inefficiency_fill(*i)))
        .collect(),
    };
    for (label, fill) in fills {
        writeln!(
            out,
            r##"<rect x="{legend_x}" y="{y}" width="12" height="12" fill="{fill}" stroke="#333"/>"##
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}">{label}</text>"#,
            legend_x + 18.0,
            y + 10.0
        )?;
        y += 18.0;
    }
    y += 8.0;
    for (k, locus) in grid.loci.iter().enumerate() {
        let color = LOCUS_COLORS[k % LOCUS_COLORS.len()];
        writeln!(
            out,
            r#"<line x1="{legend_x}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            y + 6.0,
            legend_x + 12.0,
            y + 6.0
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}">{}</text>"#,
            legend_x + 18.0,
            y + 10.0,
            locus.name
        )?;
        y += 18.0;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}

fn round_to(x: f64, digits: i32) -> f64 {
    let s = 10f64.powi(digits);
    (x * s).round() / s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
