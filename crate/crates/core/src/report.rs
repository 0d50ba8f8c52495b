//! Sweep exports: a per-K CSV table, SVG line charts with confidence bands
//! and a plain-text summary. The CSV and the charts are both rendered from
//! the same [`SweepTable`] rows.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::climate::{atmospheric_share, ecs_from_lambda, ecs_interval, ecs_summary};
use crate::error::Result;
use crate::estimator::{check_level, Coefficient, ConfidenceInterval, RangeStats, SweepResult};

pub const SWEEP_CSV_HEADER: &str = "K,gamma,mu,lambda,phi,delta,se_lambda,se_phi,\
lambda_ci_lo,lambda_ci_hi,ecs,ecs_ci_lo,ecs_ci_hi,phi_ci_lo,phi_ci_hi";

/// One exported row. Climate quantities that are undefined for the fitted
/// values (λ ≤ 0, a λ band reaching below zero) are NaN.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub k: usize,
    pub gamma: f64,
    pub mu: f64,
    pub lambda: f64,
    pub phi: f64,
    pub delta: f64,
    pub se_lambda: f64,
    pub se_phi: f64,
    pub lambda_ci: (f64, f64),
    pub ecs: f64,
    pub ecs_ci: (f64, f64),
    pub phi_ci: (f64, f64),
}

impl SweepRow {
    pub fn share(&self) -> f64 {
        atmospheric_share(self.phi).unwrap_or(f64::NAN)
    }

    /// Share band from the φ band; a larger φ means a smaller share.
    pub fn share_ci(&self) -> (f64, f64) {
        match (atmospheric_share(self.phi_ci.1), atmospheric_share(self.phi_ci.0)) {
            (Ok(lo), Ok(hi)) => (lo, hi),
            _ => (f64::NAN, f64::NAN),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepTable {
    pub level: f64,
    pub rows: Vec<SweepRow>,
}

fn bounds(ci: &ConfidenceInterval) -> (f64, f64) {
    (ci.lower, ci.upper)
}

impl SweepTable {
    pub fn new(sweep: &SweepResult, level: f64) -> Result<Self> {
        check_level(level)?;
        let rows = sweep
            .fits
            .iter()
            .map(|fit| {
                let lambda_ci = fit.confidence_interval(Coefficient::Lambda, level)?;
                let phi_ci = fit.confidence_interval(Coefficient::Phi, level)?;
                let e = &fit.estimates;
                Ok(SweepRow {
                    k: fit.k,
                    gamma: e.gamma,
                    mu: e.mu,
                    lambda: e.lambda,
                    phi: e.phi,
                    delta: e.delta,
                    se_lambda: fit.std_errors.lambda,
                    se_phi: fit.std_errors.phi,
                    lambda_ci: bounds(&lambda_ci),
                    ecs: ecs_from_lambda(e.lambda).unwrap_or(f64::NAN),
                    ecs_ci: ecs_interval(&lambda_ci)
                        .map(|c| bounds(&c))
                        .unwrap_or((f64::NAN, f64::NAN)),
                    phi_ci: bounds(&phi_ci),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { level, rows })
    }

    fn column(&self, f: impl Fn(&SweepRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    fn ks(&self) -> Vec<f64> {
        self.column(|r| r.k as f64)
    }
}

/// Values use Rust's shortest round-trip formatting.
pub fn write_sweep_csv<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_CSV_HEADER}")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.gamma,
            r.mu,
            r.lambda,
            r.phi,
            r.delta,
            r.se_lambda,
            r.se_phi,
            r.lambda_ci.0,
            r.lambda_ci.1,
            r.ecs,
            r.ecs_ci.0,
            r.ecs_ci.1,
            r.phi_ci.0,
            r.phi_ci.1
        )?;
    }
    Ok(())
}

/// Four significant digits in fixed notation.
pub fn sig4(x: f64) -> String {
    if !x.is_finite() {
        return "NaN".to_string();
    }
    if x == 0.0 {
        return "0.000".to_string();
    }
    let decimals = |v: f64| (3 - v.abs().log10().floor() as i32).max(0) as usize;
    let d = decimals(x);
    let s = format!("{x:.d$}");
    // Rounding can carry into a new leading digit (9.9996 -> 10.000).
    let rounded: f64 = s.parse().unwrap_or(x);
    let d2 = decimals(rounded);
    if d2 < d {
        format!("{x:.d2$}")
    } else {
        s
    }
}

struct Series<'a> {
    label: &'a str,
    values: Vec<f64>,
    band: Option<(Vec<f64>, Vec<f64>)>,
}

struct Panel<'a> {
    title: &'a str,
    y_label: &'a str,
    series: Series<'a>,
}

const WIDTH: f64 = 760.0;
const PANEL_HEIGHT: f64 = 280.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;

fn nice_step(span: f64, target_ticks: usize) -> f64 {
    let raw = span / target_ticks as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.0 {
        2.0
    } else if norm < 7.0 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let step = nice_step(hi - lo, target);
    let first = (lo / step).ceil() * step;
    let mut out = Vec::new();
    let mut v = first;
    while v <= hi + step * 1e-9 {
        out.push(if v.abs() < step * 1e-9 { 0.0 } else { v });
        v += step;
    }
    out
}

fn fmt_tick(v: f64, step: f64) -> String {
    let d = (-step.log10().floor()).max(0.0) as usize;
    format!("{v:.d$}")
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn data_range(panel: &Panel<'_>) -> (f64, f64) {
    let mut vals: Vec<f64> = panel.series.values.clone();
    if let Some((lo, hi)) = &panel.series.band {
        vals.extend(lo);
        vals.extend(hi);
    }
    let finite = vals.into_iter().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * (1.0 + lo.abs()) {
        let pad = 0.05 * (1.0 + lo.abs());
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn render_panel(svg: &mut String, panel: &Panel<'_>, ks: &[f64], top: f64) {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let (x0, y0) = (MARGIN_LEFT, top + MARGIN_TOP);
    let k_lo = ks.first().copied().unwrap_or(0.0);
    let k_hi = ks.last().copied().unwrap_or(1.0);
    let k_span = if k_hi > k_lo { k_hi - k_lo } else { 1.0 };
    let (v_lo, v_hi) = data_range(panel);
    let px = |k: f64| x0 + (k - k_lo) / k_span * plot_w;
    let py = |v: f64| y0 + plot_h - (v - v_lo) / (v_hi - v_lo) * plot_h;

    let _ = writeln!(
        svg,
        r##"<g class="panel"><text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="15" font-weight="bold">{}</text>"##,
        x0 + plot_w / 2.0,
        top + 22.0,
        panel.title
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{x0:.2}" y="{y0:.2}" width="{plot_w:.2}" height="{plot_h:.2}" fill="none" stroke="#444"/>"##
    );

    let y_ticks = ticks(v_lo, v_hi, 5);
    let y_step = nice_step(v_hi - v_lo, 5);
    for v in &y_ticks {
        let y = py(*v);
        let _ = writeln!(
            svg,
            r##"<line x1="{x0:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end" font-size="11">{}</text>"##,
            x0 + plot_w,
            x0 - 6.0,
            y + 4.0,
            fmt_tick(*v, y_step)
        );
    }
    let x_ticks = ticks(k_lo, k_hi, 7);
    let x_step = nice_step(k_span, 7);
    for k in &x_ticks {
        let x = px(*k);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#444"/><text x="{x:.2}" y="{:.2}" text-anchor="middle" font-size="11">{}</text>"##,
            y0 + plot_h,
            y0 + plot_h + 5.0,
            y0 + plot_h + 18.0,
            fmt_tick(*k, x_step)
        );
    }
    let _ = writeln!(
        svg,
        r##"<text x="{:.2}" y="{:.2}" text-anchor="middle" font-size="12">K (number of basis functions)</text>"##,
        x0 + plot_w / 2.0,
        y0 + plot_h + 38.0
    );
    let _ = writeln!(
        svg,
        r##"<text transform="translate({:.2},{:.2}) rotate(-90)" text-anchor="middle" font-size="12">{}</text>"##,
        x0 - 55.0,
        y0 + plot_h / 2.0,
        panel.y_label
    );

    let points = |vals: &[f64]| -> Vec<(f64, f64)> {
        ks.iter()
            .zip(vals)
            .filter(|(_, v)| v.is_finite())
            .map(|(&k, &v)| (px(k), py(v)))
            .collect()
    };
    let path = |pts: &[(f64, f64)]| {
        pts.iter()
            .map(|(x, y)| format!("{x:.2},{y:.2}"))
            .collect::<Vec<_>>()
            .join(" ")
    };

    let s = &panel.series;
    if let Some((lo, hi)) = &s.band {
        let upper = points(hi);
        let mut lower = points(lo);
        lower.reverse();
        let polygon: Vec<(f64, f64)> = upper.iter().chain(&lower).copied().collect();
        let _ = writeln!(
            svg,
            r##"<polygon class="band" fill="#9ecae1" fill-opacity="0.45" stroke="none" points="{}"/>"##,
            path(&polygon)
        );
        for (class, vals) in [("band-lower", lo), ("band-upper", hi)] {
            let _ = writeln!(
                svg,
                r##"<polyline class="{class}" data-values="{}" fill="none" stroke="#3182bd" stroke-dasharray="5,4" points="{}"/>"##,
                join(vals),
                path(&points(vals))
            );
        }
    }
    let _ = writeln!(
        svg,
        r##"<polyline class="estimate" data-label="{}" data-values="{}" fill="none" stroke="#08306b" stroke-width="2" points="{}"/>"##,
        s.label,
        join(&s.values),
        path(&points(&s.values))
    );
    let _ = writeln!(svg, "</g>");
}

fn render(title: &str, ks: &[f64], panels: &[Panel<'_>]) -> String {
    let height = PANEL_HEIGHT * panels.len() as f64;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"##
    );
    let _ = writeln!(svg, "<title>{title}</title>");
    let _ = writeln!(svg, r##"<rect width="{WIDTH}" height="{height}" fill="white"/>"##);
    let _ = writeln!(svg, r##"<desc>K grid: {}</desc>"##, join(ks));
    for (i, panel) in panels.iter().enumerate() {
        render_panel(&mut svg, panel, ks, i as f64 * PANEL_HEIGHT);
    }
    svg.push_str("</svg>\n");
    svg
}

/// λ̂ and the implied ECS against K, each with its pointwise band.
pub fn lambda_ecs_svg(table: &SweepTable) -> String {
    let pct = (table.level * 100.0).round();
    let lambda_title = format!("Estimated lambda with {pct}% band");
    let ecs_title = format!("Implied ECS with {pct}% band");
    let panels = [
        Panel {
            title: &lambda_title,
            y_label: "lambda (W/m² per °C)",
            series: Series {
                label: "lambda",
                values: table.column(|r| r.lambda),
                band: Some((table.column(|r| r.lambda_ci.0), table.column(|r| r.lambda_ci.1))),
            },
        },
        Panel {
            title: &ecs_title,
            y_label: "ECS (°C per CO₂ doubling)",
            series: Series {
                label: "ecs",
                values: table.column(|r| r.ecs),
                band: Some((table.column(|r| r.ecs_ci.0), table.column(|r| r.ecs_ci.1))),
            },
        },
    ];
    render("lambda and implied ECS across K", &table.ks(), &panels)
}

/// φ̂ and the implied atmospheric heat share against K.
pub fn phi_share_svg(table: &SweepTable) -> String {
    let pct = (table.level * 100.0).round();
    let phi_title = format!("Estimated phi with {pct}% band");
    let share_title = "Atmospheric share of stored heat (31/phi)";
    let panels = [
        Panel {
            title: &phi_title,
            y_label: "phi (W-yr/m² per °C)",
            series: Series {
                label: "phi",
                values: table.column(|r| r.phi),
                band: Some((table.column(|r| r.phi_ci.0), table.column(|r| r.phi_ci.1))),
            },
        },
        Panel {
            title: share_title,
            y_label: "share (%)",
            series: Series {
                label: "share",
                values: table.column(SweepRow::share),
                band: Some((table.column(|r| r.share_ci().0), table.column(|r| r.share_ci().1))),
            },
        },
    ];
    render("phi and atmospheric heat share across K", &table.ks(), &panels)
}

/// Metadata printed at the top of the text report.
#[derive(Clone, Debug, Default)]
pub struct ReportContext {
    pub label: String,
    pub start_year: i64,
    pub end_year: i64,
    pub covariance: String,
    pub timestamp: Option<String>,
}

fn stats_line(name: &str, s: &RangeStats) -> String {
    format!("{name}: min {} mean {} max {}", sig4(s.min), sig4(s.mean), sig4(s.max))
}

pub fn text_report(sweep: &SweepResult, table: &SweepTable, ctx: &ReportContext) -> String {
    let mut out = String::new();
    let grid = &sweep.grid;
    let _ = writeln!(out, "TAOLS K-sweep report");
    let _ = writeln!(out, "dataset: {}", ctx.label);
    let _ = writeln!(
        out,
        "observations: T = {} ({}-{})",
        sweep.t(),
        ctx.start_year,
        ctx.end_year
    );
    let _ = writeln!(
        out,
        "K grid: {} values from {} to {}",
        grid.len(),
        grid[0],
        grid[grid.len() - 1]
    );
    let _ = writeln!(out, "confidence level: {}", sig4(table.level));
    let _ = writeln!(out, "standard errors: {}", ctx.covariance);
    let _ = writeln!(out, "{}", stats_line("lambda", &sweep.summary.lambda));
    let _ = writeln!(out, "{}", stats_line("phi", &sweep.summary.phi));
    match ecs_summary(sweep) {
        Ok(ecs) => {
            let _ = writeln!(
                out,
                "ECS in [{}, {}], mean {} (at mean lambda)",
                sig4(ecs.range.0),
                sig4(ecs.range.1),
                sig4(ecs.at_mean_lambda)
            );
            let _ = writeln!(out, "{}", stats_line("ECS per-K", &ecs.per_k));
        }
        Err(e) => {
            let _ = writeln!(out, "ECS undefined: {e}");
        }
    }
    let shares: Vec<f64> = table.rows.iter().map(SweepRow::share).collect();
    if shares.iter().all(|s| s.is_finite()) {
        let _ = writeln!(out, "{}", stats_line("atmospheric share (%)", &RangeStats::of(shares)));
    } else {
        let _ = writeln!(out, "atmospheric share (%): undefined for non-positive phi");
    }
    let lambda_w = RangeStats::of(table.rows.iter().map(|r| r.lambda_ci.1 - r.lambda_ci.0));
    let _ = writeln!(out, "{}", stats_line("lambda band width", &lambda_w));
    if let Some(ts) = &ctx.timestamp {
        let _ = writeln!(out, "generated: {ts}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(sig4(1.709), "1.709");
        assert_eq!(sig4(2.17), "2.170");
        assert_eq!(sig4(20.123), "20.12");
        assert_eq!(sig4(0.012345), "0.01235");
        assert_eq!(sig4(-3.04159), "-3.042");
        assert_eq!(sig4(12345.6), "12346");
        assert_eq!(sig4(9.99996), "10.00");
        assert_eq!(sig4(0.0), "0.000");
        assert_eq!(sig4(f64::NAN), "NaN");
    }

    #[test]
    fn tick_generation() {
        assert_eq!(ticks(0.0, 10.0, 5), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        let t = ticks(1.43, 1.81, 5);
        assert!(t.first().unwrap() >= &1.43 && t.last().unwrap() <= &1.81);
        assert!(t.len() >= 3);
    }
}
