//! SVG figures from trial records: per-algorithm mean ± standard deviation
//! bars, and metric-versus-obstacle-count sweep lines.

use std::fmt::Write as _;
use std::path::Path;

use super::{algorithms_in, group_by_algorithm, mean, std_dev, BenchError, Metric, PlannedPath, PlanningScene, TrialRecord};

const WIDTH: f64 = 640.0;
const PANEL_HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;
const PALETTE: [&str; 7] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"];

/// Plot area of one panel, in SVG coordinates.
struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    lo: f64,
    hi: f64,
}

impl Frame {
    fn new(top: f64, lo: f64, hi: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        Frame {
            x0: MARGIN_LEFT,
            y0: top + MARGIN_TOP,
            w: WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
            h: PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
            lo,
            hi,
        }
    }

    fn y(&self, v: f64) -> f64 {
        self.y0 + self.h * (1.0 - (v - self.lo) / (self.hi - self.lo))
    }

    fn axes(&self, svg: &mut String, title: &str, x_label: &str, y_label: &str) {
        let (x0, y0, w, h) = (self.x0, self.y0, self.w, self.h);
        let _ = writeln!(svg, r#"<text class="title" x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, x0 + w / 2.0, y0 - 15.0, escape(title));
        let _ = writeln!(svg, r#"<line class="axis" x1="{x0:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}"/>"#, y0 + h, x0 + w, y0 + h);
        let _ = writeln!(svg, r#"<line class="axis" x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}"/>"#, y0 + h);
        for i in 0..=4 {
            let v = self.lo + (self.hi - self.lo) * i as f64 / 4.0;
            let y = self.y(v);
            let _ = writeln!(svg, r#"<line class="tick" x1="{:.1}" y1="{y:.1}" x2="{x0:.1}" y2="{y:.1}"/>"#, x0 - 5.0);
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, x0 - 8.0, y + 4.0, tick_label(v));
        }
        let _ = writeln!(svg, r#"<text class="xlabel" x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, x0 + w / 2.0, y0 + h + 45.0, escape(x_label));
        let (lx, ly) = (x0 - 60.0, y0 + h / 2.0);
        let _ = writeln!(svg, r#"<text class="ylabel" x="{lx:.1}" y="{ly:.1}" text-anchor="middle" transform="rotate(-90 {lx:.1} {ly:.1})">{}</text>"#, escape(y_label));
    }
}

fn tick_label(v: f64) -> String {
    if v.abs() >= 100.0 || v == 0.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.1}")
    } else {
        format!("{v:.3}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(height: f64) -> String {
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}" font-family="sans-serif" font-size="12">"#);
    svg.push_str("<style>.axis{stroke:#000;stroke-width:1}.tick{stroke:#000}.title{font-size:14px;font-weight:bold}.err{stroke:#000;stroke-width:1.5}</style>\n");
    let _ = writeln!(svg, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    svg
}

/// Bar chart of the per-algorithm mean of `metric` with ±1 standard
/// deviation error bars over successful trials.
pub fn bar_chart_svg(records: &[TrialRecord], metric: Metric) -> Result<String, BenchError> {
    let labels = algorithms_in(records);
    let groups: Vec<_> = labels.iter().map(|l| group_by_algorithm(records, metric, l)).collect();
    let stats: Vec<Option<(f64, f64)>> = groups.iter().map(|g| mean(&g.values).map(|m| (m, std_dev(&g.values)))).collect();
    if stats.iter().all(Option::is_none) {
        return Err(BenchError::EmptyInput);
    }
    let hi = stats.iter().flatten().map(|&(m, s)| m + s).fold(0.0, f64::max);
    let lo = stats.iter().flatten().map(|&(m, s)| m - s).fold(0.0, f64::min);
    let frame = Frame::new(0.0, lo, hi * 1.05);
    let mut svg = header(PANEL_HEIGHT);
    frame.axes(&mut svg, &format!("{} by algorithm (mean ± sd)", metric.name()), "algorithm", metric.axis_label());
    let slot = frame.w / labels.len() as f64;
    for (i, (g, s)) in groups.iter().zip(&stats).enumerate() {
        let cx = frame.x0 + slot * (i as f64 + 0.5);
        let _ = writeln!(svg, r#"<text x="{cx:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, frame.y0 + frame.h + 18.0, escape(&g.label));
        let Some((m, sd)) = *s else { continue };
        let (top, base) = (frame.y(m.max(0.0)), frame.y(m.min(0.0)));
        let bw = slot * 0.6;
        let _ = writeln!(
            svg,
            r#"<rect class="bar" data-algorithm="{}" data-mean="{m}" data-sd="{sd}" x="{:.1}" y="{top:.1}" width="{bw:.1}" height="{:.1}" fill="{}"/>"#,
            escape(&g.label),
            cx - bw / 2.0,
            base - top,
            PALETTE[i % PALETTE.len()]
        );
        let (y1, y2) = (frame.y(m - sd), frame.y(m + sd));
        let _ = writeln!(svg, r#"<line class="err" x1="{cx:.1}" y1="{y1:.1}" x2="{cx:.1}" y2="{y2:.1}"/>"#);
        for y in [y1, y2] {
            let _ = writeln!(svg, r#"<line class="err" x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}"/>"#, cx - 6.0, cx + 6.0);
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Obstacle count of a scenario: the trailing integer of its id (as in
/// `fruits-12`), if any.
pub fn obstacle_count(scenario_id: &str) -> Option<f64> {
    let digits: String = scenario_id.chars().rev().take_while(char::is_ascii_digit).collect();
    let digits: String = digits.chars().rev().collect();
    digits.parse::<u64>().ok().map(|v| v as f64)
}

/// One panel per metric; within a panel, one polyline per algorithm of the
/// mean over successful trials against obstacle count. Scenario ids without
/// a trailing number are placed at their first-appearance ordinal.
pub fn sweep_chart_svg(records: &[TrialRecord], metrics: &[Metric]) -> Result<String, BenchError> {
    if records.is_empty() || metrics.is_empty() {
        return Err(BenchError::EmptyInput);
    }
    let mut scenarios: Vec<&str> = Vec::new();
    for r in records {
        if !scenarios.contains(&r.scenario_id.as_str()) {
            scenarios.push(&r.scenario_id);
        }
    }
    let by_number = scenarios.iter().all(|s| obstacle_count(s).is_some());
    let x_of = |id: &str| -> f64 {
        if by_number {
            obstacle_count(id).expect("checked above")
        } else {
            scenarios.iter().position(|s| *s == id).expect("collected above") as f64
        }
    };
    let mut xs: Vec<f64> = scenarios.iter().map(|s| x_of(s)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let (x_lo, x_hi) = (xs[0], *xs.last().expect("non-empty"));
    let x_label = if by_number { "obstacle count" } else { "scenario" };
    let algos = algorithms_in(records);

    let mut svg = header(PANEL_HEIGHT * metrics.len() as f64);
    for (pi, &metric) in metrics.iter().enumerate() {
        // series[a] = (x, mean) points in ascending x.
        let series: Vec<Vec<(f64, f64)>> = algos
            .iter()
            .map(|a| {
                xs.iter()
                    .filter_map(|&x| {
                        let vals: Vec<f64> = records
                            .iter()
                            .filter(|r| &r.algorithm == a && x_of(&r.scenario_id) == x)
                            .filter_map(|r| metric.value(r))
                            .collect();
                        mean(&vals).map(|m| (x, m))
                    })
                    .collect()
            })
            .collect();
        let values = series.iter().flatten().map(|&(_, m)| m);
        let lo = values.clone().fold(f64::INFINITY, f64::min).min(0.0);
        let hi = values.fold(f64::NEG_INFINITY, f64::max);
        let hi = if hi.is_finite() { hi * 1.05 } else { 1.0 };
        let frame = Frame::new(PANEL_HEIGHT * pi as f64, lo, hi);
        frame.axes(&mut svg, &format!("{} vs {x_label}", metric.name()), x_label, metric.axis_label());
        let sx = |x: f64| if x_hi > x_lo { frame.x0 + frame.w * (x - x_lo) / (x_hi - x_lo) } else { frame.x0 + frame.w / 2.0 };
        for &x in &xs {
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, sx(x), frame.y0 + frame.h + 18.0, tick_label(x));
        }
        for (ai, (a, pts)) in algos.iter().zip(&series).enumerate() {
            if pts.is_empty() {
                continue;
            }
            let color = PALETTE[ai % PALETTE.len()];
            let coords: Vec<String> = pts.iter().map(|&(x, m)| format!("{:.1},{:.1}", sx(x), frame.y(m))).collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="series" data-metric="{}" data-algorithm="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                metric.name(),
                escape(a),
                coords.join(" ")
            );
            let ly = frame.y0 + 15.0 * ai as f64;
            let lx = frame.x0 + frame.w + 15.0;
            let _ = writeln!(svg, r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0);
            let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}">{}</text>"#, lx + 25.0, ly + 4.0, escape(a));
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Side view (`x` right, `z` up) of a planned path: raw obstacles filled,
/// polyline nodes as dots, the smoothed curve when there is one.
pub fn path_svg(scene: &PlanningScene, path: &PlannedPath) -> String {
    let env = scene.planar();
    let (lo, hi) = (env.bounds_min, env.bounds_max);
    let scale = (WIDTH - 40.0) / (hi.x - lo.x);
    let height = (hi.z - lo.z) * scale + 40.0;
    let sx = |x: f64| 20.0 + (x - lo.x) * scale;
    let sz = |z: f64| 20.0 + (hi.z - z) * scale;
    let fmt_pts = |pts: &mut dyn Iterator<Item = (f64, f64)>| pts.map(|(x, z)| format!("{:.2},{:.2}", sx(x), sz(z))).collect::<Vec<_>>().join(" ");

    let mut svg = header(height);
    let _ = writeln!(svg, r##"<rect x="20" y="20" width="{:.2}" height="{:.2}" fill="none" stroke="#888"/>"##, (hi.x - lo.x) * scale, (hi.z - lo.z) * scale);
    for o in &env.obstacles {
        let pts = fmt_pts(&mut o.polygon.vertices().iter().map(|v| (v.x, v.z)));
        let _ = writeln!(svg, r##"<polygon class="obstacle" data-id="{}" points="{pts}" fill="#f4a6a6" stroke="#a33"/>"##, escape(&o.id));
    }
    let (nodes, smoothed): (Vec<(f64, f64)>, Vec<(f64, f64)>) = match path {
        PlannedPath::Planar { path, .. } => (path.nodes.iter().map(|q| (q.x, q.z)).collect(), vec![]),
        PlannedPath::Spatial(p) => (
            p.nodes.iter().map(|q| (q.x, q.z)).collect(),
            p.smoothed.iter().map(|q| (q.x, q.z)).collect(),
        ),
    };
    let _ = writeln!(svg, r##"<polyline class="path" points="{}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>"##, fmt_pts(&mut nodes.iter().copied()));
    if !smoothed.is_empty() {
        let _ = writeln!(svg, r##"<polyline class="smoothed" points="{}" fill="none" stroke="#2ca02c" stroke-width="2"/>"##, fmt_pts(&mut smoothed.iter().copied()));
    }
    for &(x, z) in &nodes {
        let _ = writeln!(svg, r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f77b4"/>"##, sx(x), sz(z));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Writes a figure atomically.
pub fn write_svg(svg: &str, path: &Path) -> Result<(), BenchError> {
    crate::io::write_atomic(path, svg.as_bytes()).map_err(|e| BenchError::Io { path: path.into(), message: e.to_string() })
}
